"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible even under
output capture) and then asserts.  Run just this file with::

    pytest tests/test_acceptance.py -v
"""
import itertools
import math
import random
import time

import pytest

import oracles
from locperf import certificate as cert
from locperf.abelian import FgAbelianGroup, IntMatrix, image, membership, same_subgroup, smith_normal_form
from locperf.cli import run
from locperf.elliptic import INFINITY, Curve, CurvePoint, enumerate_points, group_structure, mul, order_of
from locperf.quadforms import (
    QuadOrder, class_group, compose, enumerate_reduced, factor_prime, is_squarefree, principal_form,
)
from locperf.thickening import DedekindModel, doubling_hom, perfect_subgroup, quadratic_model, verify_thick

CLI_RUNS = {
    1: [["classgroup", "--d", "-21"]],
    2: [["verify-thick", "--d", "-21", "--auto"]]
       + [["verify-thick", "--d", "-21", "--p", p, "--q", q, "--remove", r]
          for p, q, r in itertools.permutations(["2", "3", "5"])],
    7: [["verify-glued", "--pic", "z", "--p", "1"],
        ["verify-glued", "--pic", "curve:5,1,1", "--p", "0,1"]],
    8: [["verify-nodal", "--curve", "5,1,1", "--point", "0,1"],
        ["verify-nodal", "--curve", "5,1,0", "--point", "0,0"]],
}


@pytest.fixture
def report(capsys):
    def _report(n, label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {label}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return _report


def handled(bound):
    return [d for d in range(-1, -(bound // 4) - 1, -1) if is_squarefree(d) and d % 4 in (2, 3)]


# 1

def test_criterion_1_class_group_minus_21(report):
    t0 = time.perf_counter()
    doc, code, _ = run(CLI_RUNS[1][0])
    cert.dump(doc)
    elapsed = time.perf_counter() - t0
    res = doc["result"]
    expected = [list(f) for f in oracles.brute_reduced_forms(-84)]
    ok = (code == 0 and res["invariant_factors"] == [2, 2] and res["forms"] == expected
          and expected == [[1, 0, 21], [2, 2, 11], [3, 0, 7], [5, 4, 5]] and elapsed < 1.0)
    report(1, "classgroup --d -21 gives [2,2] and the four reduced forms", ok, f"{elapsed:.3f}s")


# 2

def test_criterion_2_thick_replay(report):
    doc, code, _ = run(CLI_RUNS[2][0])
    g = doc["global"]
    kg = FgAbelianGroup(g["k_group"]["free_rank"], tuple(g["k_group"]["torsion"]))
    gl = [g["class"]["rank"]] + g["class"]["det"]
    perfect = g["perfect"]
    checks = [
        code == 0,
        kg == FgAbelianGroup(1, (2,)),
        gl == [2, 1],
        perfect["verdict"] == "non_member" and perfect["generators"] == [[2, 0]],
        perfect["residue"] != [0],
    ]
    for loc in doc["locals"].values():
        checks.append(loc["class"] == {"rank": 2, "det": []})
        checks.append(loc["perfect"]["verdict"] == "member")
        checks.append(loc["perfect"]["generators"] == [[2]])
    cli_codes = [run(argv)[1] for argv in CLI_RUNS[2][1:]]
    o = QuadOrder(-21)
    primes = [factor_prime(o, n) for n in (2, 3, 5)]
    verdicts = [verify_thick(quadratic_model(-21, [p, q], [r]), p.name(), q.name()).verdict
                for p, q, r in itertools.permutations(primes)]
    ok = (all(checks) and cli_codes == [0] * 6
          and verdicts == ["counterexample_verified"] * 6)
    report(2, "verify-thick --d -21 --auto and all 6 (p,q,r) assignments", ok,
           f"global {gl} non-member of 2Z+0, cli exits {cli_codes}")


# 3

def doubling_models():
    models = [class_group(QuadOrder(d)).group for d in handled(200)]
    rng = random.Random(3)
    while len(models) < 40:
        chain = [rng.randint(2, 8)]
        for _ in range(rng.randint(0, 2)):
            chain.append(chain[-1] * rng.randint(1, 3))
        if math.prod(chain) <= 64:
            models.append(FgAbelianGroup(0, tuple(chain)))
    return models


def doubling_documents():
    docs = []
    for cl in doubling_models():
        m = DedekindModel(cl, {})
        a, b = image(doubling_hom(m)), perfect_subgroup(m)
        recs = {}
        for i, x in enumerate(a.generators):
            recs[f"image_in_scaled{i}"] = cert.membership_record(membership(b, x))
        for i, x in enumerate(b.generators):
            recs[f"scaled_in_image{i}"] = cert.membership_record(membership(a, x))
        docs.append(({"schema_version": 1, "class_group": cert.group_record(cl), **recs},
                     same_subgroup(a, b)))
    return docs


def test_criterion_3_doubling_image(report):
    results = doubling_documents()
    failures = sum(1 for _, ok in results if not ok)
    members = all(rec["verdict"] == "member" for doc, _ in results
                  for k, rec in doc.items() if isinstance(rec, dict) and rec.get("kind") == "membership")
    ok = len(results) >= 20 and failures == 0 and members
    report(3, "image of doubling equals 2K by mutual membership", ok,
           f"{len(results)} models, {failures} failures")


# 4

def random_matrices(n=500):
    rng = random.Random(4)
    for _ in range(n):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        yield IntMatrix.from_rows([[rng.randint(-50, 50) for _ in range(c)] for _ in range(r)])


def snf_record(m):
    u, d, v = smith_normal_form(m)
    return {"kind": "snf", "rows": m.rows, "cols": m.cols, "matrix": m.to_rows(),
            "u": u.to_rows(), "d": d.to_rows(), "v": v.to_rows()}


def test_criterion_4_snf_property_suite(report):
    bad = 0
    count = 0
    for m in random_matrices():
        count += 1
        u, d, v = smith_normal_form(m)
        diag = d.diagonal()
        chain = all((b == 0) if a == 0 else b % a == 0 for a, b in zip(diag, diag[1:]))
        if not (u @ m @ v == d and abs(cert.det(u.to_rows())) == 1 and abs(cert.det(v.to_rows())) == 1
                and d.is_diagonal() and min(diag, default=0) >= 0 and chain):
            bad += 1
    report(4, "SNF on 500 random matrices up to 8x8, |entries| <= 50", bad == 0 and count == 500,
           f"{bad} failures")


# 5

def test_criterion_5_composition_group_laws(report):
    discs = handled(500)
    failures = []
    for d in discs:
        forms = enumerate_reduced(QuadOrder(d))
        fs = set(forms)
        one = principal_form(4 * d)
        if any(compose(one, f) != f or compose(f, f.inverse()) != one for f in forms):
            failures.append(d)
            continue
        if any(compose(f, g) not in fs for f in forms for g in forms):
            failures.append(d)
            continue
        rng = random.Random(d)
        for _ in range(100):
            f, g, h = (rng.choice(forms) for _ in range(3))
            if compose(compose(f, g), h) != compose(f, compose(g, h)):
                failures.append(d)
                break
        if -4 * d <= 200:
            reduced = {(f.a, f.b, f.c) for f in forms}
            comps = oracles.orbit_components(4 * d, -d + 2)
            if len(comps) != len(forms) or any(len(c & reduced) != 1 for c in comps):
                failures.append(d)
    report(5, "composition group laws for |disc| <= 500, orbit oracle for |disc| <= 200",
           not failures, f"{len(discs)} discriminants, failures {failures}")


# 6

def test_criterion_6_elliptic_suite(report):
    bad = []
    curves = 0
    for p in (5, 7, 11, 13):
        for a, b in itertools.product(range(p), repeat=2):
            if (4 * a ** 3 + 27 * b ** 2) % p == 0:
                continue
            c = Curve(p, a, b)
            pts = enumerate_points(c)
            curves += 1
            n = len(pts)
            if n != oracles.count_points(p, a, b) or abs(n - (p + 1)) > 2 * math.sqrt(p):
                bad.append((p, a, b, "hasse"))
            if any(mul(c, n, P) != INFINITY for P in pts):
                bad.append((p, a, b, "lagrange"))
    cg = group_structure(Curve(5, 1, 1))
    ok = (not bad and cg.group.torsion == (9,) and order_of(cg, CurvePoint(0, 1)) == 9)
    report(6, "Hasse and Lagrange over F5..F13, y^2=x^3+x+1/F5 cyclic of order 9", ok,
           f"{curves} curves, {len(bad)} failures")


# 7

def test_criterion_7_glued_replay(report):
    doc, code, _ = run(CLI_RUNS[7][0])
    obs = doc["obstruction"]
    pieces = list(doc["cover"].values())
    ok = (code == 0 and obs["element"] == [1, 0] and obs["verdict"] == "non_member"
          and [g for g in obs["generators"] if any(g)] == [[1, 1]]
          and len(pieces) == 2 and all(p["valid"] and p["trivial"]["verdict"] == "member" for p in pieces)
          and not set(pieces[0]["removed"]) & set(pieces[1]["removed"]) and doc["covering"])
    _, code_e, _ = run(CLI_RUNS[7][1])
    report(7, "verify-glued --pic z --p 1 and the elliptic-backed run", ok and code_e == 0,
           f"exits {code}, {code_e}")


# 8

def test_criterion_8_nodal_audit(report):
    doc, code, _ = run(CLI_RUNS[8][0])
    p1 = doc["curve"]["p1_class"]
    jac = doc["curve"]["jac"]["torsion"]
    two_p = [(2 * x) % m for x, m in zip(p1, jac)]
    v1 = doc["claim2"]["V1"]
    v1_classes = sorted([v1["fiber_p1"]["class"], v1["fiber_p2"]["class"]])
    ok = (code == 2 and doc["claim1"]["verified"] and doc["paper_claim_match"] is False
          and v1_classes == sorted([[0] * len(jac), two_p]) and any(two_p))
    _, code2, _ = run(CLI_RUNS[8][1])
    report(8, "verify-nodal certifies claim 1 and flags claim 2; order-2 point rejected",
           ok and code2 == 1, f"exits {code}, {code2}; V1 fiber classes {v1_classes}")


# 9

def all_documents():
    docs = [run(argv)[0] for runs in CLI_RUNS.values() for argv in runs]
    docs += [doc for doc, _ in doubling_documents()]
    docs += [{"schema_version": 1, "result": snf_record(m)}
             for m in itertools.islice(random_matrices(), 50)]
    return docs


def test_criterion_9_certificate_integrity(report):
    docs = all_documents()
    errors = []
    for i, doc in enumerate(docs):
        errs = cert.check_document(cert.parse(cert.dump(doc)))
        errors += [f"doc {i}: {e}" for e in errs]
    first = [cert.dump(d) for d in docs]
    second = [cert.dump(d) for d in all_documents()]
    identical = first == second
    report(9, "every emitted document re-verifies and repeats byte-identically",
           not errors and identical, f"{len(docs)} documents, {len(errors)} errors, identical={identical}")
