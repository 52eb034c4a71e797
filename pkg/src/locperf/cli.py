"""Command-line front end.

Exit codes: 0 verified (or plain computation), 1 hypotheses failed,
2 published-claim mismatch, 3 input error.  Documents go to stdout or ``--out``;
diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import certificate as cert
from . import elliptic as ell
from . import quadforms as qf
from . import surfaces as surf
from . import thickening as thick
from .abelian import IntMatrix, canonicalize, smith_normal_form

INPUT_ERROR = 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _doc(subcommand: str, inputs: dict) -> dict:
    return {"schema_version": cert.SCHEMA_VERSION, "subcommand": subcommand, "inputs": inputs}


def _order(d: int) -> qf.QuadOrder:
    try:
        return qf.QuadOrder(d)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# snf

def run_snf(args) -> dict:
    try:
        text = sys.stdin.read() if args.matrix == "-" else Path(args.matrix).read_text()
        m = IntMatrix.parse(text)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read matrix: {exc}") from None
    u, d, v = smith_normal_form(m)
    g, _ = canonicalize(m.cols, m)
    doc = _doc("snf", {"rows": m.rows, "cols": m.cols, "matrix": m.to_rows()})
    doc["result"] = {
        "kind": "snf", "rows": m.rows, "cols": m.cols, "matrix": m.to_rows(),
        "u": u.to_rows(), "d": d.to_rows(), "v": v.to_rows(),
        "diagonal": d.diagonal(),
        "cokernel": cert.group_record(g),
    }
    doc["verdict"] = "computed"
    return doc


# classgroup / factor-prime

def classgroup_record(cg: qf.ClassGroup) -> dict:
    table = {}
    for i, f in enumerate(cg.forms):
        table[f"f{i}"] = {"form": [f.a, f.b, f.c], "element": list(cg.form_table[f].coords)}
    return {
        "kind": "classgroup",
        "d": cg.order.d,
        "discriminant": cg.order.disc,
        "forms": [[f.a, f.b, f.c] for f in cg.forms],
        "group": cert.group_record(cg.group),
        "invariant_factors": list(cg.group.torsion),
        "table": table,
    }


def run_classgroup(args) -> dict:
    order = _order(args.d)
    doc = _doc("classgroup", {"d": args.d})
    doc["result"] = classgroup_record(qf.class_group(order))
    doc["verdict"] = "computed"
    return doc


def run_factor_prime(args) -> dict:
    order = _order(args.d)
    try:
        f = qf.factor_prime(order, args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = _doc("factor-prime", {"d": args.d, "p": args.p})
    res = {"p": f.p, "kind": f.kind, "ramified": f.kind == "ramified"}
    if f.kind != "inert":
        cg = qf.class_group(order)
        form = qf.prime_form(f)
        res.update({
            "b": f.b,
            "ideal": f.name(),
            "form": [form.a, form.b, form.c],
            "reduced_form": _form_list(qf.reduce(form)),
            "class": list(qf.class_of_prime(cg, f).coords),
            "class_group": cert.group_record(cg.group),
        })
    doc["result"] = res
    doc["verdict"] = "computed"
    return doc


def _form_list(f: qf.QuadForm) -> list[int]:
    return [f.a, f.b, f.c]


# verify-thick

def _kclass_record(k: thick.KClass) -> dict:
    return {"rank": k.rank_part, "det": list(k.det_part.coords)}


def thick_document(d: int, roles: dict, c: thick.ThickCertificate, inputs: dict) -> dict:
    doc = _doc("verify-thick", inputs)
    model = c.model
    eff, _, _ = model.effective()
    doc["model"] = {
        "class_group": cert.group_record(model.cl),
        "primes": {role: {"ideal": f.name(), "class": list(model.labeled_primes[f.name()].coords)}
                   for role, f in roles.items()},
        "removed": sorted(r for r, f in roles.items() if f.name() in model.removed),
        "effective_class_group": cert.group_record(eff),
    }
    hyps = {}
    for h in c.hypotheses:
        rec = {"passed": h.passed}
        rec.update(h.detail)
        if h.membership is not None:
            rec["membership"] = cert.membership_record(h.membership)
        hyps[h.name] = rec
    doc["hypotheses"] = hyps
    doc["global"] = {
        "k_group": cert.group_record(c.k_group),
        "class": _kclass_record(c.global_class),
        "perfect": cert.membership_record(c.global_membership),
    }
    doc["locals"] = {
        loc.open_name: {
            "removed": [r for r, f in roles.items() if f.name() in loc.removed],
            "k_group": cert.group_record(loc.ambient),
            "class": _kclass_record(loc.klass),
            "perfect": cert.membership_record(loc.membership),
        }
        for loc in c.locals
    }
    doc["verdict"] = c.verdict
    return doc


def _prime(order: qf.QuadOrder, p: int, flag: str) -> qf.PrimeIdealFactor:
    try:
        f = qf.factor_prime(order, p)
    except ValueError as exc:
        raise InputError(f"{flag}: {exc}") from None
    if f.kind == "inert":
        raise InputError(f"{flag}: {p} is inert in {order}; it has no prime of the form (p, b+sqrt(d))")
    return f


def run_verify_thick(args) -> dict:
    order = _order(args.d)
    inputs = {"d": args.d, "auto": bool(args.auto)}
    if args.auto:
        if any(x is not None for x in (args.p, args.q, args.remove)):
            raise InputError("--auto cannot be combined with --p/--q/--remove")
        triple = thick.auto_triple(args.d)
        if triple is None:
            raise InputError(f"fewer than three nontrivial prime classes below 100 for d={args.d}")
        p, q, r = triple
    else:
        if args.p is None or args.q is None:
            raise InputError("give --p and --q (and optionally --remove), or --auto")
        p = _prime(order, args.p, "--p")
        q = _prime(order, args.q, "--q")
        r = _prime(order, args.remove, "--remove") if args.remove is not None else None
        inputs.update({"p": args.p, "q": args.q})
        if args.remove is not None:
            inputs["remove"] = args.remove
    roles = {"p": p, "q": q}
    removed = []
    if r is not None:
        if r.name() in (p.name(), q.name()):
            raise InputError("--remove must differ from --p and --q")
        roles["r"] = r
        removed = [r]
    model = thick.quadratic_model(args.d, [p, q], removed)
    c = thick.verify_thick(model, p.name(), q.name())
    return thick_document(args.d, roles, c, inputs)


# verify-glued / verify-nodal

def _curve_model(text: str) -> surf.PicCurveModel:
    try:
        return surf.elliptic_model_from_text(text)
    except ValueError as exc:
        raise InputError(f"--curve: {exc}") from None


def glued_document(c: surf.GluedCertificate, inputs: dict) -> dict:
    doc = _doc("verify-glued", inputs)
    doc["curve"] = {"label": c.model.label, "pic": cert.group_record(c.model.pic),
                    "p": c.p, "p_class": list(c.p_class.coords)}
    doc["hypotheses"] = {"p_class_nonzero": c.hypothesis_nonzero}
    doc["picard"] = {
        "pic_x": cert.group_record(c.pic_x),
        "pic_u": cert.group_record(c.pic_u),
        "restriction": cert.hom_record(c.restriction),
    }
    doc["obstruction"] = cert.membership_record(c.obstruction)
    doc["cover"] = {
        f"piece{i}": {
            "removed": list(w.piece.removed),
            "witness": list(w.piece.witness),
            "valid": w.valid,
            "trivial": cert.membership_record(w.membership),
        }
        for i, w in enumerate(c.locals)
    }
    doc["covering"] = c.covering
    doc["verdict"] = c.verdict
    return doc


def run_verify_glued(args) -> dict:
    inputs = {"pic": args.pic, "p": args.p}
    if args.pic == "z":
        model = surf.projective_line()
        try:
            p = model.pic.element([int(args.p)])
        except ValueError:
            raise InputError("--p must be an integer class in Pic(P1) = Z") from None
    elif args.pic.startswith("curve:"):
        model = _curve_model(args.pic[len("curve:"):])
        c = model.curve_group.curve
        try:
            p = str(ell.parse_point(c, args.p))
        except ValueError as exc:
            raise InputError(f"--p: {exc}") from None
    else:
        raise InputError("--pic must be 'z' or 'curve:p,a,b'")
    try:
        cover = surf.trivializing_cover(model, p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return glued_document(surf.verify_glued(model, p, cover), inputs)


def nodal_document(c: surf.NodalCertificate, inputs: dict) -> dict:
    E = c.model
    doc = _doc("verify-nodal", inputs)
    doc["curve"] = {"label": E.label, "jac": cert.group_record(E.jac),
                    "p1": c.p1, "p2": c.p2, "order": c.order,
                    "p1_class": list(E.point_class[c.p1].coords),
                    "p2_class": list(E.point_class[c.p2].coords)}
    hyps = dict(c.hypothesis_checks)
    hyps["p2_is_minus_p1"] = True
    hyps["p1_in_span_p2_membership"] = cert.membership_record(c.p1_in_p2)
    hyps["p2_in_span_p1_membership"] = cert.membership_record(c.p2_in_p1)
    doc["hypotheses"] = hyps
    doc["claim1"] = {
        "pic": cert.group_record(E.pic),
        "fiber_class_p1": list(c.fiber_class_p1.coords),
        "fiber_class_p2": list(c.fiber_class_p2.coords),
        "verified": c.claim1_verified,
    }
    claim2 = {}
    for f in c.claim2:
        role = "p1" if f.fiber == c.p1 else "p2"
        claim2.setdefault(f.open_name, {"removed": f.removed})[f"fiber_{role}"] = {
            "divisor_point": f.divisor_point,
            "class": list(f.klass.coords),
            "trivial": f.klass.is_zero(),
        }
    claim2["paper_expected"] = "all fiber classes trivial"
    doc["claim2"] = claim2
    doc["paper_claim_match"] = c.paper_claim_match
    doc["verdict"] = c.verdict
    return doc


def run_verify_nodal(args) -> dict:
    model = _curve_model(args.curve)
    try:
        P = ell.parse_point(model.curve_group.curve, args.point)
    except ValueError as exc:
        raise InputError(f"--point: {exc}") from None
    return nodal_document(surf.verify_nodal(model, P), {"curve": args.curve, "point": args.point})


# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="locperf", description="Certify locally perfect but not perfect K-classes.")
    parser.add_argument("--out", help="write the certificate here instead of stdout")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    s = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    s.add_argument("matrix", help="matrix file ('rows cols' header), or - for stdin")
    s.set_defaults(func=run_snf)

    s = sub.add_parser("classgroup", help="class group of Z[sqrt(d)]")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=run_classgroup)

    s = sub.add_parser("factor-prime", help="splitting of a rational prime in Z[sqrt(d)]")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=run_factor_prime)

    s = sub.add_parser("verify-thick", help="dual-numbers counterexample over Z[sqrt(d)]")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--p", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--remove", type=int)
    s.add_argument("--auto", action="store_true")
    s.set_defaults(func=run_verify_thick)

    s = sub.add_parser("verify-glued", help="glued surface counterexample")
    s.add_argument("--pic", required=True, help="'z' for C = P1, or 'curve:p,a,b'")
    s.add_argument("--p", required=True, help="class in Z for --pic z, point x,y for a curve")
    s.set_defaults(func=run_verify_glued)

    s = sub.add_parser("verify-nodal", help="nodal product counterexample")
    s.add_argument("--curve", required=True, help="p,a,b")
    s.add_argument("--point", required=True, help="x,y")
    s.set_defaults(func=run_verify_nodal)

    # --out is accepted after the subcommand too
    for p in sub.choices.values():
        p.add_argument("--out", dest="sub_out", help=argparse.SUPPRESS)
    return parser


def run(argv: list[str]) -> tuple[dict | None, int, str]:
    """Run one invocation; returns ``(document, exit_code, diagnostic)``."""
    try:
        args = build_parser().parse_args(argv)
        if args.subcommand is None:
            raise InputError("a subcommand is required")
        doc = args.func(args)
    except InputError as exc:
        return None, INPUT_ERROR, f"error: {exc}"
    return doc, cert.exit_code(doc), ""


def _out_path(argv: list[str]) -> str | None:
    try:
        args = build_parser().parse_args(argv)
    except InputError:
        return None
    return getattr(args, "sub_out", None) or args.out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    doc, code, diag = run(argv)
    if doc is None:
        print(diag, file=sys.stderr)
        return code
    text = cert.dump(doc)
    out = _out_path(argv)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
