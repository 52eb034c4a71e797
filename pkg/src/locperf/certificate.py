"""Certificate documents: serialization, parsing and an SNF-free checker.

A document is a nested mapping with string keys.  On disk it is written one
leaf per line as ``dotted.key.path = <json value>``, in insertion order::

    schema_version = 1
    subcommand = "classgroup"
    result.group.free_rank = 0
    result.group.torsion = [2, 2]

Leaves are JSON scalars or lists (lists never contain mappings).  Key
segments use only letters, digits, ``_`` and ``-``.

:func:`check_document` re-verifies every witness found in a document using
only integer arithmetic and group axioms.  It never calls the Smith normal
form code: non-membership is certified by a stored projection that is
checked to be a well-defined homomorphism killing the subgroup.
"""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any

from .abelian import FgAbelianGroup, GroupElement, GroupHom, MembershipResult

SCHEMA_VERSION = 1
_KEY = re.compile(r"^[A-Za-z0-9_\-]+$")


class DocumentError(ValueError):
    pass


# Text format

def dump(doc: dict) -> str:
    if "schema_version" not in doc:
        raise DocumentError("schema_version is mandatory")
    lines: list[str] = []

    def walk(node: dict, prefix: str):
        for key, value in node.items():
            if not isinstance(key, str) or not _KEY.match(key):
                raise DocumentError(f"invalid key segment {key!r}")
            path = f"{prefix}.{key}" if prefix else key
            if isinstance(value, dict):
                if not value:
                    raise DocumentError(f"empty section {path}")
                walk(value, path)
            else:
                _check_leaf(value, path)
                lines.append(f"{path} = {json.dumps(value)}")

    walk(doc, "")
    return "\n".join(lines) + "\n"


def _check_leaf(value: Any, path: str):
    if isinstance(value, dict):
        raise DocumentError(f"mapping inside a list at {path}")
    if isinstance(value, list):
        for v in value:
            _check_leaf(v, path)
    elif not (value is None or isinstance(value, (bool, int, str))):
        raise DocumentError(f"unsupported leaf type {type(value).__name__} at {path}")


def parse(text: str) -> dict:
    doc: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        path, sep, raw = line.partition(" = ")
        if not sep:
            raise DocumentError(f"line {lineno}: expected 'key = value'")
        parts = path.split(".")
        if not all(_KEY.match(p) for p in parts):
            raise DocumentError(f"line {lineno}: invalid key {path!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {lineno}: bad value: {exc}") from None
        node = doc
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise DocumentError(f"line {lineno}: {path} extends a leaf")
        if parts[-1] in node:
            raise DocumentError(f"line {lineno}: duplicate key {path}")
        node[parts[-1]] = value
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return doc


def exit_code(doc: dict) -> int:
    """0 verified or computed, 1 hypotheses failed, 2 published-claim mismatch."""
    if doc.get("verdict") == "hypotheses_failed":
        return 1
    if doc.get("paper_claim_match") is False:
        return 2
    return 0


# Records

def group_record(g: FgAbelianGroup) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion)}


def element_record(x: GroupElement) -> list[int]:
    return list(x.coords)


def hom_record(h: GroupHom) -> dict:
    return {"kind": "hom", "source": group_record(h.source), "target": group_record(h.target),
            "matrix": h.matrix.to_rows()}


def membership_record(m: MembershipResult) -> dict:
    rec = {
        "kind": "membership",
        "ambient": group_record(m.subgroup.ambient),
        "generators": [element_record(g) for g in m.subgroup.generators],
        "element": element_record(m.element),
        "verdict": m.verdict,
    }
    if m.is_member:
        rec["witness"] = list(m.witness)
    else:
        rec["quotient"] = group_record(m.quotient)
        rec["projection"] = m.projection.matrix.to_rows()
        rec["residue"] = element_record(m.residue)
    return rec


# Standalone checker

def _group(rec: dict) -> tuple[int, list[int]]:
    r, tors = rec["free_rank"], list(rec["torsion"])
    if not isinstance(r, int) or r < 0:
        raise DocumentError("bad free rank")
    if any(d < 2 for d in tors) or any(b % a for a, b in zip(tors, tors[1:])):
        raise DocumentError(f"torsion {tors} is not an invariant-factor chain")
    return r, tors


def _moduli(g: tuple[int, list[int]]) -> list[int]:
    return [0] * g[0] + g[1]


def _reduce(vec: list[int], g) -> list[int]:
    mods = _moduli(g)
    if len(vec) != len(mods):
        raise DocumentError(f"vector {vec} has wrong length for group {g}")
    return [v % m if m else v for v, m in zip(vec, mods)]


def _matvec(rows: list[list[int]], vec: list[int], ncols: int) -> list[int]:
    for r in rows:
        if len(r) != ncols:
            raise DocumentError("matrix shape mismatch")
    return [sum(a * b for a, b in zip(r, vec)) for r in rows]


def _check_membership(rec: dict) -> list[str]:
    amb = _group(rec["ambient"])
    n = len(_moduli(amb))
    gens = [_reduce(g, amb) for g in rec["generators"]]
    elem = list(rec["element"])
    if _reduce(elem, amb) != elem:
        return ["element coordinates are not reduced"]
    if rec["verdict"] == "member":
        w = rec["witness"]
        if len(w) != len(gens):
            return ["witness length differs from generator count"]
        total = [sum(c * g[i] for c, g in zip(w, gens)) for i in range(n)]
        if _reduce(total, amb) != elem:
            return [f"witness {w} does not recombine to {elem}"]
        return []
    if rec["verdict"] != "non_member":
        return [f"unknown verdict {rec['verdict']!r}"]
    q = _group(rec["quotient"])
    proj = rec["projection"]
    if len(proj) != len(_moduli(q)):
        return ["projection has wrong row count"]
    errs = []
    for j, d in enumerate(_moduli(amb)):
        if d:
            col = [d * row[j] for row in proj]
            if any(_reduce(col, q)):
                errs.append(f"projection is not well defined on torsion coordinate {j}")
    for g in gens:
        if any(_reduce(_matvec(proj, g, n), q)):
            errs.append(f"projection does not kill generator {g}")
    image = _reduce(_matvec(proj, elem, n), q)
    if image != list(rec["residue"]):
        errs.append(f"residue {rec['residue']} differs from projected element {image}")
    if not any(image):
        errs.append("residue is zero")
    return errs


def _check_hom(rec: dict) -> list[str]:
    src, tgt = _group(rec["source"]), _group(rec["target"])
    m = rec["matrix"]
    ns, nt = len(_moduli(src)), len(_moduli(tgt))
    if len(m) != nt or any(len(r) != ns for r in m):
        return ["hom matrix shape mismatch"]
    errs = []
    for j, d in enumerate(_moduli(src)):
        if d and any(_reduce([d * r[j] for r in m], tgt)):
            errs.append(f"hom is not well defined on source generator {j}")
    return errs


def det(rows: list[list[int]]) -> int:
    """Exact determinant by Gaussian elimination over the rationals."""
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        result *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(result)


def _mul(a: list[list[int]], b: list[list[int]], inner: int) -> list[list[int]]:
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def _check_snf(rec: dict) -> list[str]:
    m, u, d, v = rec["matrix"], rec["u"], rec["d"], rec["v"]
    rows, cols = rec["rows"], rec["cols"]
    errs = []
    if rows and cols:
        if _mul(_mul(u, m, rows), v, cols) != d:
            errs.append("u*m*v != d")
    if rows and abs(det(u)) != 1:
        errs.append("u is not unimodular")
    if cols and abs(det(v)) != 1:
        errs.append("v is not unimodular")
    diag = [d[i][i] for i in range(min(rows, cols))]
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        errs.append("d is not diagonal")
    if any(x < 0 for x in diag):
        errs.append("negative diagonal entry")
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a and b % a):
            errs.append(f"divisibility chain broken at {a}, {b}")
    return errs


def _check_classgroup(rec: dict) -> list[str]:
    disc = rec["discriminant"]
    g = _group(rec["group"])
    errs = []
    forms = [tuple(f) for f in rec["forms"]]
    for a, b, c in forms:
        if b * b - 4 * a * c != disc:
            errs.append(f"form {(a, b, c)} has wrong discriminant")
        if not (abs(b) <= a <= c) or ((abs(b) == a or a == c) and b < 0):
            errs.append(f"form {(a, b, c)} is not reduced")
        if math.gcd(a, b, c) != 1:
            errs.append(f"form {(a, b, c)} is not primitive")
    if len(set(forms)) != len(forms):
        errs.append("duplicate forms")
    order = 1
    for dd in g[1]:
        order *= dd
    if g[0] or order != len(forms):
        errs.append("group order differs from the number of reduced forms")
    table = rec["table"]
    seen = set()
    for entry in table.values():
        x = tuple(_reduce(list(entry["element"]), g))
        if x in seen:
            errs.append("form table is not injective")
        seen.add(x)
        if (tuple(entry["form"]) == forms[0]) != (not any(x)):
            errs.append("identity element does not match the principal form")
    if len(seen) != len(forms):
        errs.append("form table is not a bijection")
    return errs


def check_document(doc: dict) -> list[str]:
    """Return a list of problems; empty means every witness re-verifies."""
    errors: list[str] = []
    if doc.get("schema_version") != SCHEMA_VERSION:
        errors.append("missing or unsupported schema_version")

    def walk(node: dict, path: str):
        kind = node.get("kind")
        checker = {"membership": _check_membership, "hom": _check_hom,
                   "snf": _check_snf, "classgroup": _check_classgroup}.get(kind)
        try:
            if checker:
                errors.extend(f"{path}: {e}" for e in checker(node))
            elif set(node) == {"free_rank", "torsion"}:
                _group(node)
        except (DocumentError, KeyError, TypeError, IndexError) as exc:
            errors.append(f"{path}: malformed record ({exc!r})")
        for k, v in node.items():
            if isinstance(v, dict):
                walk(v, f"{path}.{k}" if path else k)

    walk(doc, "")
    return errors
