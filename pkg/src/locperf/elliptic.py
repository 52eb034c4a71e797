"""Elliptic curves y^2 = x^3 + a x + b over small prime fields.

Everything is done by exhaustion, so the field size is capped at
``MAX_PRIME``.  The point group is split into cyclic factors by
:func:`locperf.abelian.decompose_finite_group`, which also yields a full
discrete-log table.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .abelian import FgAbelianGroup, GroupElement, decompose_finite_group
from .quadforms import is_prime

MAX_PRIME = 10**4


@dataclass(frozen=True)
class Curve:
    p: int
    a: int
    b: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p <= 3:
            raise ValueError(f"modulus must be a prime > 3, got {self.p}")
        if self.p > MAX_PRIME:
            raise ValueError(f"modulus {self.p} exceeds the exhaustive-search cap {MAX_PRIME}")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise ValueError(f"singular curve: 4a^3 + 27b^2 = 0 mod {self.p}")

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x**3 + self.a * x + self.b)) % self.p == 0

    def point(self, x: int, y: int) -> CurvePoint:
        P = CurvePoint(x % self.p, y % self.p)
        if not self.contains(P):
            raise ValueError(f"point ({x},{y}) is not on {self}")
        return P

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.a}x + {self.b} over F_{self.p}"


@dataclass(frozen=True, order=True)
class CurvePoint:
    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "inf" if self.is_infinity else f"{self.x},{self.y}"


INFINITY = CurvePoint()


def _on_curve(c: Curve, *points: CurvePoint):
    for P in points:
        if not c.contains(P):
            raise ValueError(f"point {P} is not on {c}")


def neg(c: Curve, P: CurvePoint) -> CurvePoint:
    _on_curve(c, P)
    if P.is_infinity:
        return P
    return CurvePoint(P.x, (-P.y) % c.p)


def add(c: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    _on_curve(c, P, Q)
    return _add(c, P, Q)


def _add(c: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    p = c.p
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            return INFINITY
        lam = (3 * P.x * P.x + c.a) * pow(2 * P.y, -1, p) % p
    else:
        lam = (Q.y - P.y) * pow(Q.x - P.x, -1, p) % p
    x = (lam * lam - P.x - Q.x) % p
    y = (lam * (P.x - x) - P.y) % p
    return CurvePoint(x, y)


def mul(c: Curve, n: int, P: CurvePoint) -> CurvePoint:
    _on_curve(c, P)
    if n < 0:
        n, P = -n, neg(c, P)
    acc = INFINITY
    while n:
        if n & 1:
            acc = _add(c, acc, P)
        P = _add(c, P, P)
        n >>= 1
    return acc


def enumerate_points(c: Curve) -> list[CurvePoint]:
    """Infinity first, then affine points sorted by ``(x, y)``."""
    p = c.p
    roots: dict[int, list[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    pts = [INFINITY]
    for x in range(p):
        rhs = (x**3 + c.a * x + c.b) % p
        pts += [CurvePoint(x, y) for y in roots.get(rhs, [])]
    return pts


@dataclass(frozen=True)
class CurveGroup:
    curve: Curve
    points: tuple[CurvePoint, ...]
    group: FgAbelianGroup
    log_table: dict       # CurvePoint -> GroupElement
    exp_table: dict       # GroupElement -> CurvePoint

    def __hash__(self):
        return hash((self.curve, self.group))

    def log(self, P: CurvePoint) -> GroupElement:
        _on_curve(self.curve, P)
        return self.log_table[P]

    def exp(self, x: GroupElement) -> CurvePoint:
        return self.exp_table[x]


def group_structure(c: Curve) -> CurveGroup:
    pts = enumerate_points(c)
    group, log = decompose_finite_group(pts, lambda P, Q: _add(c, P, Q), INFINITY)
    return CurveGroup(c, tuple(pts), group, log, {v: k for k, v in log.items()})


def order_of(cg: CurveGroup, P: CurvePoint) -> int:
    c = cg.curve
    _on_curve(c, P)
    n, acc = 1, P
    while not acc.is_infinity:
        acc = _add(c, acc, P)
        n += 1
    return n


def hasse_bound_holds(c: Curve, count: int) -> bool:
    # |N - (p+1)| <= 2 sqrt(p)  <=>  (N - p - 1)^2 <= 4p
    return (count - c.p - 1) ** 2 <= 4 * c.p


def parse_curve(text: str) -> Curve:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"curve must be 'p,a,b', got {text!r}")
    p, a, b = (int(s) for s in parts)
    return Curve(p, a, b)


def parse_point(c: Curve, text: str) -> CurvePoint:
    if text.strip().lower() in ("inf", "infinity", "o"):
        return INFINITY
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"point must be 'x,y' or 'inf', got {text!r}")
    return c.point(int(parts[0]), int(parts[1]))
