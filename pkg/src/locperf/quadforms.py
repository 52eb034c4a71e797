"""Class groups of imaginary quadratic orders Z[sqrt(d)] via binary quadratic forms.

Only ``d < 0`` squarefree with ``d = 2, 3 (mod 4)`` is accepted, so the
order is exactly ``Z[sqrt(d)]`` and its discriminant is ``4d``.  Ideal classes
are represented by reduced positive definite forms ``(a, b, c)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .abelian import FgAbelianGroup, GroupElement, decompose_finite_group

MAX_ABS_DISC = 10**6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def is_squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return n != 0


@dataclass(frozen=True)
class QuadOrder:
    d: int

    def __post_init__(self):
        d = self.d
        if d >= 0:
            raise ValueError(f"d must be negative, got {d}")
        if d % 4 not in (2, 3):
            raise ValueError(f"d must be 2 or 3 mod 4, got {d}")
        if not is_squarefree(d):
            raise ValueError(f"d must be squarefree, got {d}")
        if 4 * abs(d) > MAX_ABS_DISC:
            raise ValueError(f"|disc| = {4 * abs(d)} exceeds {MAX_ABS_DISC}")

    @property
    def disc(self) -> int:
        return 4 * self.d

    def __str__(self) -> str:
        return f"Z[sqrt({self.d})]"


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def inverse(self) -> QuadForm:
        return reduce(QuadForm(self.a, -self.b, self.c))

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def principal_form(disc: int) -> QuadForm:
    if disc % 4 == 0:
        return QuadForm(1, 0, -disc // 4)
    return QuadForm(1, 1, (1 - disc) // 4)


def _check_definite(f: QuadForm):
    if f.disc >= 0:
        raise ValueError(f"form {f} has nonnegative discriminant {f.disc}")
    if f.a <= 0:
        raise ValueError(f"form {f} is not positive definite")


def reduce(f: QuadForm) -> QuadForm:
    """Reduced form properly equivalent to a positive definite form."""
    _check_definite(f)
    a, b, c = f.a, f.b, f.c
    disc = f.disc
    while True:
        # b into (-a, a]
        k = (a - b) // (2 * a)
        b += 2 * a * k
        c = (b * b - disc) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        if (a == c or b == -a) and b < 0:
            b = -b
        return QuadForm(a, b, c)


def reduced_forms(disc: int) -> list[QuadForm]:
    """Primitive reduced forms of a negative discriminant, lexicographic."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError(f"invalid negative discriminant {disc}")
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            f = QuadForm(a, b, num // (4 * a))
            if f.is_reduced() and f.is_primitive():
                out.append(f)
        a += 1
    return sorted(out)


def enumerate_reduced(order: QuadOrder) -> list[QuadForm]:
    return reduced_forms(order.disc)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Dirichlet composition, reduced.

    With ``e = gcd(a1, a2, (b1+b2)/2) = u a1 + v a2 + w (b1+b2)/2`` the
    united product is ``(a1 a2 / e^2, B, *)`` where
    ``B = (u a1 b2 + v a2 b1 + w (b1 b2 + D)/2) / e``.
    """
    if f.disc != g.disc:
        raise ValueError(f"discriminant mismatch: {f.disc} vs {g.disc}")
    _check_definite(f)
    _check_definite(g)
    disc = f.disc
    a1, b1, _ = f.a, f.b, f.c
    a2, b2, _ = g.a, g.b, g.c
    s = (b1 + b2) // 2
    g1, x, y = _xgcd(a1, a2)
    e, z, w = _xgcd(g1, s)
    u, v = x * z, y * z
    a3 = a1 * a2 // (e * e)
    b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // e
    b3 %= 2 * a3
    c3 = (b3 * b3 - disc) // (4 * a3)
    return reduce(QuadForm(a3, b3, c3))


def power(f: QuadForm, n: int) -> QuadForm:
    result = principal_form(f.disc)
    base = reduce(f) if n >= 0 else f.inverse()
    n = abs(n)
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


@dataclass(frozen=True)
class ClassGroup:
    order: QuadOrder
    group: FgAbelianGroup
    forms: tuple[QuadForm, ...]
    form_table: dict      # QuadForm -> GroupElement

    def __hash__(self):
        return hash((self.order, self.group, self.forms))

    def element_of(self, f: QuadForm) -> GroupElement:
        return self.form_table[reduce(f)]

    def form_of(self, x: GroupElement) -> QuadForm:
        for f, y in self.form_table.items():
            if y == x:
                return f
        raise KeyError(f"no form for element {x}")

    @property
    def principal(self) -> QuadForm:
        return principal_form(self.order.disc)


def class_group(order: QuadOrder) -> ClassGroup:
    forms = enumerate_reduced(order)
    group, log = decompose_finite_group(forms, compose, principal_form(order.disc))
    return ClassGroup(order, group, tuple(forms), log)


# Prime ideals

@dataclass(frozen=True)
class PrimeIdealFactor:
    """A prime of Z[sqrt(d)] above ``p``: the ideal ``(p, b + sqrt(d))``.

    With ``conjugate_flag`` set the ideal is ``(p, -b + sqrt(d))``.  Inert
    primes carry ``b = None``; the prime is then ``(p)`` itself.
    """

    p: int
    kind: str
    b: int | None
    d: int
    conjugate_flag: bool = False

    @property
    def residue(self) -> int | None:
        if self.b is None:
            return None
        return -self.b if self.conjugate_flag else self.b

    def conjugate(self) -> PrimeIdealFactor:
        return PrimeIdealFactor(self.p, self.kind, self.b, self.d, not self.conjugate_flag)

    def name(self) -> str:
        if self.kind == "inert":
            return f"({self.p})"
        r = self.residue
        if r == 0:
            return f"({self.p}, sqrt({self.d}))"
        sign = "-" if r < 0 else ""
        return f"({self.p}, {sign}{abs(r)}+sqrt({self.d}))"

    def __str__(self) -> str:
        return self.name()


def sqrt_mod(n: int, p: int) -> int | None:
    """Smallest ``x`` in ``[0, p)`` with ``x^2 = n (mod p)``."""
    n %= p
    for x in range(p):
        if x * x % p == n:
            return x
    return None


def factor_prime(order: QuadOrder, p: int) -> PrimeIdealFactor:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    d = order.d
    b = sqrt_mod(d, p)
    if order.disc % p == 0:
        return PrimeIdealFactor(p, "ramified", b, d)
    if b is None:
        return PrimeIdealFactor(p, "inert", None, d)
    return PrimeIdealFactor(p, "split", b, d)


def prime_form(f: PrimeIdealFactor) -> QuadForm:
    """Form of the ideal ``(p, r + sqrt(d))``: ``(p, 2r, (r^2 - d)/p)``."""
    if f.kind == "inert":
        raise ValueError(f"inert prime {f.p} has no (p, b + sqrt(d)) presentation")
    r = f.residue
    return QuadForm(f.p, 2 * r, (r * r - f.d) // f.p)


def class_of_prime(cg: ClassGroup, f: PrimeIdealFactor) -> GroupElement:
    if f.d != cg.order.d:
        raise ValueError("prime belongs to a different order")
    return cg.element_of(prime_form(f))


def primes_below(bound: int):
    return [n for n in range(2, bound) if is_prime(n)]
