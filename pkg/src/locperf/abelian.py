"""Finitely generated abelian groups in canonical form.

Every group is stored as ``Z^r + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...``
and every ``d_i >= 2``.  Element coordinates list the free part first, then
the torsion part, with torsion coordinates reduced into ``[0, d_i)``.

All reductions go through :func:`smith_normal_form`, which works over plain
Python integers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for a matrix without rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, cols=other.cols)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(self[i, j] * vec[j] for j in range(self.cols)) for i in range(self.rows))

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    @classmethod
    def parse(cls, text: str) -> IntMatrix:
        """Read the ``rows cols`` header followed by whitespace-separated rows."""
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 2:
            raise ValueError("first line must be 'rows cols'")
        rows, cols = (int(x) for x in lines[0])
        body = lines[1:]
        if len(body) != rows:
            raise ValueError(f"expected {rows} rows, found {len(body)}")
        for r in body:
            if len(r) != cols:
                raise ValueError(f"expected {cols} entries per row")
        return cls(rows, cols, tuple(int(x) for r in body for x in r))

    def format(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(x) for x in r) for r in self.to_rows()]
        return "\n".join(lines) + "\n"


# Smith normal form

@dataclass
class _Reduction:
    a: list[list[int]]
    u: list[list[int]]
    v: list[list[int]]
    vinv: list[list[int]]


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith(rows: list[list[int]], nrows: int, ncols: int) -> _Reduction:
    a = [list(r) for r in rows]
    u, v, vinv = _eye(nrows), _eye(ncols), _eye(ncols)

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def add_col(dst, src, k):
        # col_dst += k col_src; the inverse acts on rows of vinv
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]
        vinv[src] = [x - k * y for x, y in zip(vinv[src], vinv[dst])]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return _Reduction(a, u, v, vinv)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            for i in range(t + 1, nrows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, nrows)) or any(a[t][j] for j in range(t + 1, ncols)):
                continue
            bad = next((i for i in range(t + 1, nrows)
                        if any(a[i][j] % p for j in range(t + 1, ncols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _Reduction(a, u, v, vinv)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(u, d, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular, ``d`` is diagonal with nonnegative entries
    forming a divisibility chain (zeros last).  The pivot at each stage is the
    nonzero entry of smallest absolute value, ties broken by lowest
    ``(row, col)``, so the output is deterministic.
    """
    red = _smith(m.to_rows(), m.rows, m.cols)
    return (IntMatrix.from_rows(red.u, cols=m.rows),
            IntMatrix.from_rows(red.a, cols=m.cols),
            IntMatrix.from_rows(red.v, cols=m.cols))


# Groups and elements

@dataclass(frozen=True)
class FgAbelianGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"invariant factors must be >= 2: {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {self.torsion}")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return (0,) * self.free_rank + self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    @property
    def torsion_order(self) -> int:
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(int(c) % m if m else int(c) for c, m in zip(coords, self.moduli))

    def element(self, coords: Sequence[int]) -> GroupElement:
        c = self.reduce(coords)
        return GroupElement(self, c[:self.free_rank], c[self.free_rank:])

    def zero(self) -> GroupElement:
        return self.element((0,) * self.ngens)

    def generator(self, i: int) -> GroupElement:
        return self.element(tuple(int(i == j) for j in range(self.ngens)))

    def generators(self) -> list[GroupElement]:
        return [self.generator(i) for i in range(self.ngens)]

    def elements(self) -> Iterator[GroupElement]:
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        for c in itertools.product(*(range(d) for d in self.torsion)):
            yield self.element(c)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    free_coords: tuple[int, ...]
    torsion_coords: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.free_coords) != g.free_rank or len(self.torsion_coords) != len(g.torsion):
            raise ValueError("coordinate lengths do not match the group")
        if any(not 0 <= c < d for c, d in zip(self.torsion_coords, g.torsion)):
            raise ValueError("torsion coordinates must be reduced")

    @property
    def coords(self) -> tuple[int, ...]:
        return self.free_coords + self.torsion_coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: GroupElement):
        if other.group != self.group:
            raise ValueError(f"elements of different groups: {self.group} vs {other.group}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.group.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> GroupElement:
        return self.group.element([-a for a in self.coords])

    def __rmul__(self, n: int) -> GroupElement:
        return self.group.element([n * a for a in self.coords])

    def order(self) -> int | None:
        """Additive order, ``None`` when infinite."""
        if any(self.free_coords):
            return None
        n = 1
        for c, d in zip(self.torsion_coords, self.group.torsion):
            k = d // _gcd(c, d)
            n = n * k // _gcd(n, k)
        return n

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism between canonical groups.

    Column ``j`` of ``matrix`` holds the image of the ``j``-th canonical
    generator of ``source`` in ``target`` coordinates.
    """

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.ngens or self.matrix.cols != self.source.ngens:
            raise ValueError("matrix shape does not match source/target")

    def column_image(self, j: int) -> GroupElement:
        return self.target.element(self.matrix.column(j))

    def is_well_defined(self) -> bool:
        f = self.source.free_rank
        return all((d * self.column_image(f + i)).is_zero()
                   for i, d in enumerate(self.source.torsion))

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise ValueError("element is not in the source group")
        return self.target.element(self.matrix.apply(x.coords))

    def compose(self, inner: GroupHom) -> GroupHom:
        """``self`` after ``inner``."""
        if inner.target != self.source:
            raise ValueError("cannot compose: groups do not match")
        return GroupHom(inner.source, self.target,
                        _reduce_columns(self.matrix @ inner.matrix, self.target))

    def __add__(self, other: GroupHom) -> GroupHom:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("cannot add homs with different groups")
        m = IntMatrix(self.matrix.rows, self.matrix.cols,
                      tuple(a + b for a, b in zip(self.matrix.entries, other.matrix.entries)))
        return GroupHom(self.source, self.target, _reduce_columns(m, self.target))

    @classmethod
    def from_images(cls, source: FgAbelianGroup, target: FgAbelianGroup,
                    images: Sequence[GroupElement]) -> GroupHom:
        if len(images) != source.ngens:
            raise ValueError("need one image per source generator")
        cols = [im.coords for im in images]
        rows = [[c[i] for c in cols] for i in range(target.ngens)]
        return cls(source, target, IntMatrix.from_rows(rows, cols=source.ngens))

    @classmethod
    def identity(cls, g: FgAbelianGroup) -> GroupHom:
        return cls(g, g, IntMatrix.identity(g.ngens))


def _reduce_columns(m: IntMatrix, target: FgAbelianGroup) -> IntMatrix:
    cols = [target.reduce(m.column(j)) for j in range(m.cols)]
    return IntMatrix.from_rows([[c[i] for c in cols] for i in range(m.rows)], cols=m.cols)


@dataclass(frozen=True)
class Subgroup:
    ambient: FgAbelianGroup
    generators: tuple[GroupElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.group != self.ambient:
                raise ValueError("generator does not lie in the ambient group")


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of a membership query with a re-checkable justification.

    For members, ``witness`` holds integer coefficients with
    ``sum(w * gen) == element``.  For non-members, ``projection`` maps the
    ambient group onto ``quotient``, kills every generator, and sends the
    element to the nonzero ``residue``.
    """

    verdict: str
    element: GroupElement
    subgroup: Subgroup
    witness: tuple[int, ...] | None = None
    residue: GroupElement | None = None
    quotient: FgAbelianGroup | None = None
    projection: GroupHom | None = None

    @property
    def is_member(self) -> bool:
        return self.verdict == "member"


# Presentations

@dataclass(frozen=True)
class _Presentation:
    """Cokernel of ``relations`` (one relation per row) on ``n`` generators."""

    n: int
    relations: tuple[tuple[int, ...], ...]
    group: FgAbelianGroup
    diag: tuple[int, ...]           # d_j for every original coordinate j, 0 beyond the rank
    keep: tuple[int, ...]           # SNF coordinates kept, canonical order
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    vinv: tuple[tuple[int, ...], ...]

    def to_canonical(self, x: Sequence[int]) -> tuple[int, ...]:
        y = [sum(x[i] * self.v[i][j] for i in range(self.n)) for j in range(self.n)]
        return self.group.reduce([y[j] for j in self.keep])

    def from_canonical(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(y[k] * self.vinv[j][i] for k, j in enumerate(self.keep))
                     for i in range(self.n))

    def to_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows([[self.v[i][j] for i in range(self.n)] for j in self.keep],
                                   cols=self.n)

    def solve(self, x: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients ``lam`` with ``lam @ relations == x``, or ``None``."""
        y = [sum(x[i] * self.v[i][j] for i in range(self.n)) for j in range(self.n)]
        k = len(self.relations)
        z = [0] * k
        for j in range(self.n):
            d = self.diag[j]
            if d == 0:
                if y[j]:
                    return None
            elif y[j] % d:
                return None
            else:
                z[j] = y[j] // d
        return tuple(sum(z[i] * self.u[i][r] for i in range(k)) for r in range(k))


def _present(n: int, relations: Iterable[Sequence[int]]) -> _Presentation:
    rels = tuple(tuple(int(x) for x in r) for r in relations)
    for r in rels:
        if len(r) != n:
            raise ValueError(f"relation {r} does not have {n} entries")
    red = _smith([list(r) for r in rels], len(rels), n)
    diag = tuple(red.a[j][j] if j < len(rels) else 0 for j in range(n))
    free = [j for j in range(n) if diag[j] == 0]
    tors = [j for j in range(n) if diag[j] >= 2]
    for j in free:
        # free basis is only fixed up to sign; make the first nonzero entry positive
        lead = next((r[j] for r in red.v if r[j]), 0)
        if lead < 0:
            for r in red.v:
                r[j] = -r[j]
            red.vinv[j] = [-x for x in red.vinv[j]]
    group = FgAbelianGroup(len(free), tuple(diag[j] for j in tors))
    return _Presentation(n, rels, group, diag, tuple(free + tors),
                         tuple(map(tuple, red.u)), tuple(map(tuple, red.v)),
                         tuple(map(tuple, red.vinv)))


def _torsion_relations(g: FgAbelianGroup) -> list[tuple[int, ...]]:
    n = g.ngens
    return [tuple(d if j == g.free_rank + i else 0 for j in range(n))
            for i, d in enumerate(g.torsion)]


def canonicalize(generators: int, relations: IntMatrix) -> tuple[FgAbelianGroup, GroupHom]:
    """Canonical form of ``Z^generators / rowspace(relations)``.

    Returns the group and the map from original generator coordinates (as
    the free group ``Z^generators``) to canonical coordinates.
    """
    if relations.cols != generators:
        raise ValueError("relations must have one column per generator")
    pres = _present(generators, relations.to_rows())
    src = FgAbelianGroup(generators)
    return pres.group, GroupHom(src, pres.group, _reduce_columns(pres.to_matrix(), pres.group))


def _subgroup_presentation(s: Subgroup) -> _Presentation:
    g = s.ambient
    rels = [x.coords for x in s.generators] + _torsion_relations(g)
    return _present(g.ngens, rels)


def image(h: GroupHom) -> Subgroup:
    if not h.is_well_defined():
        raise ValueError("homomorphism is not well defined")
    return Subgroup(h.target, tuple(h.column_image(j) for j in range(h.source.ngens)))


def quotient(g: FgAbelianGroup, s: Subgroup) -> tuple[FgAbelianGroup, GroupHom]:
    q, proj, _ = quotient_with_lift(g, s)
    return q, proj


def quotient_with_lift(g: FgAbelianGroup, s: Subgroup):
    """Like :func:`quotient`, plus a coordinate lift ``q -> g``.

    The lift is a set-theoretic section (``proj(lift(y)) == y``), not a
    homomorphism in general.
    """
    if s.ambient != g:
        raise ValueError("subgroup does not live in this group")
    pres = _subgroup_presentation(s)
    q = pres.group
    proj = GroupHom(g, q, _reduce_columns(pres.to_matrix(), q))

    def lift(y: GroupElement) -> GroupElement:
        if y.group != q:
            raise ValueError("element is not in the quotient")
        return g.element(pres.from_canonical(y.coords))

    return q, proj, lift


def membership(s: Subgroup, x: GroupElement) -> MembershipResult:
    if x.group != s.ambient:
        raise ValueError("element and subgroup live in different groups")
    pres = _subgroup_presentation(s)
    lam = pres.solve(x.coords)
    if lam is not None:
        return MembershipResult("member", x, s, witness=lam[:len(s.generators)])
    q = pres.group
    proj = GroupHom(s.ambient, q, _reduce_columns(pres.to_matrix(), q))
    return MembershipResult("non_member", x, s, residue=proj(x), quotient=q, projection=proj)


def recombine(s: Subgroup, coefficients: Sequence[int]) -> GroupElement:
    if len(coefficients) != len(s.generators):
        raise ValueError("one coefficient per generator required")
    total = s.ambient.zero()
    for c, gen in zip(coefficients, s.generators):
        total = total + c * gen
    return total


def direct_sum(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    return direct_sum_with_maps(a, b)[0]


def direct_sum_with_maps(a: FgAbelianGroup, b: FgAbelianGroup):
    """Return ``(s, inj_a, inj_b, pr_a, pr_b)`` for the canonical sum ``s``."""
    na, nb = a.ngens, b.ngens
    rels = ([r + (0,) * nb for r in _torsion_relations(a)]
            + [(0,) * na + r for r in _torsion_relations(b)])
    pres = _present(na + nb, rels)
    s = pres.group
    to_can = pres.to_matrix()

    def block_inj(src, offset):
        cols = [to_can.column(offset + j) for j in range(src.ngens)]
        return GroupHom.from_images(src, s, [s.element(c) for c in cols])

    def block_pr(dst, offset):
        images = []
        for j in range(s.ngens):
            x = pres.from_canonical([int(i == j) for i in range(s.ngens)])
            images.append(dst.element(x[offset:offset + dst.ngens]))
        return GroupHom.from_images(s, dst, images)

    return s, block_inj(a, 0), block_inj(b, na), block_pr(a, 0), block_pr(b, na)


def scale_subgroup(g: FgAbelianGroup, n: int) -> Subgroup:
    if n < 0:
        raise ValueError("scale factor must be nonnegative")
    gens = [n * e for e in g.generators()]
    return Subgroup(g, tuple(x for x in gens if not x.is_zero()))


def is_subgroup_of(a: Subgroup, b: Subgroup) -> bool:
    return all(membership(b, x).is_member for x in a.generators)


def same_subgroup(a: Subgroup, b: Subgroup) -> bool:
    """Subgroup equality by mutual membership of generators."""
    return is_subgroup_of(a, b) and is_subgroup_of(b, a)


def decompose_finite_group(elements: Sequence[Hashable],
                           op: Callable[[Hashable, Hashable], Hashable],
                           identity: Hashable):
    """Split an explicitly given finite abelian group into cyclic factors.

    Repeatedly picks an element of largest order modulo the part already
    split off and lifts it to an element of the same order.  Returns
    ``(group, log)`` with ``log`` mapping each element to its canonical
    coordinates.
    """
    elements = list(elements)
    universe = set(elements)
    if identity not in universe:
        raise ValueError("identity is not among the elements")

    def multiple(x, n):
        acc = identity
        for _ in range(n):
            acc = op(acc, x)
        return acc

    def order_mod(x, span):
        acc, n = x, 1
        while acc not in span:
            acc = op(acc, x)
            n += 1
            if n > len(universe):
                raise ValueError("operation does not define an abelian group")
        return n

    basis: list[tuple[Hashable, int]] = []
    span = {identity}
    while len(span) < len(universe):
        x, n = max(((x, order_mod(x, span)) for x in elements), key=lambda t: t[1])
        lifted = None
        for h in sorted(span, key=elements.index):
            y = op(x, h)
            if multiple(y, n) == identity:
                lifted = y
                break
        if lifted is None:
            raise ValueError("operation does not define an abelian group")
        basis.append((lifted, n))
        powers = [identity]
        for _ in range(n - 1):
            powers.append(op(powers[-1], lifted))
        span = {op(a, b) for a in span for b in powers}

    basis.reverse()  # ascending orders
    group = FgAbelianGroup(0, tuple(n for _, n in basis))
    log = {}
    for coords in itertools.product(*(range(n) for _, n in basis)):
        acc = identity
        for (b, _), c in zip(basis, coords):
            acc = op(acc, multiple(b, c))
        if acc in log:
            raise ValueError("operation does not define an abelian group")
        log[acc] = group.element(coords)
    if len(log) != len(universe):
        raise ValueError("operation does not define an abelian group")
    return group, log
