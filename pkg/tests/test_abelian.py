import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from locperf.abelian import (
    FgAbelianGroup,
    GroupHom,
    IntMatrix,
    Subgroup,
    canonicalize,
    decompose_finite_group,
    direct_sum,
    direct_sum_with_maps,
    image,
    membership,
    quotient,
    quotient_with_lift,
    recombine,
    same_subgroup,
    scale_subgroup,
    smith_normal_form,
)
from strategies import elements_of, finite_groups, groups, int_matrices

Z = FgAbelianGroup(1)
Z2 = FgAbelianGroup(2)


def check_snf(m):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(oracles.integer_det(u.to_rows())) == 1
    assert abs(oracles.integer_det(v.to_rows())) == 1
    assert d.is_diagonal()
    diag = d.diagonal()
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert b == 0 if a == 0 else b % a == 0
    return u, d, v


# smith_normal_form

def test_snf_identity():
    m = IntMatrix.identity(2)
    u, d, v = smith_normal_form(m)
    assert u == v == d == m


def test_snf_2x2_against_minors():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    _, d, _ = check_snf(m)
    assert oracles.determinantal_invariants(m.to_rows()) == [2, 4]
    assert d.diagonal() == [2, 4]


def test_snf_zero():
    _, d, _ = smith_normal_form(IntMatrix.from_rows([[0]]))
    assert d.to_rows() == [[0]]


@pytest.mark.parametrize("shape", [(0, 0), (0, 3), (3, 0)])
def test_snf_empty(shape):
    m = IntMatrix.zeros(*shape)
    u, d, v = smith_normal_form(m)
    assert (u.rows, v.cols) == (shape[0], shape[1])
    assert d == m


def test_snf_deterministic():
    m = IntMatrix.from_rows([[6, 4, 9], [4, -2, 0], [12, 8, 3]])
    assert smith_normal_form(m) == smith_normal_form(m)


@given(int_matrices())
def test_snf_property(m):
    check_snf(m)


@given(int_matrices(max_dim=4, max_entry=12))
def test_snf_matches_determinantal_divisors(m):
    _, d, _ = smith_normal_form(m)
    if min(m.rows, m.cols):
        assert d.diagonal() == oracles.determinantal_invariants(m.to_rows())


def test_matrix_text_round_trip():
    m = IntMatrix.from_rows([[1, -2, 3], [0, 4, 5]])
    assert IntMatrix.parse(m.format()) == m
    with pytest.raises(ValueError):
        IntMatrix.parse("2 2\n1 2\n")


# canonicalize

def test_canonicalize_free():
    g, h = canonicalize(2, IntMatrix.zeros(0, 2))
    assert g == FgAbelianGroup(2)
    assert h.matrix == IntMatrix.identity(2)


def test_canonicalize_diagonal():
    g, _ = canonicalize(2, IntMatrix.from_rows([[2, 0], [0, 2]]))
    assert g == FgAbelianGroup(0, (2, 2))


def test_canonicalize_2468():
    g, _ = canonicalize(2, IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert g.torsion == (2, 4)


def test_canonicalize_drops_units():
    g, _ = canonicalize(3, IntMatrix.from_rows([[1, 0, 0], [0, 3, 0]]))
    assert g == FgAbelianGroup(1, (3,))


@given(groups())
def test_canonicalize_idempotent(g):
    rels = [[d if j == g.free_rank + i else 0 for j in range(g.ngens)]
            for i, d in enumerate(g.torsion)]
    g2, h = canonicalize(g.ngens, IntMatrix.from_rows(rels, cols=g.ngens))
    assert g2 == g


@given(int_matrices(max_dim=4, max_entry=6))
def test_coord_map_kills_relations(m):
    g, h = canonicalize(m.cols, m)
    for i in range(m.rows):
        assert h(h.source.element(m.row(i))).is_zero()
    assert h.is_well_defined()


# image

def test_image_zero_map():
    s = image(GroupHom(Z, Z, IntMatrix.from_rows([[0]])))
    assert all(x.is_zero() for x in s.generators)
    assert not membership(s, Z.element([1])).is_member


def test_image_diagonal():
    s = image(GroupHom(Z, Z2, IntMatrix.from_rows([[1], [1]])))
    assert s.generators == (Z2.element([1, 1]),)


def test_image_doubling():
    g = FgAbelianGroup(1, (2,))
    s = image(GroupHom(g, g, IntMatrix.from_rows([[2, 0], [0, 2]])))
    assert s.generators == (g.element([2, 0]), g.element([0, 0]))


def test_image_rejects_ill_defined():
    h = GroupHom(FgAbelianGroup(0, (2,)), Z, IntMatrix.from_rows([[1]]))
    assert not h.is_well_defined()
    with pytest.raises(ValueError):
        image(h)


# membership

def test_membership_whole_group():
    g = FgAbelianGroup(1, (2, 4))
    s = Subgroup(g, tuple(g.generators()))
    for x in [g.element([5, 1, 3]), g.zero(), g.element([-3, 0, 2])]:
        res = membership(s, x)
        assert res.is_member
        assert recombine(s, res.witness) == x


def test_membership_diagonal_residue():
    s = Subgroup(Z2, (Z2.element([1, 1]),))
    res = membership(s, Z2.element([1, 0]))
    assert res.verdict == "non_member"
    assert res.quotient == Z
    assert res.residue == Z.element([1])


def test_membership_thick_obstruction():
    g = FgAbelianGroup(1, (2,))
    x = g.element([2, 1])
    res = membership(scale_subgroup(g, 2), x)
    assert res.verdict == "non_member"
    # brute force: a*(2,0) + b*(0,2) never has odd torsion part
    assert all(g.element([2 * a, 2 * b]) != x for a in range(-10, 11) for b in range(-3, 4))


def test_membership_mismatched_ambient():
    with pytest.raises(ValueError):
        membership(Subgroup(Z, ()), Z2.zero())


@given(st.data())
def test_membership_witness_or_residue(data):
    g = data.draw(groups())
    gens = data.draw(st.lists(elements_of(g), max_size=3))
    x = data.draw(elements_of(g))
    s = Subgroup(g, tuple(gens))
    res = membership(s, x)
    if res.is_member:
        assert recombine(s, res.witness) == x
    else:
        assert not res.residue.is_zero()
        assert res.projection(x) == res.residue
        assert all(res.projection(y).is_zero() for y in gens)


@given(st.data())
def test_membership_matches_brute_force(data):
    g = data.draw(finite_groups())
    if g.is_trivial():
        return
    gens = data.draw(st.lists(elements_of(g), max_size=3))
    h = oracles.span(g.torsion, [y.coords for y in gens])
    s = Subgroup(g, tuple(gens))
    for x in g.elements():
        assert membership(s, x).is_member == (x.coords in h)


# quotient

def test_quotient_trivial():
    g = FgAbelianGroup(1, (3,))
    q, proj = quotient(g, Subgroup(g, ()))
    assert q == g


def test_quotient_klein_by_diagonal():
    g = FgAbelianGroup(0, (2, 2))
    q, _ = quotient(g, Subgroup(g, (g.element([1, 1]),)))
    n, sig = oracles.quotient_signature((2, 2), [(1, 1)])
    assert n == 2
    assert q == FgAbelianGroup(0, (2,))
    assert (n, sig) == oracles.group_signature(q.torsion)


def test_quotient_z_by_two():
    q, _ = quotient(Z, Subgroup(Z, (Z.element([2]),)))
    assert q == FgAbelianGroup(0, (2,))


@given(st.data())
def test_quotient_kills_exactly_subgroup(data):
    g = data.draw(finite_groups())
    if g.is_trivial():
        return
    gens = data.draw(st.lists(elements_of(g), max_size=3))
    s = Subgroup(g, tuple(gens))
    q, proj = quotient(g, s)
    assert proj.is_well_defined()
    assert (q.order, oracles.group_signature(q.torsion)[1]) == oracles.quotient_signature(
        g.torsion, [y.coords for y in gens])
    for x in g.elements():
        assert proj(x).is_zero() == membership(s, x).is_member


@given(st.data())
def test_quotient_lift_is_a_section(data):
    g = data.draw(groups())
    gens = data.draw(st.lists(elements_of(g), max_size=2))
    q, proj, lift = quotient_with_lift(g, Subgroup(g, tuple(gens)))
    y = data.draw(elements_of(q))
    assert proj(lift(y)) == y


# direct sums

def test_direct_sum_examples():
    assert direct_sum(Z, FgAbelianGroup()) == Z
    z2 = FgAbelianGroup(0, (2,))
    assert direct_sum(z2, z2).torsion == (2, 2)
    assert direct_sum(z2, FgAbelianGroup(0, (4,))).torsion == (2, 4)
    assert direct_sum(z2, FgAbelianGroup(0, (3,))).torsion == (6,)


@given(groups(), groups())
def test_direct_sum_additivity(a, b):
    s, ia, ib, pa, pb = direct_sum_with_maps(a, b)
    assert s.free_rank == a.free_rank + b.free_rank
    assert s.torsion_order == a.torsion_order * b.torsion_order
    for h in (ia, ib, pa, pb):
        assert h.is_well_defined()
    for x in a.generators():
        assert pa(ia(x)) == x and pb(ia(x)).is_zero()
    for y in b.generators():
        assert pb(ib(y)) == y and pa(ib(y)).is_zero()


# scaling

def test_scale_subgroup_examples():
    g = FgAbelianGroup(1, (2,))
    assert same_subgroup(scale_subgroup(g, 1), Subgroup(g, tuple(g.generators())))
    assert scale_subgroup(g, 2).generators == (g.element([2, 0]),)
    assert scale_subgroup(g, 0).generators == ()


# explicit finite groups

@pytest.mark.parametrize("n,m", [(2, 2), (4, 6), (3, 9), (1, 5), (12, 18)])
def test_decompose_product_of_cyclics(n, m):
    elems = list(itertools.product(range(n), range(m)))
    g, log = decompose_finite_group(
        elems, lambda x, y: ((x[0] + y[0]) % n, (x[1] + y[1]) % m), (0, 0))
    assert g.order == n * m
    assert oracles.group_signature(g.torsion) == oracles.group_signature(
        tuple(d for d in (n, m) if d > 1))
    for x, y in itertools.product(elems, repeat=2):
        s = ((x[0] + y[0]) % n, (x[1] + y[1]) % m)
        assert log[x] + log[y] == log[s]


def test_decompose_rejects_non_group():
    with pytest.raises(ValueError):
        decompose_finite_group([0, 1, 2], lambda x, y: max(x, y), 0)
