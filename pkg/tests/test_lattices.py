import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from latmid import qmat
from latmid.dvr import int_middles
from latmid.forms import GramForm, dual_lattice
from latmid.lattices import (
    DimensionMismatch,
    Lattice,
    TorsionModule,
    compatible_splitting,
    elementary_divisor_multiset,
    intersection_via_duality,
    lattice_intersection,
    lattice_sum,
    middle_lower,
    middle_upper,
    middles,
    quotient_type,
    scale_by_pi,
    standard_dual,
    torsion_middles,
    truncation_bound,
    twist,
)
from latmid.oracles import middles_by_coordinates, torsion_middles_bruteforce
from strategies import lattice_pairs, lattices, matrices


def D(*xs, p=5):
    return Lattice(qmat.diag([mpq(x) for x in xs]), p)


I2 = D(1, 1)
M2 = D(5, mpq(1, 5))


def test_sum_examples():
    assert lattice_sum(I2, I2) == I2
    assert lattice_sum(I2, M2) == D(1, mpq(1, 5))
    assert lattice_sum(D(5, 5), I2) == I2


def test_intersection_examples():
    assert lattice_intersection(I2, I2) == I2
    assert lattice_intersection(I2, M2) == D(5, 1)


def test_twist_examples():
    assert twist(I2, 0) == I2
    assert twist(I2, 1) == D(mpq(1, 5), mpq(1, 5))
    for a, b in itertools.product(range(-2, 3), repeat=2):
        assert (twist(M2, a) <= twist(M2, b)) == (a <= b)


def test_splitting_examples():
    c = compatible_splitting(I2, I2)
    assert c.exponentsL == c.exponentsM
    c = compatible_splitting(I2, M2)
    assert sorted(m - l for l, m in zip(c.exponentsL, c.exponentsM)) == [-1, 1]
    assert c.rebuild() == (I2, M2)


def test_middle_examples():
    lo, up = middles(I2, M2)
    assert lo == D(5, 1) and up == D(1, mpq(1, 5))
    assert middle_lower(I2, M2) == lo and middle_upper(I2, M2) == up
    assert middles(M2, M2) == (M2, M2)


def test_twist_middles():
    for x, y in itertools.product(range(-2, 3), repeat=2):
        lo, up = int_middles(x, y)
        assert middles(twist(M2, x), twist(M2, y)) == (twist(M2, lo), twist(M2, up))


def test_equality_is_module_equality():
    L = Lattice([[1, 2], [0, 5]], 5)
    # columns changed by an element of GL_2(R) that is not in GL_2(Z)
    A = [[mpq(1, 2), 3], [0, 7]]
    L2 = Lattice(qmat.matmul([[1, 2], [0, 5]], A), 5)
    assert L == L2 and hash(L) == hash(L2)
    assert L.basis == L2.basis  # canonical form
    assert L != Lattice([[1, 2], [0, 25]], 5)


def test_canonical_form_shape():
    L = Lattice([[mpq(3, 7), 1], [5, mpq(2, 25)]], 5)
    B = L.basis
    assert B[0][1] == 0
    for i in range(2):
        d = B[i][i]
        assert d > 0 and d == mpq(5) ** L.diagonal_exponents()[i]
    ints, s = L.scaled()
    assert all(isinstance(x, int) for r in ints for x in r)


def test_zero_dimensional():
    Z = Lattice([], 3)
    assert lattice_sum(Z, Z) == Z and middles(Z, Z) == (Z, Z)
    assert compatible_splitting(Z, Z).rebuild() == (Z, Z)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lattice_sum(I2, Lattice.standard(3, 5))
    with pytest.raises(DimensionMismatch):
        middles(I2, Lattice.standard(1, 5))


def test_singular_basis_rejected():
    with pytest.raises((ValueError, ZeroDivisionError)):
        Lattice([[1, 2], [2, 4]], 5)


def test_torsion_examples():
    assert torsion_middles(TorsionModule((1,))) == (TorsionModule(()), TorsionModule((1,)))
    assert torsion_middles(TorsionModule((2,))) == (TorsionModule((1,)), TorsionModule((1,)))
    with pytest.raises(ValueError):
        TorsionModule((0,))


@pytest.mark.parametrize("exps", [(1,), (2,), (3,), (2, 1), (3, 1), (2, 2, 1)])
def test_torsion_against_groups(exps):
    T = TorsionModule(exps)
    lo, up, G, Ls, Us = torsion_middles_bruteforce(T, 3)
    assert torsion_middles(T) == (lo, up)
    assert frozenset(G.mul(3, u) for u in Us) <= Ls <= Us
    assert G.quotient_type(Ls) == up and G.quotient_type(Us) == lo


@given(st.lists(st.integers(1, 6), max_size=5))
def test_torsion_laws(exps):
    T = TorsionModule(tuple(exps))
    lo, up = torsion_middles(T)
    assert lo.length() + up.length() == T.length()
    assert up.exponent - lo.exponent in (0, 1)
    assert up.length() - lo.length() == sum(e % 2 for e in exps)


# -- properties on random pairs ---------------------------------------------


@given(lattice_pairs())
def test_sum_and_intersection_are_extremal(pair):
    L, M = pair
    S, I = lattice_sum(L, M), lattice_intersection(L, M)
    assert S >= L and S >= M and I <= L and I <= M
    assert I == intersection_via_duality(L, M)
    # (L ∩ M)' = L' + M' for the standard pairing
    assert standard_dual(I) == lattice_sum(standard_dual(L), standard_dual(M))
    B = GramForm(qmat.identity(L.dim), 1)
    assert dual_lattice(I, B) == standard_dual(I)


@given(lattice_pairs())
def test_middle_laws(pair):
    L, M = pair
    lo, up = middles(L, M)
    I, S = lattice_intersection(L, M), lattice_sum(L, M)
    assert I <= lo <= up <= S
    assert scale_by_pi(up) <= lo
    assert middles(M, L) == (lo, up)
    assert middles(scale_by_pi(L), M) == (scale_by_pi(up), lo)
    assert middles(S, I) == (lo, up)
    assert middles(L, M, adapted=False) == (lo, up)


@given(lattice_pairs(max_dim=3))
def test_truncation_is_sound(pair):
    L, M = pair
    a = truncation_bound(compatible_splitting(L, M))
    assert middles(L, M, n_max=2 * a + 2, adapted=False) == middles(L, M)
    assert scale_by_pi(L, a) <= M and scale_by_pi(M, a) <= L
    if a:
        assert not (scale_by_pi(L, a - 1) <= M and scale_by_pi(M, a - 1) <= L)


@given(lattice_pairs())
def test_quotients_match(pair):
    L, M = pair
    lo, up = middles(L, M)
    I, S = lattice_intersection(L, M), lattice_sum(L, M)
    assert elementary_divisor_multiset(quotient_type(S, up)) == elementary_divisor_multiset(quotient_type(lo, I))
    assert quotient_type(S, lo) == quotient_type(up, I)


@given(lattice_pairs())
def test_splitting_roundtrip(pair):
    L, M = pair
    c = compatible_splitting(L, M)
    assert c.rebuild() == (L, M)
    assert list(c.exponentsM) == sorted(c.exponentsM)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 4), st.data())
def test_split_pairs_match_coordinate_formula(p, n, data):
    a = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    g = data.draw(matrices(n, p, -1, 1))
    d = lambda es: qmat.diag([mpq(p) ** e for e in es])  # noqa: E731
    L, M = Lattice(qmat.matmul(g, d(a)), p), Lattice(qmat.matmul(g, d(b)), p)
    assert middles(L, M) == middles_by_coordinates(a, b, g, p)


@given(lattices(), st.integers(-3, 3))
def test_twist_roundtrip(L, a):
    assert twist(twist(L, a), -a) == L
    assert twist(L, a).canonical_key() == Lattice(qmat.scale(L.basis, mpq(L.p) ** -a), L.p).canonical_key()
