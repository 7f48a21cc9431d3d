import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given

from latmid import qmat
from latmid.forms import (
    DegenerateForm,
    FpForm,
    GramForm,
    NotAlmostSelfDual,
    asd_thompson,
    asd_via_middle,
    dual_lattice,
    gram_matrix,
    inject_fault,
    is_almost_self_dual,
    residual_forms,
    thompson_rescale,
)
from latmid.lattices import Lattice, lattice_intersection, lattice_sum, middles, scale_by_pi
from strategies import lattice_and_form, lattice_pairs


def D(*xs, p=5):
    return Lattice(qmat.diag([mpq(x) for x in xs]), p)


I = GramForm(qmat.identity(2))


def test_gram_form_validation():
    with pytest.raises(DegenerateForm):
        GramForm([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        GramForm([[1, 2], [3, 1]])
    with pytest.raises(ValueError):
        GramForm([[1, 1], [-1, 0]], -1)  # nonzero diagonal
    B = GramForm([[0, 1], [-1, 0]], -1)
    assert B([1, 0], [0, 1]) == 1 and B([0, 1], [1, 0]) == -1


def test_dual_examples():
    assert dual_lattice(D(1, 1), I) == D(1, 1)
    assert dual_lattice(D(5, 1), I) == D(mpq(1, 5), 1)


def test_almost_self_dual_examples():
    assert is_almost_self_dual(D(1, 1), I)
    assert is_almost_self_dual(D(1, 1), GramForm(qmat.diag([5, 1])))
    assert not is_almost_self_dual(D(1, 1), GramForm(qmat.diag([25, 1])))


def test_asd_examples():
    B5 = GramForm(qmat.diag([5, 1]))
    assert asd_via_middle(D(1, 1), B5) == D(1, 1)
    assert asd_via_middle(D(5, 1), I) == D(1, 1)


def test_thompson_example():
    hist = []
    L = asd_thompson(D(25, 1), I, hist)
    assert is_almost_self_dual(L, I)
    assert L == D(1, 1)
    assert hist == [4, 2, 0]
    assert asd_thompson(D(1, 1), I) == D(1, 1)


def test_residual_examples():
    rf = residual_forms(D(1, 1), I)
    assert rf.b1 == FpForm(np.eye(2, dtype=np.int64), 1, 5) and rf.b2.dim == 0
    rf = residual_forms(D(1, 1), GramForm(qmat.diag([5, 1])))
    assert rf.b1.matrix.tolist() == [[1]] and rf.b2.matrix.tolist() == [[1]]
    with pytest.raises(NotAlmostSelfDual):
        residual_forms(D(1, 1), GramForm(qmat.diag([25, 1])))


def test_fault_injection_breaks_duality():
    L = Lattice.standard(2, 5)
    B = GramForm([[25, 5], [5, 2]])
    good = dual_lattice(L, B)
    with inject_fault("dual_sign"):
        assert dual_lattice(L, B) != good
    assert dual_lattice(L, B) == good


@given(lattice_and_form())
def test_duality(LB):
    L, B = LB
    Ld = dual_lattice(L, B)
    assert dual_lattice(Ld, B) == L
    G = gram_matrix(Ld, B)
    # L' pairs integrally with L, and only L' does
    P = qmat.matmul(qmat.matmul(qmat.transpose(Ld.basis), B.matrix), L.basis)
    assert all(x == 0 or x.denominator % L.p for r in P for x in r)
    assert G is not None


@given(lattice_and_form())
def test_asd_via_middle(LB):
    L, B = LB
    Ld = dual_lattice(L, B)
    A = asd_via_middle(L, B)
    assert is_almost_self_dual(A, B)
    assert dual_lattice(A, B) == middles(L, Ld)[1]
    assert scale_by_pi(dual_lattice(A, B)) <= A <= dual_lattice(A, B)


@given(lattice_and_form())
def test_thompson_agrees(LB):
    L, B = LB
    hist = []
    T = asd_thompson(L, B, hist)
    assert T == asd_via_middle(thompson_rescale(L, B), B)
    assert all(a > b for a, b in zip(hist, hist[1:]))
    assert len(hist) <= max(hist[0], 1) + 1


@given(lattice_and_form())
def test_residual_forms(LB):
    L, B = LB
    A = asd_via_middle(L, B)
    rf = residual_forms(A, B)
    assert rf.b1.dim + rf.b2.dim == L.dim
    for b in (rf.b1, rf.b2):
        assert b.is_nondegenerate() and b.is_eps_symmetric()
        if B.epsilon == -1:
            assert b.dim % 2 == 0


@given(lattice_pairs(max_dim=3))
def test_duality_reverses_inclusion(pair):
    L, M = pair
    B = GramForm(qmat.identity(L.dim))
    Ld, Md = dual_lattice(L, B), dual_lattice(M, B)
    assert (L <= M) == (Md <= Ld)
    assert dual_lattice(lattice_sum(L, M), B) == lattice_intersection(Ld, Md)
