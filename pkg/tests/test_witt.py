import itertools

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from latmid import qmat
from latmid.forms import FpForm, GramForm, asd_thompson, asd_via_middle, gram_matrix, residual_forms
from latmid.lattices import Lattice
from latmid.oracles import predicted_signature, witt_signature_bruteforce
from latmid.witt import (
    DiagForm,
    EvenResidueChar,
    WittClass,
    WrongEpsilon,
    diagonalize_compatible,
    nonsquare,
    springer_and_residual_classes,
    springer_residues,
    verify_springer_vs_residuals,
    witt_class_form,
    witt_class_k,
)
from strategies import lattice_and_form

P = 5


def test_witt_examples():
    assert witt_class_k(DiagForm((1, -1), P)).is_zero
    w = witt_class_k(DiagForm((1,), P))
    assert (w.rank_parity, w.disc) == (1, 1)
    assert witt_class_k(DiagForm((1, 1), P)).is_zero
    assert not witt_class_k(DiagForm((1, 1), 3)).is_zero


def test_springer_examples():
    d1, d2 = springer_residues(DiagForm((mpq(2),), P))
    assert d1 == witt_class_k(DiagForm((2,), P)) and d2.is_zero
    d1, d2 = springer_residues(DiagForm((mpq(10),), P))
    assert d1.is_zero and d2 == witt_class_k(DiagForm((2,), P))
    d1, d2 = springer_residues(DiagForm((mpq(1), mpq(-1)), P))
    assert d1.is_zero and d2.is_zero


def test_diagonalize_hyperbolic_plane():
    B = GramForm([[0, 1], [1, 0]])
    d, X = diagonalize_compatible(B, Lattice.standard(2, P))
    u1, u2 = d.entries
    assert all(x.denominator % P and x.numerator % P for x in (u1, u2))
    d1, d2 = springer_residues(d)
    assert d1.is_zero and d2.is_zero


def test_verify_examples():
    I = GramForm(qmat.identity(2))
    assert verify_springer_vs_residuals(Lattice.standard(2, P), I)
    (d1, d2), _ = springer_and_residual_classes(Lattice.standard(2, P), I)
    assert d1.is_zero and d2.is_zero
    B = GramForm(qmat.diag([5, 1]))
    assert verify_springer_vs_residuals(Lattice.standard(2, P), B)
    (d1, d2), _ = springer_and_residual_classes(Lattice.standard(2, P), B)
    assert (d1.rank_parity, d1.disc) == (1, 1) and (d2.rank_parity, d2.disc) == (1, 1)


def test_errors():
    with pytest.raises(EvenResidueChar):
        witt_class_k(DiagForm((1,), 2))
    with pytest.raises(WrongEpsilon):
        diagonalize_compatible(GramForm([[0, 1], [-1, 0]], -1), Lattice.standard(2, 3))
    with pytest.raises(WrongEpsilon):
        witt_class_form(FpForm(np.array([[0, 1], [2, 0]]), -1, 3))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_witt_against_anisotropic_kernel(p):
    for r in range(4):
        for ent in itertools.combinations_with_replacement(range(1, p), r):
            G = np.diag(ent).astype(np.int64) if ent else np.zeros((0, 0), np.int64)
            assert witt_signature_bruteforce(G, p) == predicted_signature(witt_class_k(DiagForm(ent, p)))


@given(st.sampled_from([3, 5, 7, 11]), st.lists(st.integers(1, 50), max_size=5), st.lists(st.integers(1, 50), max_size=5))
def test_witt_addition(p, a, b):
    a = [x for x in a if x % p]
    b = [x for x in b if x % p]
    wa, wb = witt_class_k(DiagForm(tuple(a), p)), witt_class_k(DiagForm(tuple(b), p))
    assert witt_class_k(DiagForm(tuple(a), p) + DiagForm(tuple(b), p)) == wa + wb
    assert wa + WittClass.zero(p) == wa
    assert (wa + witt_class_k(DiagForm(tuple(-x for x in a), p))).is_zero


@given(st.sampled_from([3, 5, 7]), st.lists(st.tuples(st.integers(1, 30), st.integers(-3, 3)), max_size=5), st.data())
def test_residues_are_additive_and_square_invariant(p, ent, data):
    ent = [(u, e) for u, e in ent if u % p]
    q = DiagForm(tuple(mpq(u) * mpq(p) ** e for u, e in ent), p)
    d1, d2 = springer_residues(q)
    # ∂ of an orthogonal sum is the sum of the ∂'s
    split = data.draw(st.integers(0, len(ent)))
    a, b = DiagForm(q.entries[:split], p), DiagForm(q.entries[split:], p)
    (a1, a2), (b1, b2) = springer_residues(a), springer_residues(b)
    assert (a1 + b1, a2 + b2) == (d1, d2)
    # scaling an entry by a square in Q changes nothing
    if ent:
        c = mpq(data.draw(st.integers(1, 20)), data.draw(st.integers(1, 20))) ** 2
        scaled = DiagForm((q.entries[0] * c,) + q.entries[1:], p)
        assert springer_residues(scaled) == (d1, d2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_uniformizer_twist(p):
    s = nonsquare(p)
    for u in range(1, p):
        for e in (1, 3, -1):
            q = DiagForm((mpq(u) * mpq(p) ** e,), p)
            d1, d2 = springer_residues(q)
            t1, t2 = springer_residues(q, uniformizer=s * p)
            assert t1 == d1
            # u p^e = (u / s^e) (s p)^e, and s^e is s up to squares when e is odd
            assert t2 == d2.scaled(s)


@given(lattice_and_form(eps=1))
def test_springer_matches_residual_forms(LB):
    L, B = LB
    assert verify_springer_vs_residuals(asd_via_middle(L, B), B)


@given(lattice_and_form(eps=1), st.data())
def test_residual_classes_do_not_depend_on_lattice(LB, data):
    L, B = LB
    from strategies import matrices

    M = Lattice(data.draw(matrices(L.dim, L.p)), L.p)
    A1, A2 = asd_via_middle(L, B), asd_thompson(M, B)
    r1, r2 = residual_forms(A1, B), residual_forms(A2, B)
    assert witt_class_form(r1.b1) == witt_class_form(r2.b1)
    assert witt_class_form(r1.b2) == witt_class_form(r2.b2)


@given(lattice_and_form(eps=1))
def test_diagonalization_is_compatible(LB):
    L, B = LB
    d, X = diagonalize_compatible(B, L)
    G = qmat.matmul(qmat.matmul(qmat.transpose(X), B.matrix), X)
    assert all(G[i][j] == 0 for i in range(L.dim) for j in range(L.dim) if i != j)
    assert [G[i][i] for i in range(L.dim)] == list(d.entries)
    assert Lattice(X, L.p) == L
    assert gram_matrix(L, B) is not None
