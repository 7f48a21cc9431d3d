import numpy as np
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from latmid import gfp, groups, qmat
from latmid.lattices import Lattice
from latmid.modrep import (
    GeneratorCountMismatch,
    GroupRepK,
    KGModule,
    NotStable,
    brauer_nesbitt_check,
    composition_factors,
    find_submodule,
    irreducibles_isomorphic,
    is_stable,
    reduce_mod_pi,
    semisimplify,
    split_module,
    ss_isomorphic,
    stable_lattice,
)
from latmid.oracles import count_factor_dims


def rep_of(name):
    fx = groups.by_name(name)
    return GroupRepK(fx.generators, fx.order)


def test_stable_lattice_example():
    rep = rep_of("C2")
    L = stable_lattice(rep, Lattice(qmat.diag([1, mpq(1, 5)]), 5))
    assert L == Lattice(qmat.diag([mpq(1, 5), mpq(1, 5)]), 5)
    assert is_stable(rep, L)
    assert stable_lattice(rep, L) == L


def test_reduce_requires_stability():
    rep = rep_of("C2")
    with pytest.raises(NotStable):
        reduce_mod_pi(rep, Lattice(qmat.diag([1, 5]), 5))


def test_c3_rotation_mod_3_is_unipotent():
    ss = semisimplify(reduce_mod_pi(rep_of("C3rot"), Lattice.standard(2, 3)))
    assert len(ss.factors) == 1
    S, m = ss.factors[0]
    assert (S.dim, m) == (1, 2) and S.generators[0].tolist() == [[1]]


def test_c2_regular_mod_3():
    ss = semisimplify(reduce_mod_pi(rep_of("C2"), Lattice.standard(2, 3)))
    signs = sorted(int(S.generators[0][0, 0]) for S, m in ss.factors)
    assert signs == [1, 2] and all(m == 1 for _, m in ss.factors)


def test_s3_permutation_mod_5():
    ss = semisimplify(reduce_mod_pi(rep_of("S3"), Lattice.standard(3, 5)))
    assert count_factor_dims(ss) == {1: 1, 2: 1}


def test_q8_mod_3_is_two_copies_of_the_2dim_simple():
    ss = semisimplify(reduce_mod_pi(rep_of("Q8"), Lattice.standard(4, 3)))
    assert [(S.dim, m) for S, m in ss.factors] == [(2, 2)]


def test_ss_isomorphic_examples():
    triv = KGModule([np.eye(1, dtype=np.int64)], 3)
    sign = KGModule([np.array([[2]])], 3)
    a = semisimplify(KGModule.direct_sum([triv, sign], 1, 3))
    b = semisimplify(KGModule([np.array([[0, 1], [1, 0]])], 3))
    assert ss_isomorphic(a, b)
    assert not ss_isomorphic(a, semisimplify(KGModule.direct_sum([triv, triv], 1, 3)))
    with pytest.raises(GeneratorCountMismatch):
        ss_isomorphic(a, semisimplify(KGModule([np.eye(2, dtype=np.int64)] * 2, 3)))


def test_non_split_extension_has_same_ss():
    J = KGModule([np.array([[1, 1], [0, 1]])], 5)
    assert ss_isomorphic(semisimplify(J), semisimplify(KGModule([np.eye(2, dtype=np.int64)], 5)))


def test_brauer_nesbitt_on_fixtures():
    for fx in groups.all_fixtures():
        rep = GroupRepK(fx.generators, fx.order)
        for p in (3, 5):
            L = Lattice.standard(rep.dim, p)
            rng = np.random.default_rng(p)
            g = [[int(x) for x in row] for row in rng.integers(-4, 5, (rep.dim, rep.dim))]
            if qmat.det(g) == 0:
                continue
            M = stable_lattice(rep, Lattice(g, p))
            assert brauer_nesbitt_check(rep, L, M)


def _invertible(rng, n, p, lo=0, hi=None):
    hi = p if hi is None else hi
    while True:
        A = rng.integers(lo, hi, (n, n))
        d = gfp.det(A, p) if hi == p else qmat.det(A.tolist())
        if d:
            return A


@st.composite
def modules(draw, max_dim=5):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, max_dim))
    k = draw(st.integers(1, 2))
    rng = np.random.default_rng(draw(st.integers(0, 2**32)))
    gens = []
    for _ in range(k):
        A = _invertible(rng, n, p)
        # block upper-triangular shapes make reducible modules common
        if n > 1 and draw(st.booleans()):
            cut = int(rng.integers(1, n))
            while True:
                B = A.copy()
                B[cut:, :cut] = 0
                if gfp.det(B, p):
                    break
                A = _invertible(rng, n, p)
            A = B
        gens.append(A)
    return KGModule(gens, p)


@given(modules(), st.integers(0, 10**6))
def test_submodule_and_split(E, seed):
    W = find_submodule(E, np.random.default_rng(seed))
    if W is None:
        return
    assert 0 < W.shape[1] < E.dim
    assert gfp.rank(W, E.p) == W.shape[1]
    for g in E.generators:
        assert gfp.rank(np.hstack([W, g @ W % E.p]), E.p) == W.shape[1]
    sub, quo = split_module(E, W)
    assert sub.dim + quo.dim == E.dim


@given(modules(), st.integers(0, 100), st.integers(0, 100))
def test_semisimplify_is_seed_independent(E, s1, s2):
    a, b = semisimplify(E, s1), semisimplify(E, s2)
    assert a.dim == E.dim
    assert ss_isomorphic(a, b)
    # a semisimple module is its own semisimplification
    assert ss_isomorphic(semisimplify(a.module(), s2), a)


@given(modules(max_dim=4))
def test_factors_are_irreducible(E):
    for S in composition_factors(E):
        assert find_submodule(S, np.random.default_rng(1)) is None
        assert irreducibles_isomorphic(S, S)


@given(modules(max_dim=4), st.integers(0, 2**32))
def test_conjugation_preserves_ss(E, seed):
    T = _invertible(np.random.default_rng(seed), E.dim, E.p)
    assert ss_isomorphic(semisimplify(E), semisimplify(E.conjugate(T)))


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 6), st.data())
def test_charpoly_against_sympy(p, n, data):
    A = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))).reshape(n, n)
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.Matrix(A.tolist()).charpoly(x).as_expr(), x, modulus=p)
    want = [int(c) % p for c in ref.all_coeffs()]
    want = [0] * (n + 1 - len(want)) + want
    assert gfp.charpoly(A, p) == want


@given(st.sampled_from(["C2", "C3", "S3", "D4", "Q8"]), st.sampled_from([3, 5]), st.integers(0, 2**32))
def test_stable_lattice_is_stable_and_idempotent(name, p, seed):
    rep = rep_of(name)
    g = _invertible(np.random.default_rng(seed), rep.dim, p, -5, 6).tolist()
    L = stable_lattice(rep, Lattice(g, p))
    assert is_stable(rep, L)
    assert stable_lattice(rep, L) == L
    assert Lattice(g, p) <= L
