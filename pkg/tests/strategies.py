"""Hypothesis strategies for small lattices and forms."""

from gmpy2 import mpq
from hypothesis import assume
from hypothesis import strategies as st

from latmid import qmat
from latmid.forms import GramForm
from latmid.lattices import Lattice

primes = st.sampled_from([3, 5, 7])


@st.composite
def scalars(draw, p, vmin=-3, vmax=3, allow_zero=True):
    if allow_zero and draw(st.booleans()) and draw(st.booleans()):
        return mpq(0)
    u = draw(st.integers(1, 12).filter(lambda x: x % p)) * draw(st.sampled_from([1, -1]))
    return mpq(u) * mpq(p) ** draw(st.integers(vmin, vmax))


@st.composite
def matrices(draw, n, p, vmin=-3, vmax=3):
    M = [[draw(scalars(p, vmin, vmax)) for _ in range(n)] for _ in range(n)]
    assume(n == 0 or qmat.det(M) != 0)
    return M


@st.composite
def lattice_pairs(draw, max_dim=4):
    p = draw(primes)
    n = draw(st.integers(1, max_dim))
    return Lattice(draw(matrices(n, p)), p), Lattice(draw(matrices(n, p)), p)


@st.composite
def lattices(draw, max_dim=4):
    p = draw(primes)
    n = draw(st.integers(1, max_dim))
    return Lattice(draw(matrices(n, p)), p)


@st.composite
def lattice_and_form(draw, max_dim=4, eps=None):
    p = draw(primes)
    eps = draw(st.sampled_from([1, -1])) if eps is None else eps
    n = 2 * draw(st.integers(1, max_dim // 2)) if eps == -1 else draw(st.integers(1, max_dim))
    G = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                if eps == 1:
                    G[i][i] = draw(scalars(p, allow_zero=False))
            else:
                x = draw(scalars(p))
                G[i][j], G[j][i] = x, eps * x
    assume(qmat.det(G) != 0)
    return Lattice(draw(matrices(n, p)), p), GramForm(G, eps)
