"""Independent brute-force checkers used by the test suite and ``selftest``.

None of these share code paths with the algorithms they check beyond basic
F_p / Q matrix arithmetic.
"""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np
from gmpy2 import mpq

from . import gfp, qmat
from .dvr import int_middles
from .lattices import Lattice, TorsionModule

__all__ = [
    "torsion_middles_bruteforce",
    "torsion_quotient_type",
    "anisotropic_kernel",
    "witt_signature_bruteforce",
    "predicted_signature",
    "middles_by_coordinates",
    "has_isotropic_spin",
]


# ---- torsion modules as explicit groups ---------------------------------

def _logp(n, p):
    k = 0
    while n > 1:
        n, r = divmod(n, p)
        assert r == 0
        k += 1
    return k


def _exps_from_sizes(sizes, p, top):
    # ranks[k-1] = number of cyclic factors of exponent >= k
    ranks = [_logp(sizes[k] // sizes[k - 1], p) for k in range(1, top + 2)]
    exps = []
    for k in range(1, top + 1):
        exps += [k] * (ranks[k - 1] - ranks[k])
    return TorsionModule.of(exps)


class _Group:
    """⊕ Z/p^{e_i} with elements as tuples."""

    def __init__(self, exps, p):
        self.exps = tuple(exps)
        self.p = p
        self.mods = tuple(p ** e for e in self.exps)
        self.elements = list(itertools.product(*(range(m) for m in self.mods)))
        self.zero = tuple(0 for _ in self.exps)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.mods))

    def mul(self, k, a):
        return tuple((k * x) % m for x, m in zip(a, self.mods))

    def image(self, n):
        return frozenset(self.mul(self.p ** n, a) for a in self.elements)

    def kernel(self, n):
        return frozenset(a for a in self.elements if self.mul(self.p ** n, a) == self.zero)

    def sum(self, H, K):
        return frozenset(self.add(a, b) for a in H for b in K)

    def type_of(self, H):
        """Exponent multiset of the subgroup H, from the sizes of H[p^k]."""
        p = self.p
        top = max(self.exps, default=0)
        sizes = [len([a for a in H if self.mul(p ** k, a) == self.zero]) for k in range(top + 2)]
        return _exps_from_sizes(sizes, p, top)

    def quotient_type(self, H):
        p = self.p
        top = max(self.exps, default=0)
        sizes = [
            len([a for a in self.elements if self.mul(p ** k, a) in H]) // len(H)
            for k in range(top + 2)
        ]
        return _exps_from_sizes(sizes, p, top)


def torsion_middles_bruteforce(T: TorsionModule, p: int):
    """m_-, m_+ of T evaluated literally as subgroups of ⊕ Z/p^{e_i}.

    Returns (lower_type, upper_type, group, lower_set, upper_set).
    """
    G = _Group(T.exponents, p)
    full = frozenset(G.elements)
    zero = frozenset([G.zero])
    top = max(T.exponents, default=0)
    lower, upper = zero, full
    for n in range(top + 1):
        im, ker = G.image(n), G.kernel(n)
        lower = G.sum(lower, im & ker)
        upper = upper & G.sum(im, ker)
    return G.type_of(lower), G.type_of(upper), G, lower, upper


def torsion_quotient_type(G: "_Group", H) -> TorsionModule:
    return G.quotient_type(H)


# ---- Witt classes by splitting off hyperbolic planes --------------------

def _find_isotropic(G, p):
    r = G.shape[0]
    for v in itertools.product(range(p), repeat=r):
        if any(v):
            v = np.array(v, dtype=np.int64)
            if int(v @ G @ v) % p == 0:
                return v
    return None


def anisotropic_kernel(G, p: int) -> np.ndarray:
    """Gram matrix of the anisotropic kernel of a nondegenerate symmetric form."""
    G = np.asarray(G, dtype=np.int64) % p
    while G.shape[0]:
        v = _find_isotropic(G, p)
        if v is None:
            break
        Gv = G @ v % p
        j = int(np.nonzero(Gv)[0][0])
        w = np.zeros_like(v)
        w[j] = pow(int(Gv[j]), -1, p)  # B(v, w) = 1
        H = np.stack([v, w], axis=1)
        perp = gfp.nullspace(H.T @ G % p, p)
        G = perp.T @ G @ perp % p
    return G


def witt_signature_bruteforce(G, p: int):
    """(rank of anisotropic kernel, set of nonzero values it represents)."""
    K = anisotropic_kernel(G, p)
    r = K.shape[0]
    vals = set()
    for v in itertools.product(range(p), repeat=r):
        if any(v):
            v = np.array(v, dtype=np.int64)
            vals.add(int(v @ K @ v) % p)
    vals.discard(0)
    return r, frozenset(vals)


def predicted_signature(w) -> tuple:
    """The (rank, values) signature implied by a WittClass."""
    p = w.p
    if w.is_zero:
        return 0, frozenset()
    if w.rank_parity == 1:
        return 1, frozenset(w.disc * x * x % p for x in range(1, p))
    return 2, frozenset(range(1, p))


# ---- lattice middles coordinate by coordinate ---------------------------

def middles_by_coordinates(a, b, g, p: int):
    """m_-, m_+ of L = g diag(p^a_i), M = g diag(p^b_i).

    Uses m_-(L(x), L(y)) = L(m_-(x, y)) on each coordinate, with L(x) = p^-x R.
    """
    lo, up = [], []
    for ai, bi in zip(a, b):
        mm, mp = int_middles(-ai, -bi)
        lo.append(-mm)
        up.append(-mp)
    d = lambda es: qmat.diag([mpq(p) ** e for e in es])  # noqa: E731
    return Lattice(qmat.matmul(g, d(lo)), p), Lattice(qmat.matmul(g, d(up)), p)


# ---- maximal isotropic submodules ---------------------------------------

def has_isotropic_spin(gens, form, p: int, limit: int = 20000) -> bool | None:
    """Whether some nonzero v spins up a totally isotropic submodule.

    Any totally isotropic submodule contains a simple one, which is the span
    of the orbit of each of its vectors, so this decides whether a nonzero
    totally isotropic submodule exists.  Returns None above ``limit`` vectors.
    """
    form = np.asarray(form, dtype=np.int64) % p
    n = form.shape[0]
    if n == 0:
        return False
    if p ** n > limit:
        return None
    for v in itertools.product(range(p), repeat=n):
        # projective representatives only: first nonzero coordinate is 1
        nz = next((x for x in v if x), 0)
        if nz != 1:
            continue
        W = gfp.spin(np.array(v, dtype=np.int64).reshape(n, 1), gens, p)
        if not (W.T @ form @ W % p).any():
            return True
    return False


def count_factor_dims(ss) -> Counter:
    out = Counter()
    for T, m in ss.factors:
        out[T.dim] += m
    return out
