"""Group representations over Q, their reductions mod p, and semisimplification.

A finite group is given by generator matrices.  Reduction mod p of a stable
lattice gives a ``KGModule`` over F_p, which the Meataxe splits into
composition factors.  Irreducibility is certified with Norton's criterion and
isomorphism of irreducibles is confirmed by exhibiting a nonzero module map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gfp, qmat
from .dvr import residue, valuation
from .lattices import Lattice

__all__ = [
    "NotStable",
    "UnboundedAction",
    "GeneratorCountMismatch",
    "MeataxeFailure",
    "GroupRepK",
    "KGModule",
    "SSDecomp",
    "stable_lattice",
    "is_stable",
    "reduce_mod_pi",
    "find_submodule",
    "split_module",
    "composition_factors",
    "irreducibles_isomorphic",
    "semisimplify",
    "ss_isomorphic",
    "brauer_nesbitt_check",
    "fingerprint_words",
]


class NotStable(ValueError):
    pass


class UnboundedAction(RuntimeError):
    pass


class GeneratorCountMismatch(ValueError):
    pass


class MeataxeFailure(RuntimeError):
    """No splitting and no irreducibility certificate within the attempt budget."""


@dataclass(frozen=True, eq=False)
class GroupRepK:
    """Generator images of a finite group acting on Q^n.

    ``group_order_bound`` bounds the word length used when spinning lattices.
    """

    generators: tuple
    group_order_bound: int

    def __post_init__(self):
        gens = tuple(qmat.as_matrix(g) for g in self.generators)
        if not gens:
            raise ValueError("need at least one generator")
        n = len(gens[0])
        for g in gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise ValueError("generators must be square of equal size")
            if n and qmat.det(g) == 0:
                raise ValueError("generator is not invertible")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0])


class KGModule:
    """F_p[G]-module of dimension ``dim`` given by invertible generator matrices."""

    __slots__ = ("generators", "p", "dim")

    def __init__(self, generators, p: int, dim: int | None = None):
        gens = tuple(gfp.asarray(g, p).reshape(len(g), -1) if len(g) else np.zeros((0, 0), np.int64) for g in generators)
        self.dim = gens[0].shape[0] if gens else (dim or 0)
        if dim is not None and dim != self.dim and gens:
            raise ValueError("dim does not match generators")
        for g in gens:
            if g.shape != (self.dim, self.dim):
                raise ValueError("generators must be square of equal size")
            if self.dim and gfp.det(g, p) == 0:
                raise ValueError("generator is not invertible over F_p")
        self.generators = gens
        self.p = p

    @classmethod
    def _trusted(cls, gens, p):
        obj = cls.__new__(cls)
        obj.generators = tuple(gens)
        obj.p = p
        obj.dim = gens[0].shape[0] if gens else 0
        return obj

    def dual(self) -> "KGModule":
        """Contragredient module g ↦ g^-T."""
        if self.dim == 0:
            return self
        return KGModule._trusted([gfp.inv(g, self.p).T.copy() for g in self.generators], self.p)

    def conjugate(self, T) -> "KGModule":
        """Same module in the basis given by the columns of T."""
        Ti = gfp.inv(T, self.p)
        return KGModule._trusted([Ti @ g @ T % self.p for g in self.generators], self.p)

    @staticmethod
    def direct_sum(mods, ngens: int, p: int) -> "KGModule":
        mods = [m for m in mods if m.dim]
        n = sum(m.dim for m in mods)
        gens = []
        for k in range(ngens):
            G = np.zeros((n, n), dtype=np.int64)
            off = 0
            for m in mods:
                G[off:off + m.dim, off:off + m.dim] = m.generators[k]
                off += m.dim
            gens.append(G)
        return KGModule._trusted(gens, p)

    def __repr__(self):
        return f"KGModule(p={self.p}, dim={self.dim}, ngens={len(self.generators)})"


def _ngens(E: KGModule) -> int:
    return len(E.generators)


def is_stable(rep: GroupRepK, L: Lattice) -> bool:
    P, Pi = L.basis, L.inverse_basis()
    for g in rep.generators:
        A = qmat.matmul(Pi, qmat.matmul(g, P))
        if not all(x == 0 or valuation(x, L.p) >= 0 for row in A for x in row):
            return False
        if valuation(qmat.det(A), L.p) != 0:
            return False
    return True


def stable_lattice(rep: GroupRepK, M0: Lattice | None = None, p: int | None = None) -> Lattice:
    """Σ_w w·M0 over words w in the generators, grown until it stabilizes."""
    if M0 is None:
        if p is None:
            raise ValueError("need a starting lattice or a prime")
        M0 = Lattice.standard(rep.dim, p)
    if M0.dim != rep.dim:
        raise ValueError("lattice and representation dimensions differ")
    L = M0
    for _ in range(rep.group_order_bound + 1):
        cols = L.columns
        for g in rep.generators:
            cols += qmat.transpose(qmat.matmul(g, L.basis))
        L2 = Lattice.from_generators(cols, L.dim, L.p)
        if L2 == L:
            if not is_stable(rep, L):
                raise NotStable("spinning converged to a lattice that is not stable")
            return L
        L = L2
    raise UnboundedAction(f"lattice did not stabilize within {rep.group_order_bound} steps")


def reduce_mod_pi(rep: GroupRepK, L: Lattice) -> KGModule:
    """The F_p[G]-module L/pL, in the reduction of L's canonical basis."""
    p = L.p
    P, Pi = L.basis, L.inverse_basis()
    gens = []
    for g in rep.generators:
        A = qmat.matmul(Pi, qmat.matmul(g, P))
        try:
            gens.append(np.array([[residue(x, p) for x in row] for row in A], dtype=np.int64).reshape(L.dim, L.dim))
        except ValueError:
            raise NotStable("lattice is not stable under a generator") from None
    E = KGModule._trusted(gens, p)
    for g in E.generators:
        if E.dim and gfp.det(g, p) == 0:
            raise NotStable("generator does not map the lattice onto itself")
    return E


# -- Meataxe -----------------------------------------------------------------


class _AlgebraSampler:
    """Random elements of the matrix algebra spanned by products of generators."""

    def __init__(self, gens, p, rng):
        self.p = p
        self.rng = rng
        self.pool = [g % p for g in gens]
        n = gens[0].shape[0]
        self.n = n

    def __call__(self):
        p, rng, pool = self.p, self.rng, self.pool
        if len(pool) < 24:
            i, j = rng.integers(len(pool), size=2)
            pool.append(pool[i] @ pool[j] % p)
        k = int(rng.integers(1, min(4, len(pool)) + 1))
        idx = rng.choice(len(pool), size=k, replace=False)
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for i in idx:
            A = (A + int(rng.integers(1, p)) * pool[i]) % p
        return (A + int(rng.integers(0, p)) * np.eye(self.n, dtype=np.int64)) % p


def find_submodule(E: KGModule, rng, max_tries: int = 400):
    """A proper nonzero submodule (columns) of E, or None if E is irreducible."""
    d, p = E.dim, E.p
    if d <= 1:
        return None
    gens = list(E.generators)
    gens_t = [g.T.copy() for g in gens]
    sample = _AlgebraSampler(gens, p, rng)
    for _ in range(max_tries):
        A = sample()
        for f in gfp.irreducible_factors(gfp.charpoly(A, p), p):
            N = gfp.poly_eval(f, A, p)
            null = gfp.nullspace(N, p)
            if null.shape[1] == 0:
                continue
            W = gfp.spin(null[:, :1], gens, p)
            if W.shape[1] < d:
                return W
            if null.shape[1] != len(f) - 1:
                continue
            # Norton: with nullity = deg f, one vector of each kernel decides.
            nullt = gfp.nullspace(N.T, p)
            Wt = gfp.spin(nullt[:, :1], gens_t, p)
            if Wt.shape[1] < d:
                return gfp.nullspace(Wt.T, p)
            return None
    raise MeataxeFailure(f"no decision for a module of dimension {d} after {max_tries} tries")


def split_module(E: KGModule, W):
    """(submodule spanned by W, quotient E/W) with their induced actions."""
    p = E.p
    k = W.shape[1]
    T = np.hstack([W, gfp.complement(W, p)])
    Ti = gfp.inv(T, p)
    sub, quo = [], []
    for g in E.generators:
        M = Ti @ g @ T % p
        if np.any(M[k:, :k]):
            raise ValueError("W is not a submodule")
        sub.append(M[:k, :k].copy())
        quo.append(M[k:, k:].copy())
    return KGModule._trusted(sub, p), KGModule._trusted(quo, p)


def composition_factors(E: KGModule, seed: int = 0) -> list[KGModule]:
    rng = np.random.default_rng(seed)
    out = []
    stack = [E]
    while stack:
        M = stack.pop()
        if M.dim == 0:
            continue
        W = find_submodule(M, rng)
        if W is None:
            out.append(M)
            continue
        sub, quo = split_module(M, W)
        stack.append(quo)
        stack.append(sub)
    return out


def fingerprint_words(gens, p):
    """Fixed list of algebra elements: generators, their pairwise products, their sum."""
    words = list(gens)
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            words.append(gens[i] @ gens[j] % p)
    if gens:
        words.append(sum(gens) % p)
    return words


def _fingerprint(S: KGModule):
    return tuple(tuple(gfp.charpoly(w, S.p)) for w in fingerprint_words(list(S.generators), S.p))


def hom_space(S: KGModule, T: KGModule):
    """Basis of Hom_G(S, T) as an array of shape (k, T.dim, S.dim)."""
    return gfp.solve_left_hom(list(S.generators), list(T.generators), S.p)


def irreducibles_isomorphic(S: KGModule, T: KGModule) -> bool:
    """For irreducible S, T: isomorphic iff a nonzero module map exists."""
    if S.dim != T.dim or S.p != T.p:
        return False
    if S.dim == 0:
        return True
    if _fingerprint(S) != _fingerprint(T):
        return False
    return hom_space(S, T).shape[0] > 0


@dataclass(frozen=True, eq=False)
class SSDecomp:
    """Composition factors grouped into isomorphism classes."""

    factors: tuple  # ((KGModule, multiplicity), ...)
    fingerprint: tuple
    ngens: int
    p: int

    @property
    def dim(self) -> int:
        return sum(m.dim * k for m, k in self.factors)

    def module(self) -> KGModule:
        """The semisimple module ⊕ S_i^{m_i} as a block-diagonal module."""
        mods = [m for m, k in self.factors for _ in range(k)]
        return KGModule.direct_sum(mods, self.ngens, self.p)


def semisimplify(E: KGModule, seed: int = 0) -> SSDecomp:
    classes: list[list] = []
    for S in composition_factors(E, seed):
        for c in classes:
            if irreducibles_isomorphic(c[0], S):
                c[1] += 1
                break
        else:
            classes.append([S, 1])
    fp = tuple(sorted((c[0].dim, c[1], _fingerprint(c[0])) for c in classes))
    return SSDecomp(tuple((c[0], c[1]) for c in classes), fp, _ngens(E), E.p)


def ss_isomorphic(a: SSDecomp, b: SSDecomp) -> bool:
    if a.ngens != b.ngens:
        raise GeneratorCountMismatch(f"{a.ngens} vs {b.ngens} generators")
    if a.p != b.p or a.fingerprint != b.fingerprint or len(a.factors) != len(b.factors):
        return False
    unused = list(b.factors)
    for S, m in a.factors:
        hit = next((i for i, (T, n) in enumerate(unused) if n == m and irreducibles_isomorphic(S, T)), None)
        if hit is None:
            return False
        unused.pop(hit)
    return True


def brauer_nesbitt_check(rep: GroupRepK, L: Lattice, M: Lattice, seed: int = 0) -> bool:
    """Whether (L/pL)^ss and (M/pM)^ss agree; the theorem says always."""
    a = semisimplify(reduce_mod_pi(rep, L), seed)
    b = semisimplify(reduce_mod_pi(rep, M), seed + 1)
    return ss_isomorphic(a, b)
