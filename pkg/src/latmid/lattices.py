"""Full-rank lattices over R = Z_(p) inside Q^n, and their lower/upper middles.

A lattice is stored through a canonical basis: the column Hermite normal form
over R.  That basis is lower triangular with diagonal entries ``p**d_i`` and
below-diagonal entries reduced to ``Z[1/p] ∩ [0, p**d_i)``, so two lattices are
equal exactly when their canonical bases coincide.  Equality and inclusion are
nevertheless decided by the GL_n(R) criterion (``M^-1 L`` integral).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from gmpy2 import mpq

from . import qmat
from .dvr import mod_p_power, to_q, valuation

__all__ = [
    "DimensionMismatch",
    "Lattice",
    "SplittingCert",
    "TorsionModule",
    "lattice_sum",
    "lattice_intersection",
    "intersection_via_duality",
    "standard_dual",
    "twist",
    "scale_by_pi",
    "compatible_splitting",
    "truncation_bound",
    "middles",
    "middle_lower",
    "middle_upper",
    "quotient_type",
    "torsion_middles",
]


class DimensionMismatch(ValueError):
    pass


def _pw(p, e):
    return mpq(p) ** e


def _hnf(cols, n, p, track=False):
    """Column Hermite normal form over R of the generators ``cols``.

    ``cols`` is a list of column vectors of length n spanning Q^n.  Returns the
    n canonical columns and, when ``track`` is set, the unimodular transform T
    (as a list of columns) with ``[cols] @ T = [canonical | 0]``.
    """
    cols = [list(c) for c in cols]
    m = len(cols)
    T = [[mpq(int(i == j)) for i in range(m)] for j in range(m)] if track else None
    exps = []
    for i in range(n):
        best, bv = None, None
        for j in range(i, m):
            a = cols[j][i]
            if a:
                v = valuation(a, p)
                if best is None or v < bv:
                    best, bv = j, v
        if best is None:
            raise ValueError("generators do not span a full-rank lattice")
        if best != i:
            cols[i], cols[best] = cols[best], cols[i]
            if track:
                T[i], T[best] = T[best], T[i]
        piv = _pw(p, bv)
        c = piv / cols[i][i]
        if c != 1:
            cols[i] = [x * c for x in cols[i]]
            if track:
                T[i] = [x * c for x in T[i]]
        ci = cols[i]
        for j in range(i + 1, m):
            a = cols[j][i]
            if a:
                f = a / piv
                cols[j] = [x - f * y if y else x for x, y in zip(cols[j], ci)]
                if track:
                    T[j] = [x - f * y if y else x for x, y in zip(T[j], T[i])]
        exps.append(bv)
    for i in range(n):
        d = exps[i]
        ci = cols[i]
        for j in range(i):
            a = cols[j][i]
            if not a:
                continue
            r = mod_p_power(a, p, d)
            if r != a:
                f = (a - r) / _pw(p, d)
                cols[j] = [x - f * y if y else x for x, y in zip(cols[j], ci)]
                if track:
                    T[j] = [x - f * y if y else x for x, y in zip(T[j], T[i])]
    return cols[:n], T


class Lattice:
    """A free R-submodule of Q^n of rank n.

    ``basis`` is an n x n invertible matrix (row-major) whose columns span the
    lattice.  The stored basis is the canonical one.
    """

    __slots__ = ("p", "dim", "_cols", "_inv")

    def __init__(self, basis, p: int):
        rows = qmat.as_matrix(basis)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("basis must be square")
        if n and qmat.det(rows) == 0:
            raise ValueError("basis is not invertible")
        self.p = p
        self.dim = n
        cols, _ = _hnf(qmat.transpose(rows), n, p)
        self._cols = tuple(tuple(c) for c in cols)
        self._inv = None

    @classmethod
    def from_generators(cls, cols, n: int, p: int) -> "Lattice":
        """Lattice spanned by a list of column vectors (need not be a basis)."""
        obj = cls.__new__(cls)
        obj.p, obj.dim, obj._inv = p, n, None
        canon, _ = _hnf([[to_q(x) for x in c] for c in cols], n, p)
        obj._cols = tuple(tuple(c) for c in canon)
        return obj

    @classmethod
    def standard(cls, n: int, p: int) -> "Lattice":
        return cls(qmat.identity(n), p)

    @property
    def basis(self):
        return [list(r) for r in zip(*self._cols)] if self.dim else []

    @property
    def columns(self):
        return [list(c) for c in self._cols]

    def diagonal_exponents(self) -> list[int]:
        return [valuation(self._cols[i][i], self.p) for i in range(self.dim)]

    def inverse_basis(self):
        if self._inv is None:
            self._inv = qmat.inverse(self.basis) if self.dim else []
        return self._inv

    def coordinates(self, vectors):
        """Coordinates, in the canonical basis, of the given column vectors."""
        return qmat.matmul(self.inverse_basis(), vectors)

    def contains(self, other: "Lattice") -> bool:
        """True iff other ⊆ self."""
        _check(self, other)
        if not self.dim:
            return True
        C = self.coordinates(other.basis)
        return all(x == 0 or valuation(x, self.p) >= 0 for row in C for x in row)

    def contains_vectors(self, vectors) -> bool:
        if not self.dim:
            return True
        C = self.coordinates(vectors)
        return all(x == 0 or valuation(x, self.p) >= 0 for row in C for x in row)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains(self)

    def __ge__(self, other: "Lattice") -> bool:
        return self.contains(other)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        if self.p != other.p or self.dim != other.dim:
            return False
        return self.contains(other) and other.contains(self)

    def __hash__(self):
        return hash((self.p, self._cols))

    def canonical_key(self):
        return (self.p, self._cols)

    def transform(self, A) -> "Lattice":
        """Image of the lattice under the invertible linear map A."""
        return Lattice(qmat.matmul(A, self.basis), self.p)

    def scaled(self) -> tuple[list[list[int]], int]:
        """(Integer matrix N, s) with canonical basis = N / p**s."""
        s = 0
        for c in self._cols:
            for x in c:
                if x:
                    s = max(s, -valuation(x, self.p))
        f = _pw(self.p, s)
        return [[int(x * f) for x in row] for row in self.basis], s

    def __repr__(self):
        return f"Lattice(p={self.p}, basis={[[str(x) for x in r] for r in self.basis]})"


def _check(L: Lattice, M: Lattice):
    if L.dim != M.dim:
        raise DimensionMismatch(f"dimensions {L.dim} and {M.dim} differ")
    if L.p != M.p:
        raise ValueError(f"lattices over different primes {L.p}, {M.p}")


def lattice_sum(L: Lattice, M: Lattice) -> Lattice:
    _check(L, M)
    return Lattice.from_generators(L.columns + M.columns, L.dim, L.p)


def lattice_intersection(L: Lattice, M: Lattice) -> Lattice:
    """L ∩ M from the R-kernel of (x, y) ↦ Px - Qy."""
    _check(L, M)
    n, p = L.dim, L.p
    if n == 0:
        return L
    Q = M.columns
    _, T = _hnf(L.columns + [[-x for x in c] for c in Q], n, p, track=True)
    P = L.basis
    kernel = [c[:n] for c in T[n:]]
    return Lattice.from_generators(qmat.transpose(qmat.matmul(P, qmat.transpose(kernel))), n, p)


def standard_dual(L: Lattice) -> Lattice:
    """Dual under the standard inner product: basis P^-T."""
    if L.dim == 0:
        return L
    return Lattice(qmat.transpose(L.inverse_basis()), L.p)


def intersection_via_duality(L: Lattice, M: Lattice) -> Lattice:
    """L ∩ M = (L* + M*)*; an independent route used to check the kernel one."""
    _check(L, M)
    return standard_dual(lattice_sum(standard_dual(L), standard_dual(M)))


def twist(L: Lattice, a: int) -> Lattice:
    """L(a) = p^-a L."""
    return Lattice(qmat.scale(L.basis, _pw(L.p, -a)), L.p)


def scale_by_pi(L: Lattice, k: int = 1) -> Lattice:
    """p^k L."""
    return twist(L, -k)


@dataclass(frozen=True)
class SplittingCert:
    """Basis (x_i) with L = ⊕ p^{exponentsL_i} R x_i and M = ⊕ p^{exponentsM_i} R x_i."""

    basis: tuple
    exponentsL: tuple
    exponentsM: tuple
    p: int

    def rebuild(self):
        cols = qmat.transpose([list(r) for r in self.basis]) if self.basis else []
        n = len(cols)

        def lat(exps):
            if n == 0:
                return Lattice([], self.p)
            return Lattice(qmat.transpose([[x * _pw(self.p, e) for x in c] for c, e in zip(cols, exps)]), self.p)

        return lat(self.exponentsL), lat(self.exponentsM)


def compatible_splitting(L: Lattice, M: Lattice) -> SplittingCert:
    """A basis of V adapted to both L and M, via Smith normal form over R.

    With C = P^-1 Q (M's basis in L-coordinates), row and column operations
    over R bring C to diag(u_i p^e_i).  If F records the column operations then
    x = Q F D^-1 is an R-basis of L and M = ⊕ p^e_i R x_i.  Pivots are chosen by
    minimal valuation, ties broken by lowest column and then lowest row, so the
    exponents come out in increasing order.
    """
    _check(L, M)
    n, p = L.dim, L.p
    if n == 0:
        return SplittingCert((), (), (), p)
    C = qmat.matmul(L.inverse_basis(), M.basis)
    F = qmat.identity(n)
    D = []
    for k in range(n):
        best = None
        for j in range(k, n):
            for i in range(k, n):
                a = C[i][j]
                if a:
                    v = valuation(a, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        v, bi, bj = best
        if bi != k:
            C[k], C[bi] = C[bi], C[k]
        if bj != k:
            for row in C:
                row[k], row[bj] = row[bj], row[k]
            for row in F:
                row[k], row[bj] = row[bj], row[k]
        piv = C[k][k]
        for i in range(k + 1, n):
            a = C[i][k]
            if a:
                f = a / piv
                C[i] = [x - f * y for x, y in zip(C[i], C[k])]
        for j in range(k + 1, n):
            a = C[k][j]
            if a:
                f = a / piv
                C[k][j] = mpq(0)
                for row in F:
                    if row[k]:
                        row[j] -= f * row[k]
        D.append((v, piv))
    QF = qmat.matmul(M.basis, F)
    X = [[QF[i][j] / D[j][1] for j in range(n)] for i in range(n)]
    return SplittingCert(
        basis=tuple(tuple(r) for r in X),
        exponentsL=tuple(0 for _ in range(n)),
        exponentsM=tuple(v for v, _ in D),
        p=p,
    )


def truncation_bound(cert: SplittingCert) -> int:
    """Least a >= 0 with p^a L ⊆ M and p^a M ⊆ L."""
    return max([0] + [abs(a - b) for a, b in zip(cert.exponentsL, cert.exponentsM)])


def _middles_direct(L: Lattice, M: Lattice, n_max: int):
    lower = None
    upper = None
    for n in range(-n_max, n_max + 1):
        Ln, Mn = scale_by_pi(L, n), scale_by_pi(M, -n)
        cap = lattice_intersection(Ln, Mn)
        cup = lattice_sum(Ln, Mn)
        lower = cap if lower is None else lattice_sum(lower, cap)
        upper = cup if upper is None else lattice_intersection(upper, cup)
    return lower, upper


def _middles_diagonal(a, b, n_max: int):
    """Exponents of the middles of ⊕ p^a_i R and ⊕ p^b_i R.

    For diagonal lattices ∩ and + act on exponents as max and min, so the
    defining sum and intersection over n become a min and a max.
    """
    ns = range(-n_max, n_max + 1)
    lower = [min(max(x + n, y - n) for n in ns) for x, y in zip(a, b)]
    upper = [max(min(x + n, y - n) for n in ns) for x, y in zip(a, b)]
    return lower, upper


def middles(L: Lattice, M: Lattice, n_max: int | None = None, adapted: bool = True):
    """(m_-(L, M), m_+(L, M)).

    m_- is the sum and m_+ the intersection, over |n| <= n_max, of
    p^n L ∩ p^-n M and p^n L + p^-n M.  By default n_max = ceil(a/2) with a the
    truncation bound.  With ``adapted`` the sums and intersections are formed in
    the coordinates of a compatible splitting, where every term is diagonal,
    and the result is mapped back.
    """
    _check(L, M)
    if L.dim == 0:
        return L, L
    cert = compatible_splitting(L, M)
    if n_max is None:
        n_max = -(-truncation_bound(cert) // 2)
    if not adapted:
        return _middles_direct(L, M, n_max)
    p = L.p
    lo, up = _middles_diagonal(cert.exponentsL, cert.exponentsM, n_max)
    X = [list(r) for r in cert.basis]
    return tuple(Lattice(qmat.matmul(X, qmat.diag([_pw(p, e) for e in es])), p) for es in (lo, up))


def middle_lower(L: Lattice, M: Lattice, n_max: int | None = None) -> Lattice:
    return middles(L, M, n_max)[0]


def middle_upper(L: Lattice, M: Lattice, n_max: int | None = None) -> Lattice:
    return middles(L, M, n_max)[1]


@dataclass(frozen=True)
class TorsionModule:
    """Finite torsion R-module ⊕ R/p^{e_i}, recorded by its exponents."""

    exponents: tuple

    def __post_init__(self):
        if any(e < 1 for e in self.exponents):
            raise ValueError("torsion exponents must be >= 1")
        object.__setattr__(self, "exponents", tuple(sorted(self.exponents, reverse=True)))

    @classmethod
    def of(cls, exps) -> "TorsionModule":
        """Build from exponents, silently dropping zero summands."""
        return cls(tuple(e for e in exps if e))

    @property
    def exponent(self) -> int:
        return max(self.exponents, default=0)

    def length(self) -> int:
        return sum(self.exponents)


def quotient_type(big: Lattice, small: Lattice) -> TorsionModule:
    """Isomorphism type of big/small, for small ⊆ big."""
    if not big.contains(small):
        raise ValueError("quotient needs small ⊆ big")
    cert = compatible_splitting(big, small)
    return TorsionModule.of(e - f for e, f in zip(cert.exponentsM, cert.exponentsL))


def torsion_middles(T: TorsionModule) -> tuple[TorsionModule, TorsionModule]:
    """(m_-(T), m_+(T)) summand by summand.

    On R/p^m the lower middle is p^ceil(m/2) T ≅ R/p^floor(m/2) and the upper
    middle is p^floor(m/2) T ≅ R/p^ceil(m/2).
    """
    lower = TorsionModule.of(m // 2 for m in T.exponents)
    upper = TorsionModule.of(m - m // 2 for m in T.exponents)
    return lower, upper


def elementary_divisor_multiset(T: TorsionModule) -> Counter:
    return Counter(T.exponents)
