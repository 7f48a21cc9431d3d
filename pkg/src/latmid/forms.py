"""Bilinear forms on Q^n, dual lattices and almost self-dual lattices.

Also the residue forms b1 on L/pL' and b2 on L'/L attached to an almost
self-dual lattice L.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import gfp, qmat
from .dvr import residue, valuation
from .lattices import (
    Lattice,
    SplittingCert,
    compatible_splitting,
    lattice_sum,
    middles,
    scale_by_pi,
)

__all__ = [
    "DegenerateForm",
    "NotAlmostSelfDual",
    "DegenerateResidual",
    "GramForm",
    "FpForm",
    "ResidualForms",
    "gram_matrix",
    "dual_lattice",
    "is_almost_self_dual",
    "asd_via_middle",
    "asd_thompson",
    "thompson_rescale",
    "residual_forms",
    "inject_fault",
]


class DegenerateForm(ValueError):
    pass


class NotAlmostSelfDual(ValueError):
    pass


class DegenerateResidual(ArithmeticError):
    """A residue form came out degenerate; signals a bad basis choice."""


_FAULTS: set[str] = set()


@contextlib.contextmanager
def inject_fault(name: str = "dual_sign"):
    """Test-only: deliberately break dual_lattice to exercise the checkers."""
    _FAULTS.add(name)
    try:
        yield
    finally:
        _FAULTS.discard(name)


class GramForm:
    """Nondegenerate ε-symmetric form B(x, y) = x^T G y on Q^n."""

    __slots__ = ("matrix", "epsilon", "dim")

    def __init__(self, matrix, epsilon: int = 1):
        G = qmat.as_matrix(matrix)
        n = len(G)
        if epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        for i in range(n):
            if len(G[i]) != n:
                raise ValueError("Gram matrix must be square")
            for j in range(n):
                if G[j][i] != epsilon * G[i][j]:
                    raise ValueError(f"matrix is not {'symmetric' if epsilon == 1 else 'alternating'}")
        if n and qmat.det(G) == 0:
            raise DegenerateForm("form is degenerate")
        self.matrix = G
        self.epsilon = epsilon
        self.dim = n

    def __call__(self, x, y):
        return sum((a * g * b for a, row in zip(x, self.matrix) for g, b in zip(row, y) if a and g and b), mpq(0))

    def __repr__(self):
        return f"GramForm(eps={self.epsilon:+d}, matrix={[[str(x) for x in r] for r in self.matrix]})"


@dataclass(frozen=True, eq=False)
class FpForm:
    """ε-symmetric bilinear form over F_p given by its Gram matrix."""

    matrix: np.ndarray
    epsilon: int
    p: int

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.int64)
        M = M % self.p if M.size else np.zeros((0, 0), np.int64)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_eps_symmetric(self) -> bool:
        M, p = self.matrix, self.p
        if not np.array_equal(M.T % p, (self.epsilon * M) % p):
            return False
        return self.epsilon == 1 or not np.any(np.diag(M) % p)

    def is_nondegenerate(self) -> bool:
        return gfp.rank(self.matrix, self.p) == self.dim if self.dim else True

    def __eq__(self, other):
        return (
            isinstance(other, FpForm)
            and self.p == other.p
            and self.epsilon == other.epsilon
            and np.array_equal(self.matrix, other.matrix)
        )


def gram_matrix(L: Lattice, B: GramForm):
    P = L.basis
    return qmat.matmul(qmat.matmul(qmat.transpose(P), B.matrix), P)


def _check_dims(L: Lattice, B: GramForm):
    if L.dim != B.dim:
        raise ValueError(f"lattice dim {L.dim} != form dim {B.dim}")


def dual_lattice(L: Lattice, B: GramForm) -> Lattice:
    """L' = {x : B(x, y) ∈ R for all y ∈ L}, with basis P G^-T."""
    _check_dims(L, B)
    if L.dim == 0:
        return L
    G = gram_matrix(L, B)
    if "dual_sign" in _FAULTS and L.dim >= 2:
        G[0][-1] = -G[0][-1]
    try:
        Ginv = qmat.inverse(G)
    except ZeroDivisionError:
        raise DegenerateForm("Gram matrix of the lattice is singular") from None
    return Lattice(qmat.matmul(L.basis, qmat.transpose(Ginv)), L.p)


def _integral(A, p) -> bool:
    return all(x == 0 or valuation(x, p) >= 0 for row in A for x in row)


def is_almost_self_dual(L: Lattice, B: GramForm) -> bool:
    """pL' ⊆ L ⊆ L', i.e. both G and p G^-1 have entries in R."""
    _check_dims(L, B)
    if L.dim == 0:
        return True
    G = gram_matrix(L, B)
    if not _integral(G, L.p):
        return False
    try:
        Ginv = qmat.inverse(G)
    except ZeroDivisionError:
        raise DegenerateForm("Gram matrix of the lattice is singular") from None
    return _integral(qmat.scale(Ginv, L.p), L.p)


def asd_via_middle(L: Lattice, B: GramForm) -> Lattice:
    """m_-(L, L'), which is almost self-dual with dual m_+(L, L')."""
    return middles(L, dual_lattice(L, B))[0]


def thompson_rescale(L0: Lattice, B: GramForm) -> Lattice:
    """p^t L0 for the least t making the Gram matrix integral (so L ⊆ L')."""
    G = gram_matrix(L0, B)
    vals = [valuation(x, L0.p) for row in G for x in row if x]
    m0 = min(vals)
    t = -(m0 // 2)  # ceil(-m0 / 2)
    return scale_by_pi(L0, t)


def _dual_gap(L: Lattice, Ld: Lattice) -> int:
    """Least m >= 0 with p^m L' ⊆ L, for L ⊆ L'."""
    cert = compatible_splitting(Ld, L)
    return max(cert.exponentsM, default=0)


def asd_thompson(L0: Lattice, B: GramForm, history: list | None = None) -> Lattice:
    """Almost self-dual lattice by repeated enlargement L <- p^{m-1} L' + L.

    L0 is first rescaled so that L ⊆ L'.  ``history``, if given, receives the
    successive values of m.
    """
    L = thompson_rescale(L0, B)
    while True:
        Ld = dual_lattice(L, B)
        m = _dual_gap(L, Ld)
        if history is not None:
            history.append(m)
        if m <= 1:
            return L
        L = lattice_sum(scale_by_pi(Ld, m - 1), L)


@dataclass(frozen=True, eq=False)
class ResidualForms:
    """b1 on L/pL' and b2 on L'/L, read off in an adapted basis.

    ``basis_witness`` is a splitting of (L, L'): L = ⊕ R x_i and
    L' = ⊕ p^{c_i} R x_i with c_i ∈ {0, -1}.  b1 lives on the x_i with c_i = 0,
    b2 on the p^-1 x_i with c_i = -1.
    """

    b1: FpForm
    b2: FpForm
    basis_witness: SplittingCert
    idx1: tuple = field(default=())
    idx2: tuple = field(default=())

    def dual_basis(self):
        """Columns f_i spanning L' (f_i = p^{c_i} x_i)."""
        cert = self.basis_witness
        X = [list(r) for r in cert.basis]
        n = len(X)
        return [[X[i][j] * mpq(cert.p) ** cert.exponentsM[j] for j in range(n)] for i in range(n)]


def residual_forms(L: Lattice, B: GramForm) -> ResidualForms:
    if not is_almost_self_dual(L, B):
        raise NotAlmostSelfDual("residue forms need pL' ⊆ L ⊆ L'")
    p = L.p
    Ld = dual_lattice(L, B)
    cert = compatible_splitting(L, Ld)
    if any(c not in (0, -1) for c in cert.exponentsM):
        raise NotAlmostSelfDual(f"unexpected exponents {cert.exponentsM}")
    X = [list(r) for r in cert.basis]
    G = qmat.matmul(qmat.matmul(qmat.transpose(X), B.matrix), X)
    # L ⊆ L' forces every B(x_i, x_j) into R
    assert _integral(G, p), "Gram matrix of an almost self-dual lattice must be integral"
    idx1 = tuple(i for i, c in enumerate(cert.exponentsM) if c == 0)
    idx2 = tuple(i for i, c in enumerate(cert.exponentsM) if c == -1)
    b1 = FpForm(np.array([[residue(G[i][j], p) for j in idx1] for i in idx1], dtype=np.int64).reshape(len(idx1), len(idx1)), B.epsilon, p)
    b2 = FpForm(np.array([[residue(G[i][j] / p, p) for j in idx2] for i in idx2], dtype=np.int64).reshape(len(idx2), len(idx2)), B.epsilon, p)
    for name, b in (("b1", b1), ("b2", b2)):
        if not b.is_nondegenerate():
            raise DegenerateResidual(f"{name} is degenerate over F_{p}")
        if not b.is_eps_symmetric():
            raise DegenerateResidual(f"{name} is not ε-symmetric over F_{p}")
    return ResidualForms(b1, b2, cert, idx1, idx2)
