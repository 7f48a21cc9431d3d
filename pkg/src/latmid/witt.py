"""Witt classes over F_p, Springer residues and orthogonal lattice splittings.

Over F_p (p odd) a Witt class is pinned down by the rank parity and the signed
discriminant (-1)^{r(r-1)/2} det, taken up to squares.  ``WittClass`` stores
exactly that pair, with the discriminant represented by 1 or by the least
non-square mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


from . import gfp, qmat
from .dvr import WrongCharacteristic, residue, to_q, valuation
from .forms import FpForm, GramForm, residual_forms
from .lattices import Lattice

__all__ = [
    "WrongEpsilon",
    "EvenResidueChar",
    "DiagForm",
    "WittClass",
    "nonsquare",
    "square_class",
    "witt_class_k",
    "witt_class_form",
    "diagonalize_compatible",
    "springer_residues",
    "springer_and_residual_classes",
    "verify_springer_vs_residuals",
]


class WrongEpsilon(ValueError):
    pass


class EvenResidueChar(WrongCharacteristic):
    pass


def _need_odd(p):
    if p == 2:
        raise EvenResidueChar("quadratic forms over F_2 are not handled")


@lru_cache(maxsize=None)
def nonsquare(p: int) -> int:
    _need_odd(p)
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


def square_class(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no square class")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else nonsquare(p)


@dataclass(frozen=True)
class DiagForm:
    """Diagonal quadratic form <a_1, ..., a_r>.

    Entries are rationals (a form over Q) or ints mod p (a form over F_p),
    depending on how the form is used.
    """

    entries: tuple
    p: int

    def __post_init__(self):
        if any(e == 0 for e in self.entries):
            raise ValueError("diagonal entries must be nonzero")

    def __add__(self, other: "DiagForm") -> "DiagForm":
        return DiagForm(self.entries + other.entries, self.p)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class WittClass:
    p: int
    rank_parity: int
    disc: int

    @classmethod
    def zero(cls, p: int) -> "WittClass":
        return cls(p, 0, 1)

    @property
    def is_zero(self) -> bool:
        return self.rank_parity == 0 and self.disc == 1

    def __add__(self, other: "WittClass") -> "WittClass":
        if other.p != self.p:
            raise ValueError("Witt classes over different fields")
        sign = -1 if (self.rank_parity and other.rank_parity) else 1
        d = square_class(sign * self.disc * other.disc, self.p)
        return WittClass(self.p, (self.rank_parity + other.rank_parity) % 2, d)

    def scaled(self, u: int) -> "WittClass":
        """Class of the form multiplied by the unit u."""
        d = self.disc * (u if self.rank_parity else 1)
        return WittClass(self.p, self.rank_parity, square_class(d, self.p))

    def as_dict(self) -> dict:
        return {"zero": self.is_zero, "rank_parity": self.rank_parity, "disc": self.disc}

    def __str__(self):
        if self.is_zero:
            return "0"
        return f"(rank≡{self.rank_parity}, disc={self.disc})"


def _signed(r: int, d: int, p: int) -> WittClass:
    sign = -1 if (r * (r - 1) // 2) % 2 else 1
    return WittClass(p, r % 2, square_class(sign * d, p))


def witt_class_k(d: DiagForm) -> WittClass:
    """Class in W(F_p) of a diagonal form with nonzero entries mod p."""
    p = d.p
    _need_odd(p)
    prod = 1
    for a in d.entries:
        a = int(a) % p
        if a == 0:
            raise ValueError("entry vanishes mod p")
        prod = prod * a % p
    return _signed(len(d.entries), prod, p)


def witt_class_form(b: FpForm) -> WittClass:
    """Class in W(F_p) of a nondegenerate symmetric form given by a Gram matrix."""
    _need_odd(b.p)
    if b.epsilon != 1:
        raise WrongEpsilon("Witt classes are for symmetric forms")
    if b.dim == 0:
        return WittClass.zero(b.p)
    dt = gfp.det(b.matrix, b.p)
    if dt == 0:
        raise ValueError("form is degenerate")
    return _signed(b.dim, dt, b.p)


def diagonalize_compatible(B: GramForm, M: Lattice):
    """Orthogonal R-basis (x_i) of M and the values q(x_i).

    Each step takes x ∈ M with v(q(x)) minimal: a basis vector whose Gram
    entry attains the minimal valuation, or the sum of two basis vectors
    when only an off-diagonal entry does.  The rest of the basis is projected
    onto Ker(y ↦ B(x, y)/B(x, x)), which keeps it an R-basis of M ∩ Ker.
    Returns (DiagForm over Q, basis matrix whose columns are the x_i).
    """
    if B.epsilon != 1:
        raise WrongEpsilon("diagonalization needs a symmetric form")
    p = M.p
    _need_odd(p)
    cols = M.columns
    xs, vals = [], []
    while cols:
        k = len(cols)
        G = [[B(cols[i], cols[j]) for j in range(k)] for i in range(k)]
        m0 = min(valuation(x, p) for row in G for x in row if x)
        pick = next((i for i in range(k) if G[i][i] and valuation(G[i][i], p) == m0), None)
        if pick is None:
            i, j = next(
                (i, j) for i in range(k) for j in range(i + 1, k) if G[i][j] and valuation(G[i][j], p) == m0
            )
            cols[i] = [a + b for a, b in zip(cols[i], cols[j])]
            pick = i
        x = cols[pick]
        qx = B(x, x)
        rest = []
        for t, c in enumerate(cols):
            if t == pick:
                continue
            lam = B(x, c) / qx
            rest.append([a - lam * b for a, b in zip(c, x)] if lam else c)
        xs.append(x)
        vals.append(qx)
        cols = rest
    return DiagForm(tuple(vals), p), qmat.transpose(xs) if xs else []


def springer_residues(d: DiagForm, uniformizer=None) -> tuple[WittClass, WittClass]:
    """(∂1, ∂2) of a diagonal form over Q.

    An entry w·π^e with w a unit feeds <w mod p> into ∂1 when e is even and
    into ∂2 when e is odd.  ``uniformizer`` defaults to p.
    """
    p = d.p
    _need_odd(p)
    pi = to_q(p if uniformizer is None else uniformizer)
    if valuation(pi, p) != 1:
        raise ValueError("uniformizer must have valuation 1")
    first, second = [], []
    for a in d.entries:
        a = to_q(a)
        e = valuation(a, p)
        w = a / pi ** e
        (first if e % 2 == 0 else second).append(residue(w, p))
    return witt_class_k(DiagForm(tuple(first), p)), witt_class_k(DiagForm(tuple(second), p))


def springer_and_residual_classes(L: Lattice, B: GramForm):
    """((∂1 q, ∂2 q), ([q1], [q2])) for an almost self-dual L."""
    diag, _ = diagonalize_compatible(B, L)
    res = springer_residues(diag)
    rf = residual_forms(L, B)
    return res, (witt_class_form(rf.b1), witt_class_form(rf.b2))


def verify_springer_vs_residuals(L: Lattice, B: GramForm) -> bool:
    (d1, d2), (w1, w2) = springer_and_residual_classes(L, B)
    return d1 == w1 and d2 == w2
