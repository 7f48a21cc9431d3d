"""Exact arithmetic in Q with the p-adic valuation.

K is Q, R is Z localized at p, the uniformizer is p itself and the residue
field is F_p.  Scalars are ``gmpy2.mpq`` values; anything ``mpq`` accepts
(int, Fraction, "num/den" strings) is converted on entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "INF",
    "ValConfig",
    "NegativeValuation",
    "WrongCharacteristic",
    "to_q",
    "valuation",
    "unit_part",
    "residue",
    "int_middles",
    "mod_p_power",
    "is_prime",
]


@total_ordering
class _Infinity:
    """Valuation of zero.  Compares above every integer; not an integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("latmid.INF")

    def __repr__(self):
        return "INF"

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()


class NegativeValuation(ValueError):
    """Raised when a residue is requested for an element outside R."""


class WrongCharacteristic(ValueError):
    """Raised when p = 2 reaches an operation that needs 2 to be a unit."""


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class ValConfig:
    """The prime p, acting as uniformizer of R and characteristic of k."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")

    def require_odd(self, what: str = "quadratic forms") -> None:
        if self.p == 2:
            raise WrongCharacteristic(f"{what} need char(k) != 2, got p = 2")


def to_q(x) -> mpq:
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def valuation(x, p: int):
    """Exponent of p in x; negative when p divides the denominator, INF at 0."""
    x = to_q(x)
    if x == 0:
        return INF
    num, vn = gmpy2.remove(x.numerator, p)
    den, vd = gmpy2.remove(x.denominator, p)
    return int(vn) - int(vd)


def unit_part(x, p: int) -> tuple[int, mpq]:
    """Split nonzero x as p**v * u with v(u) = 0; returns (v, u)."""
    x = to_q(x)
    if x == 0:
        raise ZeroDivisionError("unit part of 0")
    v = valuation(x, p)
    if v >= 0:
        return v, x / mpz(p) ** v
    return v, x * mpz(p) ** (-v)


def residue(x, p: int) -> int:
    """Image of x in F_p, as an int in [0, p)."""
    x = to_q(x)
    if x == 0:
        return 0
    if valuation(x, p) < 0:
        raise NegativeValuation(f"{x} has negative {p}-adic valuation")
    num = int(x.numerator % p)
    den = int(x.denominator % p)
    return num * pow(den, -1, p) % p


def mod_p_power(x, p: int, d: int) -> mpq:
    """Canonical representative of x modulo p**d * R.

    The representatives are the elements of Z[1/p] lying in [0, p**d).
    """
    x = to_q(x)
    if x == 0:
        return mpq(0)
    v, u = unit_part(x, p)
    if v >= d:
        return mpq(0)
    modulus = mpz(p) ** (d - v)
    r = u.numerator * gmpy2.invert(u.denominator, modulus) % modulus
    return mpq(r) * mpq(p) ** v


def int_middles(x: int, y: int) -> tuple[int, int]:
    """Lower and upper middle of two integers: floor and ceil of (x+y)/2."""
    s = x + y
    return s // 2, -((-s) // 2)
