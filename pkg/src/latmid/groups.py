"""Small finite groups as integer matrix representations, with invariant forms.

Each fixture returns generator matrices over Z, the group order (used as the
word bound for spinning) and, where one is known, an invariant form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import qmat


@dataclass(frozen=True)
class GroupFixture:
    name: str
    generators: tuple
    order: int
    forms: dict = field(default_factory=dict)  # label -> (gram, epsilon)


def _perm(images):
    """Permutation matrix sending e_i to e_{images[i]}."""
    n = len(images)
    M = [[0] * n for _ in range(n)]
    for i, j in enumerate(images):
        M[j][i] = 1
    return M


def trivial(n: int = 2) -> GroupFixture:
    return GroupFixture("1", (qmat.identity(n),), 1, {"identity": (qmat.identity(n), 1)})


def cyclic2() -> GroupFixture:
    return GroupFixture("C2", (_perm([1, 0]),), 2, {"identity": (qmat.identity(2), 1)})


def cyclic3() -> GroupFixture:
    return GroupFixture("C3", (_perm([1, 2, 0]),), 3, {"identity": (qmat.identity(3), 1)})


def cyclic3_rotation() -> GroupFixture:
    g = [[0, -1], [1, -1]]
    return GroupFixture("C3rot", (g,), 3, {"a2": ([[2, -1], [-1, 2]], 1)})


def symmetric3() -> GroupFixture:
    return GroupFixture("S3", (_perm([1, 2, 0]), _perm([1, 0, 2])), 6, {"identity": (qmat.identity(3), 1)})


def symmetric3_standard() -> GroupFixture:
    """S3 on the A2 root lattice; the invariant form has determinant 3."""
    g = [[0, -1], [1, -1]]
    s = [[0, 1], [1, 0]]
    return GroupFixture("S3std", (g, s), 6, {"a2": ([[2, -1], [-1, 2]], 1)})


def dihedral4() -> GroupFixture:
    r = [[0, -1], [1, 0]]
    s = [[1, 0], [0, -1]]
    return GroupFixture("D4", (r, s), 8, {"identity": (qmat.identity(2), 1)})


_LI = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
_LJ = [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]]
# right multiplication by i commutes with left multiplications and is skew
_RI = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]


def quaternion8() -> GroupFixture:
    """Q8 acting on the quaternions Q^4 by left multiplication."""
    alt = [[-x for x in row] for row in qmat.transpose(_RI)]  # = R_i, written as a Gram matrix
    return GroupFixture(
        "Q8",
        (_LI, _LJ),
        8,
        {"norm": (qmat.identity(4), 1), "symplectic": (alt, -1)},
    )


def all_fixtures() -> list[GroupFixture]:
    return [cyclic2(), cyclic3(), cyclic3_rotation(), symmetric3(), symmetric3_standard(), dihedral4(), quaternion8()]


def by_name(name: str) -> GroupFixture:
    for f in all_fixtures() + [trivial()]:
        if f.name == name:
            return f
    raise KeyError(name)
