"""Compatible forms on the semisimplification of an orthogonal/symplectic module.

Given E with a G-invariant nondegenerate ε-symmetric form b, pick a maximal
totally isotropic submodule S.  Then X = S_perp/S is semisimple with a
nondegenerate induced form, and E^ss ≅ X ⊕ S^ss ⊕ (S^ss)^*, which carries the
orthogonal sum of the form on X and the hyperbolic pairing of S^ss with its
dual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gfp
from .dvr import WrongCharacteristic
from .forms import FpForm
from .modrep import KGModule, hom_space, semisimplify

__all__ = [
    "IncompatibleForm",
    "FormedKGModule",
    "IsotropicTower",
    "is_compatible",
    "max_isotropic_tower",
    "find_isotropic_simple",
    "ss_with_form",
    "hyperbolic",
]


class IncompatibleForm(ValueError):
    pass


def is_compatible(module: KGModule, form: np.ndarray) -> bool:
    p = module.p
    return all(np.array_equal(g.T @ form @ g % p, form % p) for g in module.generators)


@dataclass(frozen=True, eq=False)
class FormedKGModule:
    module: KGModule
    form: FpForm

    def __post_init__(self):
        m, b = self.module, self.form
        if m.p != b.p or m.dim != b.dim:
            raise IncompatibleForm("module and form disagree on p or dimension")
        if b.epsilon == 1 and b.p == 2:
            raise WrongCharacteristic("symmetric forms need char(k) != 2")
        if not b.is_eps_symmetric():
            raise IncompatibleForm("form is not ε-symmetric")
        if not b.is_nondegenerate():
            raise IncompatibleForm("form is degenerate")
        if not is_compatible(m, b.matrix):
            raise IncompatibleForm("form is not invariant under the generators")

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def dim(self) -> int:
        return self.module.dim


@dataclass(frozen=True, eq=False)
class IsotropicTower:
    """S ⊆ S_perp ⊆ E with S maximal totally isotropic.

    ``M`` spans a complement of S in S_perp; ``X`` is S_perp/S written in the
    basis M and ``X_form`` the induced form there.  ``S_module`` and ``top``
    are S and E/S_perp with their actions.
    """

    S: np.ndarray
    S_perp: np.ndarray
    M: np.ndarray
    X: KGModule
    X_form: FpForm
    S_module: KGModule
    top: KGModule


def _coords(T, V, p):
    """Coordinates c with T c = V, for T of full column rank and V in its span."""
    k = T.shape[1]
    R, piv = gfp.rref(np.hstack([T, V]), p)
    if piv[:k] != list(range(k)) or (len(piv) > k):
        raise ValueError("vectors are not in the span")
    return R[:k, k:].copy()


def _action_on(basis, E: KGModule):
    """Action of E's generators restricted to the submodule spanned by ``basis``."""
    p = E.p
    if basis.shape[1] == 0:
        return KGModule._trusted([np.zeros((0, 0), np.int64) for _ in E.generators], p)
    return KGModule._trusted([_coords(basis, g @ basis % p, p) for g in E.generators], p)


def _invariant_forms_dim(T: KGModule) -> int:
    """dim of {Y : t^T Y t = Y for all generators}, i.e. of Hom(T, T^*)."""
    return hom_space(T, T.dual()).shape[0]


def _projective_points(N, p):
    for lead in range(N):
        for tail in itertools.product(range(p), repeat=N - lead - 1):
            c = [0] * lead + [1] + list(tail)
            yield np.array(c, dtype=np.int64)


def find_isotropic_simple(X: KGModule, b: np.ndarray, seed: int = 0):
    """A totally isotropic simple submodule of X (columns), or None.

    For each composition-factor type T of X, the simple submodules of type T
    are the images of nonzero φ ∈ Hom(T, X).  The map φ ↦ φ^T b φ is quadratic
    with values in the invariant forms on T, a space of dimension r.  By
    Chevalley–Warning a nonzero zero exists on any (2r+1)-dimensional subspace
    of Hom(T, X), so exhausting min(h, 2r+1) coordinates is a complete search.
    """
    p = X.p
    if X.dim == 0:
        return None
    # factor classes of a semisimplification are pairwise non-isomorphic
    for T, _ in semisimplify(X, seed).factors:
        H = hom_space(T, X)
        h = H.shape[0]
        if h == 0:
            continue
        r = _invariant_forms_dim(T)
        if r == 0:
            return H[0]
        N = min(h, 2 * r + 1)
        Q = np.einsum("kia,ij,ljb->klab", H[:N], b, H[:N]) % p
        for c in _projective_points(N, p):
            beta = np.einsum("k,l,klab->ab", c, c, Q) % p
            if not beta.any():
                return np.tensordot(c, H[:N], axes=1) % p
    return None


def _tower_step(E: KGModule, b: np.ndarray, S: np.ndarray):
    p = E.p
    d = E.dim
    if S.shape[1]:
        S_perp = gfp.nullspace(S.T @ b % p, p)
    else:
        S_perp = np.eye(d, dtype=np.int64)
    # complement of S in S_perp: greedily extend S by basis vectors of S_perp
    M_cols = []
    cur = S
    r = S.shape[1]
    for j in range(S_perp.shape[1]):
        v = S_perp[:, j:j + 1]
        trial = np.hstack([cur, v])
        if gfp.rank(trial, p) > r:
            cur, r = trial, r + 1
            M_cols.append(v)
    M = np.hstack(M_cols) if M_cols else np.zeros((d, 0), np.int64)
    basis = np.hstack([S, M])
    k = S.shape[1]
    X_gens = []
    for g in E.generators:
        c = _coords(basis, g @ M % p, p)
        X_gens.append(c[k:].copy())
    X = KGModule._trusted(X_gens, p) if M.shape[1] else KGModule._trusted([np.zeros((0, 0), np.int64)] * len(E.generators), p)
    return S_perp, M, X, (M.T @ b @ M) % p


def max_isotropic_tower(F: FormedKGModule, seed: int = 0) -> IsotropicTower:
    E, b, p = F.module, F.form.matrix, F.p
    d = E.dim
    S = np.zeros((d, 0), dtype=np.int64)
    while True:
        S_perp, M, X, bX = _tower_step(E, b, S)
        phi = find_isotropic_simple(X, bX, seed)
        if phi is None:
            break
        S = gfp.column_space(np.hstack([S, M @ phi % p]), p)
    S_module = _action_on(S, E)
    # E/S_perp, via a complement of S_perp in E
    C = gfp.complement(S_perp, p) if S_perp.shape[1] < d else np.zeros((d, 0), np.int64)
    if C.shape[1]:
        full = np.hstack([S_perp, C])
        k = S_perp.shape[1]
        top = KGModule._trusted([_coords(full, g @ C % p, p)[k:].copy() for g in E.generators], p)
    else:
        top = KGModule._trusted([np.zeros((0, 0), np.int64)] * len(E.generators), p)
    return IsotropicTower(S, S_perp, M, X, FpForm(bX, F.form.epsilon, p), S_module, top)


def hyperbolic(n: int, epsilon: int, p: int) -> np.ndarray:
    """Gram matrix [[0, I], [εI, 0]] of rank 2n."""
    H = np.zeros((2 * n, 2 * n), dtype=np.int64)
    H[:n, n:] = np.eye(n, dtype=np.int64)
    H[n:, :n] = (epsilon * np.eye(n, dtype=np.int64)) % p
    return H


def ss_with_form(F: FormedKGModule, seed: int = 0) -> FormedKGModule:
    """E^ss = X ⊕ Y ⊕ Y^* with the form b1 ⊥ hyperbolic(Y, Y^*)."""
    tower = max_isotropic_tower(F, seed)
    p, eps = F.p, F.form.epsilon
    ngens = len(F.module.generators)
    Y = semisimplify(tower.S_module, seed).module() if tower.S_module.dim else tower.S_module
    Yd = Y.dual()
    module = KGModule.direct_sum([tower.X, Y, Yd], ngens, p)
    nx, ny = tower.X.dim, Y.dim
    form = np.zeros((module.dim, module.dim), dtype=np.int64)
    form[:nx, :nx] = tower.X_form.matrix
    form[nx:, nx:] = hyperbolic(ny, eps, p)
    return FormedKGModule(module, FpForm(form, eps, p))
