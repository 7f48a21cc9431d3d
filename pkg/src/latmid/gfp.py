"""Linear algebra over F_p on int64 numpy arrays.

Vectors are columns; a matrix g acts on a column vector v as ``g @ v``.
Everything returned is reduced into [0, p).
"""

from __future__ import annotations

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

__all__ = [
    "asarray",
    "rref",
    "rank",
    "nullspace",
    "inv",
    "det",
    "solve_left_hom",
    "spin",
    "complement",
    "charpoly",
    "poly_eval",
    "irreducible_factors",
    "column_space",
]


def asarray(A, p: int) -> np.ndarray:
    return np.asarray(A, dtype=np.int64) % p


def rref(A, p: int):
    """Reduced row echelon form and pivot columns."""
    M = asarray(A, p).copy()
    if M.ndim != 2 or M.size == 0:
        return M, []
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        f = M[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(f[nzr], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Columns spanning {x : A x = 0}."""
    A = asarray(A, p)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in piv]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, c in enumerate(piv):
            N[c, k] = (-R[i, f]) % p
    return N


def column_space(A, p: int) -> np.ndarray:
    """Echelon basis (as columns) of the span of the columns of A."""
    A = asarray(A, p)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    R, piv = rref(A.T, p)
    return R[: len(piv)].T.copy()


def inv(A, p: int) -> np.ndarray:
    A = asarray(A, p)
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix over F_p")
    return R[:, n:].copy()


def det(A, p: int) -> int:
    M = asarray(A, p).copy()
    n = M.shape[0]
    d = 1
    for c in range(n):
        nz = np.nonzero(M[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + nz[0]
        if i != c:
            M[[c, i]] = M[[i, c]]
            d = -d
        d = d * int(M[c, c]) % p
        iv = pow(int(M[c, c]), -1, p)
        f = M[c + 1:, c] * iv % p
        M[c + 1:] = (M[c + 1:] - np.outer(f, M[c])) % p
    return d % p


def solve_left_hom(src, dst, p: int) -> np.ndarray:
    """Basis of {X : X @ s = d @ X for all paired generators}.

    ``src`` and ``dst`` are lists of generator matrices of the same length
    (dims a and b).  Returns an array of shape (k, b, a): k independent
    module homomorphisms from the src module to the dst module.
    """
    a = src[0].shape[0] if src else 0
    b = dst[0].shape[0] if dst else 0
    if a == 0 or b == 0:
        return np.zeros((0, b, a), dtype=np.int64)
    # vec(X) row-major: X[i, j] -> i * a + j.  (X s)_{ij} = sum_k X_ik s_kj,
    # (d X)_{ij} = sum_k d_ik X_kj.
    blocks = []
    Ia, Ib = np.eye(a, dtype=np.int64), np.eye(b, dtype=np.int64)
    for s, d in zip(src, dst):
        blocks.append((np.kron(Ib, s.T) - np.kron(d, Ia)) % p)
    N = nullspace(np.vstack(blocks), p)
    return N.T.reshape(-1, b, a)


def spin(vectors, gens, p: int) -> np.ndarray:
    """Echelon basis (columns) of the submodule generated by ``vectors``."""
    V = asarray(vectors, p)
    if V.ndim == 1:
        V = V[:, None]
    n = V.shape[0]
    basis = column_space(V, p)
    if basis.shape[1] == 0:
        return basis
    frontier = basis
    while frontier.shape[1]:
        images = np.hstack([g @ frontier % p for g in gens]) if gens else np.zeros((n, 0), np.int64)
        new = column_space(np.hstack([basis, images]), p)
        if new.shape[1] == basis.shape[1]:
            break
        frontier = new  # span grew; re-apply generators to the whole basis
        basis = new
    return basis


def complement(W, p: int) -> np.ndarray:
    """Standard basis vectors completing the columns of W to a basis."""
    W = asarray(W, p)
    n = W.shape[0]
    chosen = []
    cur = W
    r = rank(cur, p) if cur.size else 0
    for i in range(n):
        e = np.zeros((n, 1), dtype=np.int64)
        e[i, 0] = 1
        trial = np.hstack([cur, e]) if cur.size else e
        if rank(trial, p) > r:
            cur, r = trial, r + 1
            chosen.append(i)
    C = np.zeros((n, len(chosen)), dtype=np.int64)
    for k, i in enumerate(chosen):
        C[i, k] = 1
    return C


def charpoly(A, p: int) -> list[int]:
    """Characteristic polynomial det(xI - A), coefficients highest degree first.

    Reduces to upper Hessenberg form by similarity, then runs the standard
    determinant recurrence on the leading principal submatrices.
    """
    H = asarray(A, p).copy()
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.nonzero(H[m:, m - 1])[0]
        if nz.size == 0:
            continue
        i = m + nz[0]
        if i != m:
            H[[m, i]] = H[[i, m]]
            H[:, [m, i]] = H[:, [i, m]]
        iv = pow(int(H[m, m - 1]), -1, p)
        for r in range(m + 1, n):
            f = int(H[r, m - 1]) * iv % p
            if f:
                H[r] = (H[r] - f * H[m]) % p
                H[:, m] = (H[:, m] + f * H[:, r]) % p
    # polys[k] = charpoly of H[:k, :k], coefficients lowest degree first
    polys = [[1]]
    for k in range(1, n + 1):
        cur = _pmul([(-int(H[k - 1, k - 1])) % p, 1], polys[k - 1], p)
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = prod * int(H[i, i - 1]) % p
            c = prod * int(H[i - 1, k - 1]) % p
            if c:
                cur = _padd(cur, [(-c * x) % p for x in polys[i - 1]], p)
        polys.append(cur)
    return list(reversed(polys[n]))


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _padd(a, b, p):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [(x + y) % p for x, y in zip(a, b)]


def poly_eval(coeffs, A, p: int) -> np.ndarray:
    """f(A) by Horner; coefficients highest degree first."""
    A = asarray(A, p)
    n = A.shape[0]
    R = np.zeros((n, n), dtype=np.int64)
    I = np.eye(n, dtype=np.int64)
    for c in coeffs:
        R = (R @ A + int(c) * I) % p
    return R


def irreducible_factors(coeffs, p: int) -> list[list[int]]:
    """Distinct monic irreducible factors, lowest degree first."""
    _, facs = gf_factor([int(c) % p for c in coeffs], p, ZZ)
    out = [[int(c) for c in f] for f, _ in facs]
    out.sort(key=lambda f: (len(f), f))
    return out
