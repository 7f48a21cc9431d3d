"""Dense matrices over Q as lists of rows of ``mpq``.

Only what the lattice and form code needs; sizes here stay below ~30.
"""

from __future__ import annotations

from gmpy2 import mpq

from .dvr import to_q

Matrix = list  # list[list[mpq]], row-major


def as_matrix(rows) -> Matrix:
    return [[to_q(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[mpq(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int) -> Matrix:
    return [[mpq(0)] * m for _ in range(n)]


def diag(entries) -> Matrix:
    entries = [to_q(x) for x in entries]
    n = len(entries)
    out = zeros(n, n)
    for i, x in enumerate(entries):
        out[i][i] = x
    return out


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    Bt = list(zip(*B))
    if not Bt:
        return [[] for _ in A]
    out = []
    for row in A:
        out.append([_dot(row, col) for col in Bt])
    return out


def _dot(u, v):
    s = mpq(0)
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def scale(A: Matrix, c) -> Matrix:
    c = to_q(c)
    return [[c * x for x in row] for row in A]


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def hcat(A: Matrix, B: Matrix) -> Matrix:
    return [ra + rb for ra, rb in zip(A, B)]


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def submatrix(A: Matrix, rows, cols) -> Matrix:
    return [[A[i][j] for j in cols] for i in rows]


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ZeroDivisionError if A is singular."""
    n = len(A)
    M = [list(row) + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            f = M[r][c]
            if r != c and f != 0:
                pr = M[c]
                M[r] = [x - f * y for x, y in zip(M[r], pr)]
    return [row[n:] for row in M]


def det(A: Matrix) -> mpq:
    n = len(A)
    M = [list(row) for row in A]
    d = mpq(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] * inv
            if f != 0:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return d


def nullspace(A: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0} over Q, returned as columns of a matrix."""
    m = ncols if ncols is not None else (len(A[0]) if A else 0)
    M = [list(row) for row in A]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            f = M[i][c]
            if i != r and f != 0:
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [mpq(0)] * m
        v[f] = mpq(1)
        for i, c in enumerate(pivots):
            v[c] = -M[i][f]
        basis.append(v)
    return transpose(basis) if basis else [[] for _ in range(m)]


def is_zero(A: Matrix) -> bool:
    return all(x == 0 for row in A for x in row)


def fmt(A: Matrix) -> str:
    return "\n".join("[" + " ".join(str(x) for x in row) + "]" for row in A)
