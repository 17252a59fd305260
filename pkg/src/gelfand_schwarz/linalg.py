"""Exact rational linear algebra on lists of :class:`~fractions.Fraction` rows.

Only what the minimum-norm solves need: reduced row echelon form, rank, a
Gauss-Jordan inverse and the Moore-Penrose pseudo-inverse through a rank
factorisation ``A = C F``::

    A+ = F^T (F F^T)^{-1} (C^T C)^{-1} C^T

Both Gram matrices are symmetric positive definite, so the inverses exist
whenever ``C`` has full column rank and ``F`` full row rank.
"""

from fractions import Fraction


def as_matrix(A):
    return [[Fraction(a) for a in row] for row in A]


def transpose(A, n_cols=None):
    if not A:
        return [[] for _ in range(n_cols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in Bt] for row in A]


def matvec(A, x):
    return [sum((a * v for a, v in zip(row, x) if a), Fraction(0)) for row in A]


def rref(A):
    """Return ``(R, pivots)`` with ``R`` the reduced row echelon form of ``A``."""
    R = [list(row) for row in A]
    n_rows = len(R)
    n_cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [v * inv for v in R[r]]
        for i in range(n_rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A):
    return len(rref(as_matrix(A))[1]) if A else 0


def inverse(A):
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def pseudo_inverse(A, n_cols=None):
    """Exact Moore-Penrose inverse of an ``m x n`` rational matrix (returned ``n x m``)."""
    A = as_matrix(A)
    m = len(A)
    n = len(A[0]) if A else (n_cols or 0)
    R, pivots = rref(A)
    r = len(pivots)
    if r == 0:
        return [[Fraction(0)] * m for _ in range(n)]
    C = [[A[i][c] for c in pivots] for i in range(m)]
    F = R[:r]
    Ct, Ft = transpose(C), transpose(F)
    left = inverse(matmul(F, Ft))
    right = inverse(matmul(Ct, C))
    return matmul(matmul(Ft, left), matmul(right, Ct))
