"""Pure-Python integer matrix diagonalization.

This is the arbitrary-precision fallback behind ``intlinalg``; the compiled
kernel in ``_intcore`` follows exactly the same pivot rule and elimination
order, so both backends produce identical output whenever the compiled one
does not overflow.
"""

from __future__ import annotations

from typing import Optional, Sequence

__all__ = ["xgcd", "diagonalize"]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with a*x + b*y == g == gcd(a, b) and g >= 0."""
    prev_x, x = 1, 0
    prev_y, y = 0, 1
    while b:
        q = a // b
        x, prev_x = prev_x - q * x, x
        y, prev_y = prev_y - q * y, y
        a, b = b, a - q * b
    if a < 0:
        # assert prev_x*orig_a + prev_y*orig_b == a at this point
        return -prev_x, -prev_y, -a
    return prev_x, prev_y, a


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def diagonalize(
    rows: Sequence[Sequence[int]],
    shape: tuple[int, int],
    want_left: bool = False,
    want_right: bool = False,
) -> tuple[list[int], Optional[list[list[int]]], Optional[list[list[int]]]]:
    """Reduce an integer matrix to diagonal form by unimodular row/column ops.

    Returns (diag, left, right) where diag holds the min(m, n) diagonal values
    (nonzero entries first) and, when requested, left @ A @ right recovers the
    diagonal matrix.  The diagonal is not yet arranged into a divisibility
    chain; callers that need elementary divisors post-process it.
    """
    m, n = shape
    A = [list(row) for row in rows]
    if len(A) != m or any(len(row) != n for row in A):
        raise ValueError(f"matrix is not {m} x {n}")
    L = _identity(m) if want_left else None
    R = _identity(n) if want_right else None

    def improve_row(k: int, i: int) -> None:
        # Make A[i][k] zero using rows k and i; keeps A[k][k] nonzero.
        a = A[k][k]
        b = A[i][k]
        if b == 0:
            return
        row_k = A[k]
        row_i = A[i]
        if b % a == 0:
            q = b // a
            for jj in range(k, n):
                row_i[jj] -= q * row_k[jj]
            if L is not None:
                lk, li = L[k], L[i]
                for jj in range(m):
                    li[jj] -= q * lk[jj]
            return
        x, y, g = xgcd(a, b)
        alpha, beta = a // g, b // g
        # Rows (k, i) <- (x*k + y*i, -beta*k + alpha*i); determinant is one.
        for jj in range(k, n):
            u, v = row_k[jj], row_i[jj]
            row_k[jj] = x * u + y * v
            row_i[jj] = alpha * v - beta * u
        if L is not None:
            lk, li = L[k], L[i]
            for jj in range(m):
                u, v = lk[jj], li[jj]
                lk[jj] = x * u + y * v
                li[jj] = alpha * v - beta * u

    def improve_col(k: int, j: int) -> None:
        a = A[k][k]
        b = A[k][j]
        if b == 0:
            return
        if b % a == 0:
            q = b // a
            for ii in range(k, m):
                A[ii][j] -= q * A[ii][k]
            if R is not None:
                for ii in range(n):
                    R[ii][j] -= q * R[ii][k]
            return
        x, y, g = xgcd(a, b)
        alpha, beta = a // g, b // g
        for ii in range(k, m):
            u, v = A[ii][k], A[ii][j]
            A[ii][k] = x * u + y * v
            A[ii][j] = alpha * v - beta * u
        if R is not None:
            for ii in range(n):
                u, v = R[ii][k], R[ii][j]
                R[ii][k] = x * u + y * v
                R[ii][j] = alpha * v - beta * u

    def find_pivot(k: int) -> Optional[tuple[int, int]]:
        # First unit in scan order wins; otherwise the smallest magnitude.
        best: Optional[tuple[int, int, int]] = None
        for i in range(k, m):
            row = A[i]
            for j in range(k, n):
                v = row[j]
                if v:
                    if v == 1 or v == -1:
                        return (i, j)
                    a = -v if v < 0 else v
                    if best is None or a < best[0]:
                        best = (a, i, j)
        if best is None:
            return None
        return best[1], best[2]

    for k in range(min(m, n)):
        pivot = find_pivot(k)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
            if L is not None:
                L[k], L[pi] = L[pi], L[k]
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            if R is not None:
                for row in R:
                    row[k], row[pj] = row[pj], row[k]
        while True:
            for i in range(k + 1, m):
                improve_row(k, i)
            if all(A[k][j] == 0 for j in range(k + 1, n)):
                break
            for j in range(k + 1, n):
                improve_col(k, j)
            if all(A[i][k] == 0 for i in range(k + 1, m)):
                break

    diag = [A[t][t] for t in range(min(m, n))]
    return diag, L, R
