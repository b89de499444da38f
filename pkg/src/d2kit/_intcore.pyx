# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer diagonalization on 64-bit words.

Mirrors ``_intpure.diagonalize`` step for step (same pivot rule, same
elimination order, Python floor-division semantics) so the two backends are
interchangeable.  Every multiply/add that could leave the int64 range goes
through a checked primitive; on overflow the whole call raises OverflowError
and the caller retries with arbitrary precision.
"""

import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    static int d2k_add(long long a, long long b, long long *r)
        { return __builtin_saddll_overflow(a, b, r); }
    static int d2k_sub(long long a, long long b, long long *r)
        { return __builtin_ssubll_overflow(a, b, r); }
    static int d2k_mul(long long a, long long b, long long *r)
        { return __builtin_smulll_overflow(a, b, r); }
    """
    int d2k_add(long long a, long long b, long long *r) nogil
    int d2k_sub(long long a, long long b, long long *r) nogil
    int d2k_mul(long long a, long long b, long long *r) nogil


cdef inline long long _fdiv(long long a, long long b) except? -1:
    # Floor division matching Python's // for int64 operands.
    cdef long long q
    if b == -1 and a == (<long long> -9223372036854775807) - 1:
        raise OverflowError("int64 overflow in division")
    q = a / b
    if a % b != 0 and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef int _xgcd(long long a, long long b,
               long long *px, long long *py, long long *pg) except -1:
    cdef long long prev_x = 1, x = 0, prev_y = 0, y = 1
    cdef long long q, t, nx, ny, nr
    while b != 0:
        q = _fdiv(a, b)
        if d2k_mul(q, x, &t) or d2k_sub(prev_x, t, &nx):
            raise OverflowError("int64 overflow in xgcd")
        prev_x = x
        x = nx
        if d2k_mul(q, y, &t) or d2k_sub(prev_y, t, &ny):
            raise OverflowError("int64 overflow in xgcd")
        prev_y = y
        y = ny
        if d2k_mul(q, b, &t) or d2k_sub(a, t, &nr):
            raise OverflowError("int64 overflow in xgcd")
        a = b
        b = nr
    if a < 0:
        px[0] = -prev_x
        py[0] = -prev_y
        pg[0] = -a
    else:
        px[0] = prev_x
        py[0] = prev_y
        pg[0] = a
    return 0


cdef int _improve_row(long long[:, ::1] A, long long[:, ::1] L, bint use_l,
                      int k, int i, int m, int n) except -1:
    cdef long long a = A[k, k]
    cdef long long b = A[i, k]
    cdef long long q, x, y, g, alpha, beta, u, v, t1, t2
    cdef int jj
    if b == 0:
        return 0
    if b % a == 0:
        q = b / a  # exact, so truncation equals floor
        for jj in range(k, n):
            if d2k_mul(q, A[k, jj], &t1) or d2k_sub(A[i, jj], t1, &t2):
                raise OverflowError("int64 overflow in row op")
            A[i, jj] = t2
        if use_l:
            for jj in range(m):
                if d2k_mul(q, L[k, jj], &t1) or d2k_sub(L[i, jj], t1, &t2):
                    raise OverflowError("int64 overflow in row op")
                L[i, jj] = t2
        return 0
    _xgcd(a, b, &x, &y, &g)
    alpha = a / g
    beta = b / g
    for jj in range(k, n):
        u = A[k, jj]
        v = A[i, jj]
        if (d2k_mul(x, u, &t1) or d2k_mul(y, v, &t2) or
                d2k_add(t1, t2, &t1)):
            raise OverflowError("int64 overflow in row op")
        A[k, jj] = t1
        if (d2k_mul(alpha, v, &t1) or d2k_mul(beta, u, &t2) or
                d2k_sub(t1, t2, &t1)):
            raise OverflowError("int64 overflow in row op")
        A[i, jj] = t1
    if use_l:
        for jj in range(m):
            u = L[k, jj]
            v = L[i, jj]
            if (d2k_mul(x, u, &t1) or d2k_mul(y, v, &t2) or
                    d2k_add(t1, t2, &t1)):
                raise OverflowError("int64 overflow in row op")
            L[k, jj] = t1
            if (d2k_mul(alpha, v, &t1) or d2k_mul(beta, u, &t2) or
                    d2k_sub(t1, t2, &t1)):
                raise OverflowError("int64 overflow in row op")
            L[i, jj] = t1
    return 0


cdef int _improve_col(long long[:, ::1] A, long long[:, ::1] R, bint use_r,
                      int k, int j, int m, int n) except -1:
    cdef long long a = A[k, k]
    cdef long long b = A[k, j]
    cdef long long q, x, y, g, alpha, beta, u, v, t1, t2
    cdef int ii
    if b == 0:
        return 0
    if b % a == 0:
        q = b / a
        for ii in range(k, m):
            if d2k_mul(q, A[ii, k], &t1) or d2k_sub(A[ii, j], t1, &t2):
                raise OverflowError("int64 overflow in column op")
            A[ii, j] = t2
        if use_r:
            for ii in range(n):
                if d2k_mul(q, R[ii, k], &t1) or d2k_sub(R[ii, j], t1, &t2):
                    raise OverflowError("int64 overflow in column op")
                R[ii, j] = t2
        return 0
    _xgcd(a, b, &x, &y, &g)
    alpha = a / g
    beta = b / g
    for ii in range(k, m):
        u = A[ii, k]
        v = A[ii, j]
        if (d2k_mul(x, u, &t1) or d2k_mul(y, v, &t2) or
                d2k_add(t1, t2, &t1)):
            raise OverflowError("int64 overflow in column op")
        A[ii, k] = t1
        if (d2k_mul(alpha, v, &t1) or d2k_mul(beta, u, &t2) or
                d2k_sub(t1, t2, &t1)):
            raise OverflowError("int64 overflow in column op")
        A[ii, j] = t1
    if use_r:
        for ii in range(n):
            u = R[ii, k]
            v = R[ii, j]
            if (d2k_mul(x, u, &t1) or d2k_mul(y, v, &t2) or
                    d2k_add(t1, t2, &t1)):
                raise OverflowError("int64 overflow in column op")
            R[ii, k] = t1
            if (d2k_mul(alpha, v, &t1) or d2k_mul(beta, u, &t2) or
                    d2k_sub(t1, t2, &t1)):
                raise OverflowError("int64 overflow in column op")
            R[ii, j] = t1
    return 0


cdef int _find_pivot(long long[:, ::1] A, int k, int m, int n,
                     int *pi, int *pj) nogil:
    cdef int i, j, found = 0
    cdef long long v, a, best = 0
    for i in range(k, m):
        for j in range(k, n):
            v = A[i, j]
            if v != 0:
                if v == 1 or v == -1:
                    pi[0] = i
                    pj[0] = j
                    return 1
                a = -v if v < 0 else v
                if not found or a < best:
                    best = a
                    pi[0] = i
                    pj[0] = j
                    found = 1
    return found


def diagonalize(a, bint want_left, bint want_right):
    """Diagonalize an int64 matrix; returns (diag, left, right)."""
    A_arr = np.array(a, dtype=np.int64, copy=True)
    cdef long long[:, ::1] A = A_arr
    cdef int m = A_arr.shape[0]
    cdef int n = A_arr.shape[1]
    L_arr = np.identity(m, dtype=np.int64) if want_left else np.zeros((1, 1), dtype=np.int64)
    R_arr = np.identity(n, dtype=np.int64) if want_right else np.zeros((1, 1), dtype=np.int64)
    cdef long long[:, ::1] L = L_arr
    cdef long long[:, ::1] R = R_arr
    cdef int k, i, j, pi, pj, clear
    cdef long long tmp
    for k in range(min(m, n)):
        if not _find_pivot(A, k, m, n, &pi, &pj):
            break
        if pi != k:
            for j in range(n):
                tmp = A[k, j]
                A[k, j] = A[pi, j]
                A[pi, j] = tmp
            if want_left:
                for j in range(m):
                    tmp = L[k, j]
                    L[k, j] = L[pi, j]
                    L[pi, j] = tmp
        if pj != k:
            for i in range(m):
                tmp = A[i, k]
                A[i, k] = A[i, pj]
                A[i, pj] = tmp
            if want_right:
                for i in range(n):
                    tmp = R[i, k]
                    R[i, k] = R[i, pj]
                    R[i, pj] = tmp
        while True:
            for i in range(k + 1, m):
                _improve_row(A, L, want_left, k, i, m, n)
            clear = 1
            for j in range(k + 1, n):
                if A[k, j] != 0:
                    clear = 0
                    break
            if clear:
                break
            for j in range(k + 1, n):
                _improve_col(A, R, want_right, k, j, m, n)
            clear = 1
            for i in range(k + 1, m):
                if A[i, k] != 0:
                    clear = 0
                    break
            if clear:
                break
    diag = [int(A[t, t]) for t in range(min(m, n))]
    return (
        diag,
        L_arr if want_left else None,
        R_arr if want_right else None,
    )
