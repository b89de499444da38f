"""Exact integer linear algebra with a compiled fast path.

The hot operation everywhere in this package is diagonalizing an integer
matrix by unimodular row and column operations.  When the ``_intcore``
extension built from ``_intcore.pyx`` is importable we run it on 64-bit
machine integers; any intermediate overflow aborts the compiled run and the
computation silently restarts on the arbitrary-precision pure-Python kernel.
Both kernels implement the identical elimination, so results never depend on
which one answered.
"""

from __future__ import annotations

import os
from math import gcd
from typing import Optional, Sequence

from . import _intpure

try:  # pragma: no cover - absence is exercised via D2KIT_BACKEND=pure
    from . import _intcore
except ImportError:  # pragma: no cover
    _intcore = None

__all__ = [
    "backend_name",
    "diagonalize",
    "rank_and_divisors",
    "kernel_basis",
    "kernel_rank",
    "solve_columns",
    "matvec",
    "matmul",
]

IntMatrix = Sequence[Sequence[int]]


def backend_name() -> str:
    """Which kernel answers by default: ``compiled`` or ``pure``."""
    forced = os.environ.get("D2KIT_BACKEND", "").strip().lower()
    if forced == "pure" or _intcore is None:
        return "pure"
    return "compiled"


def diagonalize(
    rows: IntMatrix,
    shape: tuple[int, int],
    want_left: bool = False,
    want_right: bool = False,
) -> tuple[list[int], Optional[list[list[int]]], Optional[list[list[int]]]]:
    """Diagonalize by unimodular operations; see ``_intpure.diagonalize``."""
    m, n = shape
    if m == 0 or n == 0:
        left = _intpure._identity(m) if want_left else None
        right = _intpure._identity(n) if want_right else None
        return [], left, right
    if backend_name() == "compiled":
        try:
            import numpy as np

            a = np.array(rows, dtype=np.int64)
            if a.shape != (m, n):
                raise ValueError(f"matrix is not {m} x {n}")
            diag, left, right = _intcore.diagonalize(a, want_left, want_right)
            return (
                diag,
                left.tolist() if left is not None else None,
                right.tolist() if right is not None else None,
            )
        except OverflowError:
            pass  # fall through to exact arithmetic
    return _intpure.diagonalize(rows, shape, want_left, want_right)


def _divisor_chain(values: list[int]) -> tuple[int, ...]:
    # Rearrange the diagonal of an equivalent diagonal matrix into the
    # canonical chain d1 | d2 | ... by repeated gcd/lcm exchanges.
    vals = sorted(abs(v) for v in values if v)
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                a, b = vals[i], vals[j]
                if b % a:
                    g = gcd(a, b)
                    vals[i], vals[j] = g, a * b // g
                    changed = True
        if changed:
            vals.sort()
    return tuple(vals)


def rank_and_divisors(rows: IntMatrix, shape: tuple[int, int]) -> tuple[int, tuple[int, ...]]:
    """Rank and elementary divisor chain (all nonzero divisors, ones included)."""
    diag, _, _ = diagonalize(rows, shape)
    nonzero = [d for d in diag if d]
    return len(nonzero), _divisor_chain(nonzero)


def kernel_rank(rows: IntMatrix, shape: tuple[int, int]) -> int:
    diag, _, _ = diagonalize(rows, shape)
    return shape[1] - sum(1 for d in diag if d)


def kernel_basis(rows: IntMatrix, shape: tuple[int, int]) -> list[list[int]]:
    """A basis of the integer kernel, read off the right transform."""
    m, n = shape
    diag, _, right = diagonalize(rows, shape, want_right=True)
    assert right is not None
    free = [j for j in range(n) if j >= len(diag) or diag[j] == 0]
    return [[right[i][j] for i in range(n)] for j in free]


def solve_columns(
    rows: IntMatrix, shape: tuple[int, int], rhs_columns: Sequence[Sequence[int]]
) -> list[Optional[list[int]]]:
    """Solve A @ x = b over the integers for each right-hand side.

    Returns one solution per column (free coordinates set to zero), or None
    where no integer solution exists.  The diagonalization is done once and
    shared across all right-hand sides.
    """
    m, n = shape
    diag, left, right = diagonalize(rows, shape, want_left=True, want_right=True)
    assert left is not None and right is not None
    out: list[Optional[list[int]]] = []
    for b in rhs_columns:
        if len(b) != m:
            raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
        c = matvec(left, b)
        y = [0] * n
        ok = True
        for t in range(min(m, n)):
            d = diag[t]
            if d:
                q, r = divmod(c[t], d)
                if r:
                    ok = False
                    break
                y[t] = q
            elif c[t]:
                ok = False
                break
        if ok:
            for t in range(min(m, n), m):
                if c[t]:
                    ok = False
                    break
        if not ok:
            out.append(None)
            continue
        out.append(matvec(right, y))
    return out


def matvec(mat: IntMatrix, vec: Sequence[int]) -> list[int]:
    return [sum(row[j] * vec[j] for j in range(len(vec))) for row in mat]


def matmul(a: IntMatrix, b: IntMatrix) -> list[list[int]]:
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    cols = len(b[0]) if b else 0
    return [
        [sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)]
        for row in a
    ]
