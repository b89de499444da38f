"""Time the compiled integer kernel against the pure-Python fallback.

Both kernels run the identical elimination, so this measures constant
factors only.  Workloads are the operations that dominate real runs, on the
regular-representation blocks the package actually produces: rank and
divisor chains of boundary matrices, degree-2 kernel bases, and the linear
systems behind split certificates.  Random dense matrices are deliberately
absent: their coefficient growth leaves 64-bit range almost immediately, at
which point the compiled kernel retries on the pure one and the comparison
only times the fallback against itself.

Usage: python3 benchmarks/bench_intlinalg.py [--repeat N]
"""

from __future__ import annotations

import argparse
import os
import time
from typing import Callable

from d2kit import intlinalg
from d2kit.fox import presentation_complex
from d2kit.groupring import integerize, integerize_opposite
from d2kit.groups import catalog_entry
from d2kit.moves import attach_cells, stabilize

_RANK_KEYS = ("cyclic 8", "dihedral 5", "quaternion8", "tetrahedral", "octahedral", "icosahedral")
_KERNEL_KEYS = ("quaternion8", "octahedral", "icosahedral")
_SPLIT_KEYS = ("tetrahedral", "octahedral", "icosahedral")


def _d2_block(key: str) -> tuple[list[list[int]], tuple[int, int]]:
    x = presentation_complex(catalog_entry(key).marked)
    n = x.group.order
    return integerize(x.d2), (x.ranks[1] * n, x.ranks[2] * n)


def _split_system(key: str):
    # The phi @ d3 = I system of a two-cell attachment, as solve_columns sees it.
    x = presentation_complex(catalog_entry(key).marked)
    stabbed, _ = stabilize(x, 2)
    attached = attach_cells(stabbed, [x.ranks[2], x.ranks[2] + 1])
    n = attached.group.order
    rows = integerize_opposite(attached.d3)
    shape = (attached.ranks[3] * n, attached.ranks[2] * n)
    rhs = []
    for t in range(attached.ranks[3]):
        b = [0] * shape[0]
        b[t * n + attached.group.identity] = 1
        rhs.append(b)
    return rows, shape, rhs


def _workloads() -> list[tuple[str, tuple[int, int], Callable[[], object]]]:
    out: list[tuple[str, tuple[int, int], Callable[[], object]]] = []
    for key in _RANK_KEYS:
        rows, shape = _d2_block(key)
        out.append((
            f"divisors {key} d2",
            shape,
            lambda rows=rows, shape=shape: intlinalg.rank_and_divisors(rows, shape),
        ))
    for key in _KERNEL_KEYS:
        rows, shape = _d2_block(key)
        out.append((
            f"kernel {key} d2",
            shape,
            lambda rows=rows, shape=shape: intlinalg.kernel_basis(rows, shape),
        ))
    for key in _SPLIT_KEYS:
        rows, shape, rhs = _split_system(key)
        out.append((
            f"split {key}",
            shape,
            lambda rows=rows, shape=shape, rhs=rhs: intlinalg.solve_columns(
                rows, shape, rhs
            ),
        ))
    return out


def _best_of(fn: Callable[[], object], repeat: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        begin = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - begin)
    return best, result


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="best-of timing runs")
    args = parser.parse_args(argv)

    saved = os.environ.get("D2KIT_BACKEND")
    try:
        os.environ["D2KIT_BACKEND"] = ""
        if intlinalg.backend_name() != "compiled":
            print("note: compiled kernel unavailable; timing pure against itself")
        header = f"{'workload':<26}{'shape':>11}{'compiled':>12}{'pure':>12}{'speedup':>9}"
        print(header)
        print("-" * len(header))
        for name, shape, fn in _workloads():
            os.environ["D2KIT_BACKEND"] = ""
            fast, fast_result = _best_of(fn, args.repeat)
            os.environ["D2KIT_BACKEND"] = "pure"
            slow, slow_result = _best_of(fn, args.repeat)
            if fast_result != slow_result:
                raise SystemExit(f"backends disagree on {name}")
            print(
                f"{name:<26}{shape[0]:>5}x{shape[1]:<5}"
                f"{fast * 1e3:>10.2f}ms{slow * 1e3:>10.2f}ms{slow / fast:>8.1f}x"
            )
    finally:
        if saved is None:
            os.environ.pop("D2KIT_BACKEND", None)
        else:
            os.environ["D2KIT_BACKEND"] = saved
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
