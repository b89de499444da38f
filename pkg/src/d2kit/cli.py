"""Command-line frontend: reproducible runs with a stable report grammar.

Plain reports are lines of ``INFO <key> <value>`` and ``CHECK <name>
PASS|FAIL [detail]`` plus a trailing ``# elapsed`` comment (timing is
outside the determinism contract).  ``--structured`` switches to one JSON
record per line with sorted keys and no timing.  Exit codes: 0 all checks
passed, 1 failed checks or an unresolved comparison, 2 malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .chains import (
    NoSplit,
    NotInjective,
    d2_split,
    euler_characteristic,
    integer_homology,
    pi2_rank,
    validate,
    verify_splitting,
)
from .errors import CheckError, InputError
from .fox import presentation_complex
from .groupring import integerize
from .groups import catalog
from .intlinalg import kernel_rank
from .moves import (
    Unknown,
    apply_moves,
    reduce_d2,
    schanuel_compare,
    verify_certificate,
)
from . import formats

__all__ = ["main", "ReportBuilder"]


class ReportBuilder:
    """Emits the report grammar; tracks whether every check passed."""

    def __init__(self, structured: bool, stream: TextIO):
        self.structured = structured
        self.stream = stream
        self.failures = 0

    def _emit(self, record: dict, plain: str) -> None:
        if self.structured:
            self.stream.write(json.dumps(record, sort_keys=True) + "\n")
        else:
            self.stream.write(plain + "\n")

    def info(self, key: str, value: object) -> None:
        self._emit({"kind": "info", "key": key, "value": str(value)}, f"INFO {key} {value}")

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        if not passed:
            self.failures += 1
        word = "PASS" if passed else "FAIL"
        plain = f"CHECK {name} {word}" + (f" {detail}" if detail else "")
        self._emit(
            {"kind": "check", "name": name, "passed": passed, "detail": detail}, plain
        )

    def checks(self, results) -> None:
        for r in results:
            self.check(r.name, r.passed, r.detail)

    def error(self, message: str) -> None:
        self._emit({"kind": "error", "message": message}, f"ERROR {message}")

    def entry(self, fields: dict) -> None:
        plain = "ENTRY " + " | ".join(f"{k}={v}" for k, v in fields.items())
        self._emit({"kind": "entry", **fields}, plain)

    def exit(self, code: int) -> None:
        self._emit({"kind": "exit", "code": code}, f"INFO exit {code}")

    @property
    def all_passed(self) -> bool:
        return self.failures == 0


def _digest(report: ReportBuilder, path: Path) -> None:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    report.info("input", f"{path} sha256 {digest}")


def _word_display(presentation, word) -> str:
    # Run-length compressed letters: x x x -> x^3, inverses as x^-1.
    parts: list[str] = []
    run: Optional[tuple[int, int]] = None
    count = 0

    def flush() -> None:
        if run is None:
            return
        gen, exp = run
        name = presentation.generators[gen]
        base = name if exp == 1 else f"{name}^-1"
        parts.append(base if count == 1 else f"{name}^{exp * count}")

    for letter in word.letters:
        if letter == run:
            count += 1
        else:
            flush()
            run, count = letter, 1
    flush()
    return " ".join(parts) if parts else "1"


def _presentation_display(presentation) -> str:
    gens = " ".join(presentation.generators)
    rels = ", ".join(_word_display(presentation, w) for w in presentation.relators)
    return f"<{gens} | {rels}>"


# ---------------------------------------------------------------------------
# Subcommands.


def _cmd_catalog(args, report: ReportBuilder) -> int:
    for entry in catalog():
        x = presentation_complex(entry.marked)
        pres = entry.marked.presentation
        report.entry(
            {
                "key": entry.key,
                "order": entry.marked.group.order,
                "presentation": _presentation_display(pres),
                "deficiency": pres.deficiency(),
                "chi": euler_characteristic(x),
                "known_deficiency": entry.known_deficiency,
            }
        )
    return 0


def _cmd_build(args, report: ReportBuilder) -> int:
    path = Path(args.presentation)
    _digest(report, path)
    marked = formats.parse_presentation_file(path)
    x = presentation_complex(marked)
    report.info("ranks", " ".join(str(r) for r in x.ranks))
    report.checks(validate(x))
    formats.write_complex_file(args.out, x)
    report.info("wrote", args.out)
    return 0 if report.all_passed else 1


def _cmd_verify(args, report: ReportBuilder) -> int:
    path = Path(args.complex)
    _digest(report, path)
    x = formats.parse_complex_file(path)
    report.info("ranks", " ".join(str(r) for r in x.ranks))
    report.checks(validate(x))
    if report.all_passed:
        for line in integer_homology(x).lines():
            report.info("homology", line)
        if x.ranks[3] > 0:
            split = d2_split(x)
            if isinstance(split, NotInjective):
                report.check(
                    "d2-split", False, f"NotInjective kernel-rank {split.kernel_rank}"
                )
            elif isinstance(split, NoSplit):
                report.check("d2-split", False, f"NoSplit {split.detail}".rstrip())
            else:
                report.check(
                    "d2-split", verify_splitting(split, x), "splitting re-verified"
                )
    return 0 if report.all_passed else 1


def _looks_like_complex(path: Path) -> bool:
    for raw in path.read_text(encoding="utf-8").splitlines():
        body = raw.split("#", 1)[0].strip()
        if body:
            return body == "complex"
    return False


def _cmd_invariants(args, report: ReportBuilder) -> int:
    path = Path(args.file)
    _digest(report, path)
    if _looks_like_complex(path):
        x = formats.parse_complex_file(path)
        gens, rels = x.ranks[1], x.ranks[2]
        # chi = 1 - (g - r) only reads off a presentation shape: one
        # 0-cell and nothing above degree 2.
        counts_known = x.ranks[0] == 1 and x.is_two_complex
    else:
        marked = formats.parse_presentation_file(path)
        x = presentation_complex(marked)
        gens = marked.presentation.generator_count
        rels = marked.presentation.relator_count
        counts_known = True
    chi = euler_characteristic(x)
    report.info("ranks", " ".join(str(r) for r in x.ranks))
    report.info("chi", chi)
    if x.ranks[3] == 0:
        report.info("pi2-rank", pi2_rank(x))
    else:
        report.info("pi2-rank", "skipped (3-complex)")
    n = x.group.order
    report.info(
        "relation-module-rank",
        kernel_rank(integerize(x.d1), (x.ranks[0] * n, x.ranks[1] * n)),
    )
    report.check("euler-lower-bound", chi >= 1, f"chi = {chi}")
    if counts_known:
        report.check(
            "euler-deficiency",
            chi == 1 - (gens - rels),
            f"chi = {chi}, 1 - (g - r) = {1 - (gens - rels)}",
        )
    else:
        report.info("euler-deficiency", "skipped (not a one-vertex 2-complex)")
    return 0 if report.all_passed else 1


def _cmd_reduce(args, report: ReportBuilder) -> int:
    path = Path(args.complex)
    _digest(report, path)
    x = formats.parse_complex_file(path)
    out, cert = reduce_d2(x)
    report.info("chi", f"{euler_characteristic(x)} -> {euler_characteristic(out)}")
    report.info("ranks", " ".join(str(r) for r in out.ranks))
    report.checks(verify_certificate(cert))
    formats.write_complex_file(args.out, out)
    cert_path = f"{args.out}.cert"
    formats.write_certificate_file(cert_path, cert)
    report.info("wrote", args.out)
    report.info("wrote", cert_path)
    return 0 if report.all_passed else 1


def _cmd_compare(args, report: ReportBuilder) -> int:
    left_path, right_path = Path(args.left), Path(args.right)
    _digest(report, left_path)
    _digest(report, right_path)
    left = formats.parse_complex_file(left_path)
    right = formats.parse_complex_file(right_path)
    result = schanuel_compare(left, right, budget=args.budget, seed=args.seed)
    if isinstance(result, Unknown):
        report.check(
            "equivalence", False, f"Unknown: {result.reason} after {result.tried} candidates"
        )
        return 1
    report.checks(verify_certificate(result))
    if args.out:
        formats.write_certificate_file(args.out, result)
        report.info("wrote", args.out)
    return 0 if report.all_passed else 1


def _cmd_apply(args, report: ReportBuilder) -> int:
    complex_path, script_path = Path(args.complex), Path(args.script)
    _digest(report, complex_path)
    _digest(report, script_path)
    x = formats.parse_complex_file(complex_path)
    moves = formats.parse_move_script_file(script_path, x.group)
    report.info("moves", len(moves))
    out, _ = apply_moves(x, moves)
    report.info("ranks", " ".join(str(r) for r in out.ranks))
    report.checks(validate(out))
    if args.out:
        formats.write_complex_file(args.out, out)
        report.info("wrote", args.out)
    return 0 if report.all_passed else 1


# ---------------------------------------------------------------------------
# Argument parsing and entry point.


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--structured", action="store_true", help="one JSON record per line"
    )
    parser = argparse.ArgumentParser(
        prog="d2kit",
        description="Chain-level toolkit for two-complexes over finite group rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list built-in marked groups")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser(
        "build", parents=[common], help="presentation file -> complex file"
    )
    p.add_argument("presentation")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser(
        "verify", parents=[common], help="validity, homology and the degree-3 split test"
    )
    p.add_argument("complex")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser(
        "invariants", parents=[common], help="Euler/rank bookkeeping for a file"
    )
    p.add_argument("file", help="presentation or complex file")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser(
        "reduce", parents=[common], help="trade 3-cells for degree-2 stabilization"
    )
    p.add_argument("complex")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser(
        "compare", parents=[common], help="search for a stable chain equivalence"
    )
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("apply", parents=[common], help="replay a move script")
    p.add_argument("complex")
    p.add_argument("script")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_apply)

    return parser


def main(argv: Optional[Sequence[str]] = None, stream: Optional[TextIO] = None) -> int:
    start = time.perf_counter()
    args = _build_parser().parse_args(argv)
    out = stream if stream is not None else sys.stdout
    report = ReportBuilder(args.structured, out)
    report.info("command", " ".join(["d2kit"] + list(argv if argv is not None else sys.argv[1:])))
    try:
        code = args.func(args, report)
    except (InputError, OSError) as exc:
        report.error(str(exc))
        code = 2
    except CheckError as exc:
        report.error(str(exc))
        code = 1
    report.exit(code)
    if not report.structured:
        out.write(f"# elapsed {time.perf_counter() - start:.3f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
