"""Elementary chain-level modifications, their audit logs, and certificates.

Every operation here is a composite of a small move vocabulary: degree-2
stabilization, elementary expansion, elementary basis automorphisms
(transvections and unit scalings), attaching 3-cells along fresh degree-2
coordinates, and the inverse split.  Logs record enough to replay a run
exactly; equivalence certificates bundle a chain map whose mapping cone is
checked to be integrally acyclic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Union

from .chains import (
    ChainComplex,
    ChainMap,
    CheckResult,
    HomologyReport,
    NoSplit,
    NotInjective,
    SplittingCertificate,
    d2_split,
    euler_characteristic,
    identity_chain_map,
    integer_homology,
    is_equivalence,
    lift_chain_map,
    mapping_cone_homology,
    require_valid,
    validate_chain_map,
)
from .errors import CheckError, InputError
from .groupring import GroupRingElement, GroupRingMatrix

__all__ = [
    "Stabilize",
    "Expand",
    "Transvect",
    "UnitScale",
    "Attach",
    "SplitThree",
    "Move",
    "MoveStep",
    "MoveLog",
    "EquivalenceCertificate",
    "Unknown",
    "apply_move",
    "apply_moves",
    "empty_log",
    "replay_log",
    "stabilize",
    "elementary_expansion",
    "basis_automorphism",
    "attach_cells",
    "reduce_d2",
    "schanuel_compare",
    "verify_certificate",
    "certificate_ok",
]


# ---------------------------------------------------------------------------
# The move vocabulary.


@dataclass(frozen=True)
class Stabilize:
    """Direct sum with a free module in degree 2 (count new coordinates)."""

    count: int

    def script_line(self) -> str:
        return f"stab {self.count}"


@dataclass(frozen=True)
class Expand:
    """Elementary expansion: a cancelling cell pair in degrees (degree, degree-1)."""

    degree: int

    def script_line(self) -> str:
        return f"expand {self.degree}"


@dataclass(frozen=True)
class Transvect:
    """Basis automorphism I + coeff * E(row, col) on the degree-k coordinates."""

    degree: int
    row: int
    col: int
    coeff: GroupRingElement

    def script_line(self) -> str:
        return f"transvect {self.degree} {self.row} {self.col} {self.coeff.to_literal()}"


@dataclass(frozen=True)
class UnitScale:
    """Basis automorphism scaling one degree-k coordinate by a unit +-g."""

    degree: int
    index: int
    unit: GroupRingElement

    def script_line(self) -> str:
        return f"scale {self.degree} {self.index} {self.unit.to_literal()}"


@dataclass(frozen=True)
class Attach:
    """Attach 3-cells along the listed degree-2 coordinates (zero d2 columns)."""

    columns: tuple[int, ...]

    def script_line(self) -> str:
        return "attach " + ",".join(str(c) for c in self.columns)


@dataclass(frozen=True)
class SplitThree:
    """Remove all 3-cells when d3 is a coordinate inclusion (inverse of Attach)."""

    def script_line(self) -> str:
        return "split3"


Move = Union[Stabilize, Expand, Transvect, UnitScale, Attach, SplitThree]


@dataclass(frozen=True)
class MoveStep:
    move: Move
    before: tuple[int, int, int, int]
    after: tuple[int, int, int, int]


@dataclass(frozen=True)
class MoveLog:
    """An audited run: replaying ``steps`` from ``start`` must hit ``end`` exactly."""

    start: ChainComplex
    steps: tuple[MoveStep, ...]
    end: ChainComplex


def empty_log(x: ChainComplex) -> MoveLog:
    return MoveLog(x, (), x)


# ---------------------------------------------------------------------------
# Applying moves.


def _stabilize(x: ChainComplex, count: int) -> ChainComplex:
    if count < 0:
        raise InputError(f"cannot stabilize by {count}")
    n0, n1, n2, n3 = x.ranks
    d2 = x.d2.hstack(GroupRingMatrix.zero(x.group, n1, count))
    d3 = x.d3.vstack(GroupRingMatrix.zero(x.group, count, n3))
    return ChainComplex(x.group, (n0, n1, n2 + count, n3), x.d1, d2, d3, x.augmented)


def _expand(x: ChainComplex, degree: int) -> ChainComplex:
    n0, n1, n2, n3 = x.ranks
    group = x.group
    one = GroupRingElement.one(group)
    if degree == 1:
        if n0 < 1:
            raise InputError("expansion in degree 1 needs an existing 0-cell")
        # New edge from the base 0-cell to the new 0-cell, so the
        # augmentation still kills every d1 column.
        entries = dict(x.d1.entries)
        entries[(n0, n1)] = one
        entries[(0, n1)] = -one
        d1 = GroupRingMatrix(group, n0 + 1, n1 + 1, entries)
        d2 = GroupRingMatrix(group, n1 + 1, n2, dict(x.d2.entries))
        return ChainComplex(group, (n0 + 1, n1 + 1, n2, n3), d1, d2, x.d3, x.augmented)
    if degree == 2:
        d1 = x.d1.hstack(GroupRingMatrix.zero(group, n0, 1))
        d2 = x.d2.direct_sum(GroupRingMatrix.identity(group, 1))
        d3 = GroupRingMatrix(group, n2 + 1, n3, dict(x.d3.entries))
        return ChainComplex(group, (n0, n1 + 1, n2 + 1, n3), d1, d2, d3, x.augmented)
    if degree == 3:
        d2 = x.d2.hstack(GroupRingMatrix.zero(group, n1, 1))
        d3 = x.d3.direct_sum(GroupRingMatrix.identity(group, 1))
        return ChainComplex(group, (n0, n1, n2 + 1, n3 + 1), x.d1, d2, d3, x.augmented)
    raise InputError(f"expansion degree must be 1, 2 or 3, got {degree}")


def _elementary_pair(x: ChainComplex, move: Union[Transvect, UnitScale]):
    size = x.ranks[move.degree]
    if isinstance(move, Transvect):
        fwd = GroupRingMatrix.transvection(x.group, size, move.row, move.col, move.coeff)
        inv = GroupRingMatrix.transvection(x.group, size, move.row, move.col, -move.coeff)
        return fwd, inv
    info = move.unit.unit_info()
    if info is None:
        raise InputError("scale move needs a +-(group element) unit")
    sign, g = info
    inverse_unit = GroupRingElement.unit(x.group, x.group.inv[g], sign)
    fwd = GroupRingMatrix.unit_diagonal(x.group, size, move.index, move.unit)
    inv = GroupRingMatrix.unit_diagonal(x.group, size, move.index, inverse_unit)
    return fwd, inv


def _basis_change(x: ChainComplex, degree: int, fwd: GroupRingMatrix,
                  inv: GroupRingMatrix) -> ChainComplex:
    d1, d2, d3 = x.d1, x.d2, x.d3
    if degree == 1:
        d1 = d1 @ fwd
        d2 = inv @ d2
    elif degree == 2:
        d2 = d2 @ fwd
        d3 = inv @ d3
    elif degree == 3:
        d3 = d3 @ fwd
    else:
        raise InputError(f"basis automorphisms act in degrees 1..3, got {degree}")
    return ChainComplex(x.group, x.ranks, d1, d2, d3, x.augmented)


def _attach(x: ChainComplex, columns: tuple[int, ...]) -> ChainComplex:
    if x.ranks[3] != 0:
        raise InputError("attach expects a 2-complex (n3 = 0)")
    n2 = x.ranks[2]
    if len(set(columns)) != len(columns):
        raise InputError(f"attach columns {columns} repeat an index")
    for c in columns:
        if not 0 <= c < n2:
            raise InputError(f"attach column {c} out of range for n2 = {n2}")
        if any(j == c for (_, j) in x.d2.entries):
            raise InputError(f"attach column {c} has nonzero d2 (not a free summand)")
    one = GroupRingElement.one(x.group)
    d3 = GroupRingMatrix(
        x.group, n2, len(columns), {(c, t): one for t, c in enumerate(columns)}
    )
    return ChainComplex(
        x.group, (x.ranks[0], x.ranks[1], n2, len(columns)), x.d1, x.d2, d3, x.augmented
    )


def _coordinate_inclusion_columns(d3: GroupRingMatrix) -> Optional[list[int]]:
    """The rows hit when d3 is exactly an inclusion of distinct coordinates."""
    one = GroupRingElement.one(d3.group)
    hits: list[int] = []
    for t in range(d3.cols):
        col = [(i, e) for (i, j), e in d3.entries.items() if j == t]
        if len(col) != 1 or col[0][1] != one:
            return None
        hits.append(col[0][0])
    if len(set(hits)) != len(hits):
        return None
    return hits


def _split_three(x: ChainComplex) -> ChainComplex:
    n3 = x.ranks[3]
    if n3 == 0:
        raise InputError("split3 expects a 3-complex")
    hits = _coordinate_inclusion_columns(x.d3)
    if hits is None:
        raise InputError("split3 needs d3 in coordinate-inclusion form")
    hitset = set(hits)
    for (_, j) in x.d2.entries:
        if j in hitset:
            raise InputError("split3 needs zero d2 columns at the matched coordinates")
    keep = [c for c in range(x.ranks[2]) if c not in hitset]
    d2 = x.d2.submatrix(range(x.ranks[1]), keep)
    d3 = GroupRingMatrix.zero(x.group, len(keep), 0)
    return ChainComplex(
        x.group, (x.ranks[0], x.ranks[1], len(keep), 0), x.d1, d2, d3, x.augmented
    )


def apply_move(x: ChainComplex, move: Move) -> ChainComplex:
    if isinstance(move, Stabilize):
        return _stabilize(x, move.count)
    if isinstance(move, Expand):
        return _expand(x, move.degree)
    if isinstance(move, (Transvect, UnitScale)):
        fwd, inv = _elementary_pair(x, move)
        return _basis_change(x, move.degree, fwd, inv)
    if isinstance(move, Attach):
        return _attach(x, move.columns)
    if isinstance(move, SplitThree):
        return _split_three(x)
    raise InputError(f"unknown move {move!r}")


def apply_moves(x: ChainComplex, moves) -> tuple[ChainComplex, MoveLog]:
    """Replay a move list, recording rank bookkeeping; fails on the first bad move."""
    steps = []
    cur = x
    for idx, move in enumerate(moves):
        before = cur.ranks
        try:
            cur = apply_move(cur, move)
        except InputError as exc:
            raise InputError(f"move {idx} ({move.script_line()}): {exc}") from exc
        steps.append(MoveStep(move, before, cur.ranks))
    return cur, MoveLog(x, tuple(steps), cur)


def replay_log(log: MoveLog) -> list[CheckResult]:
    """Re-run a log from its recorded start and compare everything recorded."""
    cur = log.start
    for idx, step in enumerate(log.steps):
        if cur.ranks != step.before:
            return [CheckResult("log-replays", False, f"step {idx} before-ranks differ")]
        try:
            cur = apply_move(cur, step.move)
        except InputError as exc:
            return [CheckResult("log-replays", False, f"step {idx}: {exc}")]
        if cur.ranks != step.after:
            return [CheckResult("log-replays", False, f"step {idx} after-ranks differ")]
    ok = cur == log.end
    return [CheckResult("log-replays", ok, "" if ok else "replayed end differs")]


# ---------------------------------------------------------------------------
# Named operations.


def stabilize(x: ChainComplex, count: int) -> tuple[ChainComplex, MoveLog]:
    return apply_moves(x, [Stabilize(count)])


def _homology_padded(x: ChainComplex) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Homology entries padded to degrees 0..3 (a 2-complex reports only 0..2)."""
    entries = integer_homology(x).entries
    return entries + ((0, ()),) * (4 - len(entries))


def elementary_expansion(x: ChainComplex, degree: int) -> tuple[ChainComplex, MoveLog]:
    out, log = apply_moves(x, [Expand(degree)])
    if _homology_padded(out) != _homology_padded(x):
        raise CheckError("expansion changed integer homology")  # unreachable
    return out, log


def _classify_elementary(e: GroupRingMatrix, degree: int) -> Move:
    """Recognize a transvection or unit scaling; anything else is rejected."""
    if e.rows != e.cols:
        raise InputError("elementary matrix must be square")
    n = e.rows
    one = GroupRingElement.one(e.group)
    off = [(i, j) for (i, j) in e.entries if i != j]
    diag_ok = all(e.entry(i, i) == one for i in range(n))
    if len(off) == 1 and diag_ok:
        i, j = off[0]
        return Transvect(degree, i, j, e.entry(i, j))
    if not off:
        special = [i for i in range(n) if e.entry(i, i) != one]
        if not special and n:
            return UnitScale(degree, 0, one)
        if len(special) == 1:
            unit = e.entry(special[0], special[0])
            if unit.unit_info() is not None:
                return UnitScale(degree, special[0], unit)
    raise InputError("matrix is not elementary (one transvection or one unit scaling)")


def basis_automorphism(
    x: ChainComplex, degree: int, e: GroupRingMatrix
) -> tuple[ChainComplex, MoveLog]:
    """Apply one elementary automorphism of the degree-k coordinates."""
    if e.shape != (x.ranks[degree], x.ranks[degree]):
        raise InputError(
            f"automorphism size {e.shape} does not match rank {x.ranks[degree]}"
        )
    move = _classify_elementary(e, degree)
    out, log = apply_moves(x, [move])
    # The inverse matrix in the changed degree is a chain map old -> new;
    # its cone must be acyclic (it is an isomorphism degreewise).
    _, inv = _elementary_pair(x, move)
    maps = [
        GroupRingMatrix.identity(x.group, r) if k != degree else inv
        for k, r in enumerate(x.ranks)
    ]
    ok, _ = is_equivalence(ChainMap(x, out, tuple(maps)))
    if not ok:
        raise CheckError("elementary automorphism produced a non-acyclic cone")  # unreachable
    return out, log


def attach_cells(x: ChainComplex, columns) -> ChainComplex:
    """Attach one 3-cell per listed fresh degree-2 coordinate."""
    out, _ = apply_moves(x, [Attach(tuple(columns))])
    return out


# ---------------------------------------------------------------------------
# Certificates.


@dataclass(frozen=True)
class EquivalenceCertificate:
    """A verified chain homotopy equivalence plus the move path that led to it.

    ``chain_map`` runs between ``source`` and ``target``; the log replays the
    preparation/reduction moves and must end at one of the two endpoints.
    """

    source: ChainComplex
    target: ChainComplex
    chain_map: ChainMap
    move_log: MoveLog
    cone: HomologyReport


@dataclass(frozen=True)
class Unknown:
    """An honest non-answer from the bounded comparison search."""

    reason: str
    tried: int


def verify_certificate(cert: EquivalenceCertificate) -> list[CheckResult]:
    """Re-check an equivalence certificate from scratch."""
    out = []
    endpoints_ok = (
        cert.chain_map.source == cert.source and cert.chain_map.target == cert.target
    )
    out.append(
        CheckResult(
            "map-endpoints", endpoints_ok, "" if endpoints_ok else "chain map endpoints differ"
        )
    )
    out.extend(validate_chain_map(cert.chain_map))
    cone = mapping_cone_homology(cert.chain_map)
    out.append(
        CheckResult(
            "cone-acyclic", cone.is_trivial(),
            "" if cone.is_trivial() else "; ".join(cone.lines()),
        )
    )
    out.append(
        CheckResult(
            "cone-matches", cone == cert.cone,
            "" if cone == cert.cone else "stored cone report differs from recomputation",
        )
    )
    out.extend(replay_log(cert.move_log))
    linked = cert.move_log.end in (cert.source, cert.target)
    out.append(
        CheckResult(
            "log-endpoint", linked, "" if linked else "log does not end at an endpoint"
        )
    )
    return out


def certificate_ok(cert: EquivalenceCertificate) -> bool:
    return all(c.passed for c in verify_certificate(cert))


def _identity_certificate(x: ChainComplex) -> EquivalenceCertificate:
    f = identity_chain_map(x)
    _, cone = is_equivalence(f)
    return EquivalenceCertificate(x, x, f, empty_log(x), cone)


# ---------------------------------------------------------------------------
# Reduction of a split 3-complex to a stabilized 2-complex.


def _require_low_homology(x: ChainComplex, label: str) -> None:
    h = integer_homology(x)
    if h.entries[0] != (1, ()):
        raise CheckError(f"{label}: H0 is not Z")
    if h.entries[1] != (0, ()):
        raise CheckError(f"{label}: H1 is not zero")


def reduce_d2(x: ChainComplex) -> tuple[ChainComplex, EquivalenceCertificate]:
    """Trade the 3-cells of a split 3-complex for degree-2 stabilization.

    Requires a valid augmented complex with H0 = Z, H1 = 0 and split-injective
    d3.  Stabilizes by r = n3, changes the degree-2 basis so that d3 becomes
    the inclusion of the r fresh coordinates (the splitting phi supplies the
    elementary factors), then splits those coordinates off.  The output keeps
    d1 and d2 verbatim and its Euler characteristic is chi(x) + n3; the
    certificate's chain map runs from the stabilized input to the output.
    """
    if x.ranks[3] == 0:
        return x, _identity_certificate(x)
    require_valid(x)
    if not x.augmented:
        raise InputError("reduce expects an augmented complex")
    _require_low_homology(x, "reduce")
    split = d2_split(x)
    if isinstance(split, NotInjective):
        raise CheckError(f"NotInjective: d3 has integer kernel rank {split.kernel_rank}")
    if isinstance(split, NoSplit):
        raise CheckError(f"NoSplit: {split.detail}")
    phi = split.phi
    a = x.d3
    n2, r = x.ranks[2], x.ranks[3]

    # The block automorphism [[I,0],[-phi,I]] @ [[I,a],[0,I]] @ [[I,0],[-phi,I]]
    # carries the image of d3 onto the fresh coordinates; each factor is a
    # product of commuting transvections, applied here entry by entry.
    lower = [
        Transvect(2, n2 + t, i, -elem)
        for (t, i), elem in sorted(phi.entries.items())
    ]
    upper = [
        Transvect(2, i, n2 + t, elem)
        for (i, t), elem in sorted(a.entries.items())
    ]
    moves = [Stabilize(r), *lower, *upper, *lower, SplitThree()]
    out, log = apply_moves(x, moves)
    assert out.d1 == x.d1 and out.d2 == x.d2 and out.ranks == (*x.ranks[:3], 0)

    stabilized, _ = stabilize(x, r)
    ident = GroupRingMatrix.identity(x.group, n2)
    f2 = (ident - (a @ phi)).hstack(-a)
    f = ChainMap(
        stabilized,
        out,
        (
            GroupRingMatrix.identity(x.group, x.ranks[0]),
            GroupRingMatrix.identity(x.group, x.ranks[1]),
            f2,
            GroupRingMatrix.zero(x.group, 0, r),
        ),
    )
    ok, cone = is_equivalence(f)
    if not ok:
        raise CheckError("reduction produced a non-acyclic cone")  # unreachable by construction
    return out, EquivalenceCertificate(stabilized, out, f, log, cone)


# ---------------------------------------------------------------------------
# Stable comparison of two 2-complexes.


def _lift_or_none(src: ChainComplex, tgt: ChainComplex) -> Optional[ChainMap]:
    try:
        return lift_chain_map(src, tgt)
    except CheckError:
        return None


def _correction_atoms(src: ChainComplex, tgt: ChainComplex) -> list[tuple[int, int, int, int]]:
    """(row, col, sign, element) choices for degree-2 lift corrections.

    Rows are restricted to zero columns of the target d2, which keeps every
    corrected map a chain map without re-checking commutation.
    """
    nonzero = {i for (_, i) in tgt.d2.entries}
    free_rows = [i for i in range(tgt.ranks[2]) if i not in nonzero]
    return [
        (i, j, sign, g)
        for i in free_rows
        for j in range(src.ranks[2])
        for sign in (1, -1)
        for g in range(src.group.order)
    ]


def _corrected(f: ChainMap, atoms) -> ChainMap:
    delta_entries: dict[tuple[int, int], GroupRingElement] = {}
    for i, j, sign, g in atoms:
        elem = GroupRingElement.unit(f.source.group, g, sign)
        key = (i, j)
        delta_entries[key] = delta_entries.get(key, GroupRingElement.zero(f.source.group)) + elem
    delta = GroupRingMatrix(
        f.source.group, f.target.ranks[2], f.source.ranks[2], delta_entries
    )
    maps = (f.maps[0], f.maps[1], f.maps[2] + delta, f.maps[3])
    return ChainMap(f.source, f.target, maps)


def schanuel_compare(
    left: ChainComplex,
    right: ChainComplex,
    budget: int = 2000,
    seed: int = 0,
) -> Union[EquivalenceCertificate, Unknown]:
    """Try to certify stable chain equivalence of two 2-complexes.

    Stabilizes the smaller Euler characteristic up to the larger, lifts a
    chain map both ways, and on cone failure searches small degree-2 lift
    corrections (single entries and pairs, coefficients +-g) up to ``budget``
    candidates.  A returned certificate is always re-verified; everything
    else is an honest Unknown.  ``seed`` permutes the search order; 0 keeps
    the canonical order.
    """
    if left.group != right.group:
        raise InputError("comparison needs complexes over the same group")
    if not (left.is_two_complex and right.is_two_complex):
        raise InputError("comparison expects 2-complexes (n3 = 0)")
    if not (left.augmented and right.augmented):
        raise InputError("comparison expects augmented complexes")
    require_valid(left)
    require_valid(right)
    _require_low_homology(left, "left")
    _require_low_homology(right, "right")

    gap = euler_characteristic(right) - euler_characteristic(left)
    if gap >= 0:
        a, log = apply_moves(left, [Stabilize(gap)] if gap else [])
        b = right
    else:
        a = left
        b, log = apply_moves(right, [Stabilize(-gap)] if -gap else [])

    if a == b:
        f = identity_chain_map(a)
        _, cone = is_equivalence(f)
        return EquivalenceCertificate(a, b, f, log, cone)

    tried = 0
    for src, tgt in ((a, b), (b, a)):
        base = _lift_or_none(src, tgt)
        if base is None:
            continue
        tried += 1
        ok, cone = is_equivalence(base)
        if ok:
            return EquivalenceCertificate(src, tgt, base, log, cone)
        atoms = _correction_atoms(src, tgt)
        if seed:
            random.Random(seed).shuffle(atoms)
        for bundle in itertools.chain(
            ((atom,) for atom in atoms), itertools.combinations(atoms, 2)
        ):
            if tried >= budget:
                return Unknown("budget exhausted", tried)
            tried += 1
            candidate = _corrected(base, bundle)
            ok, cone = is_equivalence(candidate)
            if ok:
                return EquivalenceCertificate(src, tgt, candidate, log, cone)
    return Unknown("correction search exhausted", tried)
