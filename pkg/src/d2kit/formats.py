"""Line-oriented text formats: presentations, group tables, complexes,
move scripts and equivalence certificates.

All formats are UTF-8, one item per line, with ``#`` comments and blank
lines ignored.  Writers emit canonical, deterministic text (sorted sparse
entries, fixed section order) so byte comparison of outputs is meaningful.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional, Sequence, Union

from .chains import ChainComplex, ChainMap, HomologyReport
from .errors import InputError
from .groupring import GroupRingElement, GroupRingMatrix
from .groups import (
    FiniteGroup,
    Presentation,
    Word,
    bind_presentation,
    family_generators,
    make_group,
    verify_group,
)
from .moves import (
    Attach,
    EquivalenceCertificate,
    Expand,
    Move,
    MoveLog,
    SplitThree,
    Stabilize,
    Transvect,
    UnitScale,
    apply_moves,
)

__all__ = [
    "parse_presentation_text",
    "parse_presentation_file",
    "parse_group_table_text",
    "parse_group_table_file",
    "parse_complex_text",
    "parse_complex_file",
    "write_complex_text",
    "write_complex_file",
    "parse_move_script_text",
    "parse_move_script_file",
    "write_move_script_text",
    "write_certificate_text",
    "write_certificate_file",
    "parse_certificate_text",
    "parse_certificate_file",
]


# ---------------------------------------------------------------------------
# Shared line machinery.


class _Cursor:
    """Comment-stripped non-blank lines with positions, consumed in order."""

    def __init__(self, text: str):
        self.lines: list[tuple[int, str]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.lines.append((lineno, body))
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def peek(self) -> Optional[str]:
        return None if self.done() else self.lines[self.pos][1]

    def next(self, expect: str) -> str:
        if self.done():
            raise InputError(f"unexpected end of input; expected {expect}")
        body = self.lines[self.pos][1]
        self.pos += 1
        return body

    def fail(self, message: str) -> InputError:
        lineno = self.lines[self.pos - 1][0] if self.pos else 0
        return InputError(f"line {lineno}: {message}")


def _int(cursor: _Cursor, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise cursor.fail(f"{what} must be an integer, got {token!r}") from None


# ---------------------------------------------------------------------------
# Group references and multiplication tables.

_PARAMETRIC_FAMILIES = ("cyclic", "dihedral")
_PLAIN_FAMILIES = ("trivial", "quaternion8", "tetrahedral", "octahedral", "icosahedral")


def _family_group(cursor: _Cursor, tokens: Sequence[str]) -> FiniteGroup:
    family = tokens[0]
    if family in _PARAMETRIC_FAMILIES:
        if len(tokens) != 2:
            raise cursor.fail(f"family {family!r} needs one parameter")
        return make_group(family, _int(cursor, tokens[1], "group parameter"))
    if family in _PLAIN_FAMILIES:
        if len(tokens) != 1:
            raise cursor.fail(f"family {family!r} takes no parameter")
        return make_group(family)
    raise cursor.fail(f"unknown group family {family!r}")


def _table_group_from_cursor(cursor: _Cursor) -> FiniteGroup:
    header = cursor.next("order line").split()
    if len(header) != 2 or header[0] != "order":
        raise cursor.fail("expected 'order N'")
    n = _int(cursor, header[1], "group order")
    if n < 1:
        raise cursor.fail(f"group order must be positive, got {n}")
    mul = []
    for i in range(n):
        row = cursor.next(f"table row {i}").split()
        if len(row) != n:
            raise cursor.fail(f"table row {i} has {len(row)} entries, expected {n}")
        mul.append(tuple(_int(cursor, t, "table entry") for t in row))
    table = tuple(mul)
    identity = None
    for e in range(n):
        if all(table[e][a] == a and table[a][e] == a for a in range(n)):
            identity = e
            break
    if identity is None:
        raise cursor.fail("table has no identity element")
    inv = []
    for a in range(n):
        for b in range(n):
            if table[a][b] == identity and table[b][a] == identity:
                inv.append(b)
                break
        else:
            raise cursor.fail(f"element {a} has no inverse")
    group = FiniteGroup("table", n, table, tuple(inv), identity)
    verify_group(group)
    return group


def parse_group_table_text(text: str) -> FiniteGroup:
    """A standalone multiplication-table file: ``order N`` then N rows of N indices."""
    cursor = _Cursor(text)
    group = _table_group_from_cursor(cursor)
    if not cursor.done():
        raise cursor.fail("trailing content after the multiplication table")
    return group


def parse_group_table_file(path: Union[str, Path]) -> FiniteGroup:
    return parse_group_table_text(Path(path).read_text(encoding="utf-8"))


def _parse_group_line(cursor: _Cursor, base_dir: Optional[Path]) -> FiniteGroup:
    tokens = cursor.next("group line").split()
    if not tokens or tokens[0] != "group":
        raise cursor.fail("expected a 'group ...' line")
    body = tokens[1:]
    if not body:
        raise cursor.fail("empty group reference")
    if body[0] == "table":
        if body == ["table", "inline"]:
            return _table_group_from_cursor(cursor)
        if len(body) == 2:
            if base_dir is None:
                raise cursor.fail("table file references need a base directory")
            return parse_group_table_file(base_dir / body[1])
        raise cursor.fail("expected 'group table inline' or 'group table FILE'")
    return _family_group(cursor, body)


def _group_reference_lines(group: FiniteGroup) -> list[str]:
    tokens = group.name.split()
    try:
        if _family_group(_Cursor(f"group {group.name}"), tokens) == group:
            return [f"group {group.name}"]
    except InputError:
        pass
    lines = ["group table inline", f"order {group.order}"]
    lines.extend(" ".join(str(v) for v in row) for row in group.mul)
    return lines


# ---------------------------------------------------------------------------
# Presentation files.

_NEG = re.compile(r"^(\w+)\^-1$")


def parse_presentation_text(text: str):
    """Parse ``group``/``gens``/``rel``/``map`` lines into a bound marked group.

    Generators without an explicit ``map`` line default positionally to the
    family's standard generators.
    """
    cursor = _Cursor(text)
    group: Optional[FiniteGroup] = None
    family_tokens: Optional[list[str]] = None
    gens: Optional[tuple[str, ...]] = None
    relators: list[Word] = []
    explicit: dict[str, int] = {}
    while not cursor.done():
        tokens = cursor.next("presentation line").split()
        key = tokens[0]
        if key == "group":
            if group is not None:
                raise cursor.fail("duplicate group line")
            family_tokens = tokens[1:]
            group = _family_group(cursor, family_tokens)
        elif key == "gens":
            if gens is not None:
                raise cursor.fail("duplicate gens line")
            gens = tuple(tokens[1:])
        elif key == "rel":
            if gens is None:
                raise cursor.fail("rel before gens")
            letters = []
            for tok in tokens[1:]:
                m = _NEG.match(tok)
                name, exp = (m.group(1), -1) if m else (tok, 1)
                if name not in gens:
                    raise cursor.fail(f"relator uses undeclared generator {name!r}")
                letters.append((gens.index(name), exp))
            relators.append(Word(tuple(letters)))
        elif key == "map":
            if gens is None:
                raise cursor.fail("map before gens")
            if len(tokens) != 3:
                raise cursor.fail("expected 'map NAME INDEX'")
            if tokens[1] not in gens:
                raise cursor.fail(f"map names undeclared generator {tokens[1]!r}")
            explicit[tokens[1]] = _int(cursor, tokens[2], "generator image")
        else:
            raise cursor.fail(f"unknown presentation directive {key!r}")
    if group is None or family_tokens is None:
        raise InputError("presentation file has no group line")
    if gens is None:
        gens = ()
    defaults = family_generators(
        family_tokens[0],
        int(family_tokens[1]) if len(family_tokens) == 2 else None,
    )
    genmap = []
    for i, name in enumerate(gens):
        if name in explicit:
            genmap.append(explicit[name])
        elif i < len(defaults):
            genmap.append(defaults[i])
        else:
            raise InputError(
                f"generator {name!r} has no map line and no family default"
            )
    presentation = Presentation(gens, tuple(relators))
    return bind_presentation(group, presentation, genmap)


def parse_presentation_file(path: Union[str, Path]):
    return parse_presentation_text(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Complex files.

_TRIPLE = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(.*?)\s*\)$")


def _parse_block(
    cursor: _Cursor, name: str, group: FiniteGroup, rows: int, cols: int
) -> GroupRingMatrix:
    header = cursor.next(f"{name}: header")
    if header != f"{name}:":
        raise cursor.fail(f"expected '{name}:', got {header!r}")
    entries: dict[tuple[int, int], GroupRingElement] = {}
    while not cursor.done():
        nxt = cursor.peek()
        assert nxt is not None
        if not nxt.startswith("("):
            break
        m = _TRIPLE.match(cursor.next("sparse triple"))
        if not m:
            raise cursor.fail("malformed sparse triple")
        i, j = int(m.group(1)), int(m.group(2))
        if (i, j) in entries:
            raise cursor.fail(f"duplicate entry ({i}, {j}) in {name}")
        if not (0 <= i < rows and 0 <= j < cols):
            raise cursor.fail(f"entry ({i}, {j}) outside {rows} x {cols} {name}")
        entries[(i, j)] = GroupRingElement.from_literal(group, m.group(3))
    return GroupRingMatrix(group, rows, cols, entries)


def _complex_from_cursor(cursor: _Cursor, base_dir: Optional[Path]) -> ChainComplex:
    header = cursor.next("complex header")
    if header != "complex":
        raise cursor.fail(f"expected 'complex' header, got {header!r}")
    group = _parse_group_line(cursor, base_dir)
    ranks_line = cursor.next("ranks line").split()
    if len(ranks_line) != 5 or ranks_line[0] != "ranks":
        raise cursor.fail("expected 'ranks n0 n1 n2 n3'")
    ranks = tuple(_int(cursor, t, "rank") for t in ranks_line[1:])
    if any(r < 0 for r in ranks):
        raise cursor.fail("ranks must be non-negative")
    d1 = _parse_block(cursor, "d1", group, ranks[0], ranks[1])
    d2 = _parse_block(cursor, "d2", group, ranks[1], ranks[2])
    d3 = _parse_block(cursor, "d3", group, ranks[2], ranks[3])
    return ChainComplex(group, (ranks[0], ranks[1], ranks[2], ranks[3]), d1, d2, d3)


def parse_complex_text(text: str, base_dir: Optional[Union[str, Path]] = None) -> ChainComplex:
    cursor = _Cursor(text)
    x = _complex_from_cursor(cursor, Path(base_dir) if base_dir else None)
    if not cursor.done():
        raise cursor.fail("trailing content after the complex")
    return x


def parse_complex_file(path: Union[str, Path]) -> ChainComplex:
    path = Path(path)
    cursor = _Cursor(path.read_text(encoding="utf-8"))
    x = _complex_from_cursor(cursor, path.parent)
    if not cursor.done():
        raise cursor.fail("trailing content after the complex")
    return x


def _complex_lines(x: ChainComplex) -> list[str]:
    lines = ["complex"]
    lines.extend(_group_reference_lines(x.group))
    lines.append("ranks " + " ".join(str(r) for r in x.ranks))
    for name, mat in (("d1", x.d1), ("d2", x.d2), ("d3", x.d3)):
        lines.append(f"{name}:")
        for (i, j), elem in mat.items_sorted():
            lines.append(f"({i}, {j}, {elem.to_literal()})")
    return lines


def write_complex_text(x: ChainComplex) -> str:
    return "\n".join(_complex_lines(x)) + "\n"


def write_complex_file(path: Union[str, Path], x: ChainComplex) -> None:
    Path(path).write_text(write_complex_text(x), encoding="utf-8")


# ---------------------------------------------------------------------------
# Move scripts.


def _parse_move_line(cursor: _Cursor, body: str, group: FiniteGroup) -> list[Move]:
    tokens = body.split()
    key = tokens[0]
    if key == "stab":
        if len(tokens) != 2:
            raise cursor.fail("expected 'stab COUNT'")
        return [Stabilize(_int(cursor, tokens[1], "count"))]
    if key == "expand":
        if len(tokens) != 2:
            raise cursor.fail("expected 'expand DEGREE'")
        return [Expand(_int(cursor, tokens[1], "degree"))]
    if key == "transvect":
        if len(tokens) < 5:
            raise cursor.fail("expected 'transvect DEGREE ROW COL LITERAL'")
        degree, row, col = (_int(cursor, t, "transvect index") for t in tokens[1:4])
        coeff = GroupRingElement.from_literal(group, " ".join(tokens[4:]))
        return [Transvect(degree, row, col, coeff)]
    if key == "scale":
        if len(tokens) < 4:
            raise cursor.fail("expected 'scale DEGREE INDEX LITERAL'")
        degree, index = (_int(cursor, t, "scale index") for t in tokens[1:3])
        unit = GroupRingElement.from_literal(group, " ".join(tokens[3:]))
        return [UnitScale(degree, index, unit)]
    if key == "swap":
        if len(tokens) != 4:
            raise cursor.fail("expected 'swap DEGREE I J'")
        degree, i, j = (_int(cursor, t, "swap index") for t in tokens[1:4])
        one = GroupRingElement.one(group)
        # The three-transvection factorization of [[0,1],[-1,0]] on (i, j).
        return [
            Transvect(degree, j, i, -one),
            Transvect(degree, i, j, one),
            Transvect(degree, j, i, -one),
        ]
    if key == "attach":
        if len(tokens) != 2:
            raise cursor.fail("expected 'attach COL,COL,...'")
        cols = tuple(
            _int(cursor, t, "attach column") for t in tokens[1].split(",") if t
        )
        if not cols:
            raise cursor.fail("attach needs at least one column")
        return [Attach(cols)]
    if key == "split3":
        if len(tokens) != 1:
            raise cursor.fail("split3 takes no arguments")
        return [SplitThree()]
    raise cursor.fail(f"unknown move {key!r}")


def parse_move_script_text(text: str, group: FiniteGroup) -> tuple[Move, ...]:
    cursor = _Cursor(text)
    moves: list[Move] = []
    while not cursor.done():
        moves.extend(_parse_move_line(cursor, cursor.next("move line"), group))
    return tuple(moves)


def parse_move_script_file(path: Union[str, Path], group: FiniteGroup) -> tuple[Move, ...]:
    return parse_move_script_text(Path(path).read_text(encoding="utf-8"), group)


def write_move_script_text(moves: Sequence[Move]) -> str:
    return "".join(move.script_line() + "\n" for move in moves)


# ---------------------------------------------------------------------------
# Certificates.

_HOMOLOGY_LINE = re.compile(r"^H(\d+): rank (\d+) torsion \[([0-9,]*)\]$")


def _map_lines(f: ChainMap) -> list[str]:
    lines = []
    for k, mat in enumerate(f.maps):
        lines.append(f"f{k}:")
        for (i, j), elem in mat.items_sorted():
            lines.append(f"({i}, {j}, {elem.to_literal()})")
    return lines


def write_certificate_text(cert: EquivalenceCertificate) -> str:
    lines = ["certificate"]
    for section, x in (("[source]", cert.source), ("[target]", cert.target)):
        lines.append(section)
        lines.extend(_complex_lines(x))
    lines.append("[map]")
    lines.extend(_map_lines(cert.chain_map))
    lines.append("[log-start]")
    lines.extend(_complex_lines(cert.move_log.start))
    lines.append("[log]")
    lines.extend(step.move.script_line() for step in cert.move_log.steps)
    lines.append("[cone]")
    lines.extend(cert.cone.lines())
    return "\n".join(lines) + "\n"


def write_certificate_file(path: Union[str, Path], cert: EquivalenceCertificate) -> None:
    Path(path).write_text(write_certificate_text(cert), encoding="utf-8")


def _expect(cursor: _Cursor, literal: str) -> None:
    got = cursor.next(literal)
    if got != literal:
        raise cursor.fail(f"expected {literal!r}, got {got!r}")


def _parse_map_blocks(
    cursor: _Cursor, source: ChainComplex, target: ChainComplex
) -> ChainMap:
    maps = []
    for k in range(4):
        header = cursor.next(f"f{k}: header")
        if header != f"f{k}:":
            raise cursor.fail(f"expected 'f{k}:', got {header!r}")
        entries: dict[tuple[int, int], GroupRingElement] = {}
        while not cursor.done():
            nxt = cursor.peek()
            assert nxt is not None
            if not nxt.startswith("("):
                break
            m = _TRIPLE.match(cursor.next("sparse triple"))
            if not m:
                raise cursor.fail("malformed sparse triple")
            i, j = int(m.group(1)), int(m.group(2))
            entries[(i, j)] = GroupRingElement.from_literal(source.group, m.group(3))
        maps.append(
            GroupRingMatrix(source.group, target.ranks[k], source.ranks[k], entries)
        )
    return ChainMap(source, target, tuple(maps))


def _parse_cone_block(cursor: _Cursor) -> HomologyReport:
    entries = []
    while not cursor.done():
        nxt = cursor.peek()
        assert nxt is not None
        m = _HOMOLOGY_LINE.match(nxt)
        if not m:
            break
        cursor.next("homology line")
        if int(m.group(1)) != len(entries):
            raise cursor.fail("homology degrees out of order")
        torsion = tuple(int(t) for t in m.group(3).split(",") if t)
        entries.append((int(m.group(2)), torsion))
    if not entries:
        raise cursor.fail("empty cone section")
    return HomologyReport(tuple(entries))


def parse_certificate_text(
    text: str, base_dir: Optional[Union[str, Path]] = None
) -> EquivalenceCertificate:
    """Rebuild a certificate; the move log is reconstructed by replaying."""
    cursor = _Cursor(text)
    base = Path(base_dir) if base_dir else None
    _expect(cursor, "certificate")
    _expect(cursor, "[source]")
    source = _complex_from_cursor(cursor, base)
    _expect(cursor, "[target]")
    target = _complex_from_cursor(cursor, base)
    _expect(cursor, "[map]")
    chain_map = _parse_map_blocks(cursor, source, target)
    _expect(cursor, "[log-start]")
    log_start = _complex_from_cursor(cursor, base)
    _expect(cursor, "[log]")
    move_lines: list[Move] = []
    while not cursor.done() and cursor.peek() != "[cone]":
        move_lines.extend(
            _parse_move_line(cursor, cursor.next("move line"), log_start.group)
        )
    _, log = apply_moves(log_start, move_lines)
    _expect(cursor, "[cone]")
    cone = _parse_cone_block(cursor)
    if not cursor.done():
        raise cursor.fail("trailing content after the certificate")
    return EquivalenceCertificate(source, target, chain_map, log, cone)


def parse_certificate_file(path: Union[str, Path]) -> EquivalenceCertificate:
    path = Path(path)
    return parse_certificate_text(path.read_text(encoding="utf-8"), path.parent)
