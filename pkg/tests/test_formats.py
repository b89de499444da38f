from __future__ import annotations

import pytest

from d2kit.chains import make_complex, two_complex, validate
from d2kit.errors import InputError
from d2kit.formats import (
    parse_certificate_file,
    parse_certificate_text,
    parse_complex_file,
    parse_complex_text,
    parse_group_table_text,
    parse_move_script_text,
    parse_presentation_text,
    write_certificate_text,
    write_complex_file,
    write_complex_text,
    write_move_script_text,
)
from d2kit.fox import presentation_complex
from d2kit.groupring import GroupRingElement, GroupRingMatrix
from d2kit.groups import Word, catalog, catalog_entry, evaluate_word, make_group
from d2kit.moves import (
    Attach,
    SplitThree,
    Stabilize,
    Transvect,
    UnitScale,
    apply_moves,
    attach_cells,
    certificate_ok,
    reduce_d2,
    stabilize,
    verify_certificate,
)

_C3_TABLE = """\
order 3
0 1 2
1 2 0
2 0 1
"""


def test_parse_presentation_with_defaults():
    marked = parse_presentation_text(
        """
        # one generator, one relator
        group cyclic 2
        gens x
        rel x x
        """
    )
    assert marked.group == make_group("cyclic", 2)
    assert marked.presentation.generators == ("x",)
    assert marked.presentation.relators == (Word(((0, 1), (0, 1))),)
    assert list(marked.genmap) == [1]


def test_parse_presentation_with_explicit_maps():
    marked = parse_presentation_text(
        """
        group cyclic 2
        gens x y
        rel x x
        rel y
        map y 0
        """
    )
    assert list(marked.genmap) == [1, 0]
    assert evaluate_word(marked, Word(((1, 1),))) == marked.group.identity


def test_parse_presentation_inverse_letters():
    marked = parse_presentation_text(
        """
        group dihedral 3
        gens a b
        rel a a a
        rel b b
        rel b a b^-1 a
        """
    )
    assert marked.presentation.relators[2] == Word(
        ((1, 1), (0, 1), (1, -1), (0, 1))
    )


def test_presentation_errors_carry_line_numbers():
    with pytest.raises(InputError, match="line 3: rel before gens"):
        parse_presentation_text("# intro\ngroup cyclic 2\nrel x x\n")
    with pytest.raises(InputError, match="undeclared generator 'z'"):
        parse_presentation_text("group cyclic 2\ngens x\nrel z\n")
    with pytest.raises(InputError, match="no group line"):
        parse_presentation_text("gens x\nrel x x\n")
    with pytest.raises(InputError, match="duplicate group"):
        parse_presentation_text("group cyclic 2\ngroup cyclic 3\n")
    with pytest.raises(InputError, match="unknown group family"):
        parse_presentation_text("group sporadic 1\n")
    with pytest.raises(InputError, match="no map line"):
        parse_presentation_text("group cyclic 2\ngens x y\nrel x x\nrel y\n")


def test_parse_group_table():
    group = parse_group_table_text(_C3_TABLE)
    reference = make_group("cyclic", 3)
    assert group.name == "table"
    assert group.order == 3
    assert group.mul == reference.mul
    assert group.inv == reference.inv
    assert group.identity == reference.identity


def test_group_table_errors():
    with pytest.raises(InputError, match="expected 'order N'"):
        parse_group_table_text("size 3\n")
    with pytest.raises(InputError, match="row 1 has 2 entries"):
        parse_group_table_text("order 3\n0 1 2\n1 2\n2 0 1\n")
    with pytest.raises(InputError, match="no identity"):
        parse_group_table_text("order 2\n0 0\n0 0\n")
    with pytest.raises(InputError, match="not closed|not associative|no inverse"):
        parse_group_table_text("order 2\n0 1\n1 1\n")


def test_complex_round_trip_whole_catalog():
    for entry in catalog():
        x = presentation_complex(entry.marked)
        text = write_complex_text(x)
        assert parse_complex_text(text) == x, entry.key
        assert write_complex_text(parse_complex_text(text)) == text, entry.key


def test_complex_round_trip_with_3_cells():
    x = presentation_complex(catalog_entry("dihedral 3").marked)
    attached = attach_cells(stabilize(x, 2)[0], [x.ranks[2], x.ranks[2] + 1])
    text = write_complex_text(attached)
    assert parse_complex_text(text) == attached


def test_complex_round_trip_inline_table_group():
    group = parse_group_table_text(_C3_TABLE)
    one = GroupRingElement.one(group)
    x = GroupRingElement.unit(group, 1)
    norm = one + x + x * x
    cplx = two_complex(
        group,
        GroupRingMatrix(group, 1, 1, {(0, 0): x - one}),
        GroupRingMatrix(group, 1, 1, {(0, 0): norm}),
    )
    text = write_complex_text(cplx)
    assert "group table inline" in text
    assert parse_complex_text(text) == cplx
    assert write_complex_text(parse_complex_text(text)) == text


def test_complex_table_file_reference(tmp_path):
    (tmp_path / "c3.tbl").write_text(_C3_TABLE, encoding="utf-8")
    group = parse_group_table_text(_C3_TABLE)
    one = GroupRingElement.one(group)
    x = GroupRingElement.unit(group, 1)
    text = (
        "complex\n"
        "group table c3.tbl\n"
        "ranks 1 1 0 0\n"
        "d1:\n"
        "(0, 0, -1*g0 + 1*g1)\n"
        "d2:\n"
        "d3:\n"
    )
    path = tmp_path / "ref.cplx"
    path.write_text(text, encoding="utf-8")
    cplx = parse_complex_file(path)
    assert cplx.group == group
    assert cplx.d1.entry(0, 0) == x - one
    with pytest.raises(InputError, match="base directory"):
        parse_complex_text(text)


def test_complex_parse_errors():
    with pytest.raises(InputError, match="expected 'complex' header"):
        parse_complex_text("group cyclic 2\n")
    with pytest.raises(InputError, match="line 3: expected 'ranks"):
        parse_complex_text("complex\ngroup cyclic 2\nranks 1 1 1\n")
    with pytest.raises(InputError, match="outside"):
        parse_complex_text(
            "complex\ngroup cyclic 2\nranks 1 1 1 0\n"
            "d1:\n(0, 5, 1*g0)\nd2:\nd3:\n"
        )
    with pytest.raises(InputError, match="duplicate entry"):
        parse_complex_text(
            "complex\ngroup cyclic 2\nranks 1 1 1 0\n"
            "d1:\n(0, 0, 1*g0)\n(0, 0, 1*g1)\nd2:\nd3:\n"
        )
    with pytest.raises(InputError, match="trailing content"):
        parse_complex_text(
            "complex\ngroup cyclic 2\nranks 1 1 1 0\n"
            "d1:\n(0, 0, -1*g0 + 1*g1)\nd2:\n(0, 0, 1*g0 + 1*g1)\nd3:\nextra\n"
        )
    with pytest.raises(InputError, match="malformed sparse triple"):
        parse_complex_text(
            "complex\ngroup cyclic 2\nranks 1 1 1 0\n"
            "d1:\n(0; 0; 1*g0)\nd2:\nd3:\n"
        )


def test_complex_file_round_trip(tmp_path):
    x = presentation_complex(catalog_entry("quaternion8").marked)
    path = tmp_path / "q8.cplx"
    write_complex_file(path, x)
    assert parse_complex_file(path) == x


def test_move_script_round_trip():
    group = make_group("dihedral", 3)
    one = GroupRingElement.one(group)
    g = GroupRingElement.unit(group, 2)
    moves = (
        Stabilize(2),
        Transvect(2, 1, 0, g - one * 2),  # multi-token literal with spaces
        UnitScale(1, 0, -g),
        Attach((1, 2)),
        SplitThree(),
    )
    text = write_move_script_text(moves)
    assert parse_move_script_text(text, group) == moves
    assert write_move_script_text(parse_move_script_text(text, group)) == text


def test_move_script_swap_expands():
    group = make_group("cyclic", 3)
    one = GroupRingElement.one(group)
    moves = parse_move_script_text("swap 2 0 1\n", group)
    assert moves == (
        Transvect(2, 1, 0, -one),
        Transvect(2, 0, 1, one),
        Transvect(2, 1, 0, -one),
    )
    x, _ = stabilize(presentation_complex(catalog_entry("cyclic 3").marked), 1)
    out, _ = apply_moves(x, moves)
    assert out.d2.entry(0, 1) == x.d2.entry(0, 0)
    assert out.d2.entry(0, 0) == -x.d2.entry(0, 1)


def test_move_script_errors():
    group = make_group("cyclic", 2)
    with pytest.raises(InputError, match="unknown move"):
        parse_move_script_text("teleport 1\n", group)
    with pytest.raises(InputError, match="expected 'stab COUNT'"):
        parse_move_script_text("stab\n", group)
    with pytest.raises(InputError, match="expected 'transvect"):
        parse_move_script_text("transvect 2 0 1\n", group)
    with pytest.raises(InputError, match="expected 'swap DEGREE I J'"):
        parse_move_script_text("swap 2 0\n", group)
    with pytest.raises(InputError, match="at least one column"):
        parse_move_script_text("attach ,\n", group)
    with pytest.raises(InputError, match="must be an integer"):
        parse_move_script_text("stab many\n", group)


def test_certificate_round_trip():
    x = presentation_complex(catalog_entry("cyclic 2").marked)
    attached = attach_cells(stabilize(x, 1)[0], [1])
    _, cert = reduce_d2(attached)
    text = write_certificate_text(cert)
    parsed = parse_certificate_text(text)
    assert parsed == cert
    assert certificate_ok(parsed)
    assert write_certificate_text(parsed) == text


def test_certificate_round_trip_nontrivial_log(tmp_path):
    x = presentation_complex(catalog_entry("dihedral 3").marked)
    attached = attach_cells(stabilize(x, 2)[0], [x.ranks[2], x.ranks[2] + 1])
    g = GroupRingElement.unit(x.group, 1)
    scrambled, _ = apply_moves(attached, [Transvect(2, 0, x.ranks[2], g)])
    _, cert = reduce_d2(scrambled)
    path = tmp_path / "reduction.cert"
    path.write_text(write_certificate_text(cert), encoding="utf-8")
    parsed = parse_certificate_file(path)
    assert parsed == cert
    assert all(c.passed for c in verify_certificate(parsed))


def test_certificate_parse_errors():
    x = presentation_complex(catalog_entry("cyclic 2").marked)
    attached = attach_cells(stabilize(x, 1)[0], [1])
    _, cert = reduce_d2(attached)
    text = write_certificate_text(cert)
    with pytest.raises(InputError, match="expected 'certificate'"):
        parse_certificate_text("complex\n" + text)
    truncated = text[: text.index("[cone]")]
    with pytest.raises(InputError, match="\\[cone\\]"):
        parse_certificate_text(truncated)
    with pytest.raises(InputError, match="trailing content"):
        parse_certificate_text(text + "leftover\n")


def test_writers_are_deterministic():
    x = presentation_complex(catalog_entry("octahedral").marked)
    assert write_complex_text(x) == write_complex_text(x)
    attached = attach_cells(stabilize(x, 1)[0], [x.ranks[2]])
    _, cert = reduce_d2(attached)
    assert write_certificate_text(cert) == write_certificate_text(cert)


def test_parsed_complexes_validate():
    # Parsing never silently fixes anything: a written-out valid complex
    # parses back to something that still passes every structural check.
    for key in ("cyclic 6", "dihedral 5", "tetrahedral"):
        x = presentation_complex(catalog_entry(key).marked)
        back = parse_complex_text(write_complex_text(x))
        assert all(c.passed for c in validate(back)), key
