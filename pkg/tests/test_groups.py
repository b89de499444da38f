from __future__ import annotations

import random

import pytest

from d2kit.errors import InputError
from d2kit.groups import (
    Presentation,
    Word,
    bind_presentation,
    catalog,
    catalog_entry,
    evaluate_word,
    family_generators,
    make_group,
    standard_marked_group,
    verify_group,
)

_EXPECTED_ORDERS = {
    "trivial": 1,
    "cyclic 1": 1,
    "cyclic 2": 2,
    "cyclic 3": 3,
    "cyclic 4": 4,
    "cyclic 5": 5,
    "cyclic 6": 6,
    "cyclic 7": 7,
    "cyclic 8": 8,
    "dihedral 2": 4,
    "dihedral 3": 6,
    "dihedral 4": 8,
    "dihedral 5": 10,
    "quaternion8": 8,
    "tetrahedral": 12,
    "octahedral": 24,
    "icosahedral": 60,
}


def test_catalog_orders_and_axioms():
    seen = {}
    for entry in catalog():
        verify_group(entry.marked.group)
        seen[entry.key] = entry.marked.group.order
    assert seen == _EXPECTED_ORDERS


def test_catalog_is_deterministic():
    keys = [entry.key for entry in catalog()]
    assert keys == list(_EXPECTED_ORDERS)
    assert catalog() is catalog()


def test_make_group_rejects_bad_parameters():
    with pytest.raises(InputError):
        make_group("cyclic", 0)
    with pytest.raises(InputError):
        make_group("dihedral", 1)
    with pytest.raises(InputError):
        make_group("nosuch")
    with pytest.raises(InputError):
        make_group("tetrahedral", 3)
    with pytest.raises(InputError):
        make_group("cyclic")


def test_cyclic_structure():
    g = make_group("cyclic", 4)
    x = family_generators("cyclic", 4)[0]
    # x * x^3 is the identity.
    cube = g.mul[g.mul[x][x]][x]
    assert g.mul[x][cube] == g.identity
    assert g.inv[x] == cube


def test_evaluate_word_examples():
    marked = standard_marked_group("cyclic", 4)
    x = marked.genmap[0]
    assert evaluate_word(marked, Word(())) == marked.group.identity
    w = Word(((0, 1),) * 5)  # x^5 = x
    assert evaluate_word(marked, w) == x
    # Dihedral: b a b^-1 = a^-1 for the catalog presentation <a,b | a^n, b^2, (ab)^2>.
    dih = standard_marked_group("dihedral", 3)
    a, _ = dih.genmap
    conj = Word(((1, 1), (0, 1), (1, -1)))
    assert evaluate_word(dih, conj) == dih.group.inv[a]


def test_evaluate_word_is_a_homomorphism():
    rng = random.Random(2024)
    for key in ("cyclic 6", "dihedral 4", "quaternion8", "icosahedral"):
        marked = catalog_entry(key).marked
        g = marked.presentation.generator_count
        for _ in range(25):
            u = Word(tuple((rng.randrange(g), rng.choice((1, -1))) for _ in range(rng.randrange(6))))
            v = Word(tuple((rng.randrange(g), rng.choice((1, -1))) for _ in range(rng.randrange(6))))
            uv = Word(u.letters + v.letters)
            lhs = evaluate_word(marked, uv)
            rhs = marked.group.mul[evaluate_word(marked, u)][evaluate_word(marked, v)]
            assert lhs == rhs


def test_bind_presentation_rejects_bad_relator():
    g = make_group("cyclic", 2)
    pres = Presentation(("x",), (Word(((0, 1),) * 3),))  # x^3 = x != e
    with pytest.raises(InputError, match="relator 0"):
        bind_presentation(g, pres, family_generators("cyclic", 2))


def test_bind_presentation_rejects_non_generating():
    g = make_group("cyclic", 4)
    pres = Presentation(("x",), (Word(((0, 1), (0, 1))),))  # x^2 with x -> g2
    with pytest.raises(InputError, match="reach only"):
        bind_presentation(g, pres, (2,))


def test_bind_presentation_rejects_bad_genmap():
    g = make_group("cyclic", 2)
    pres = Presentation(("x",), ())
    with pytest.raises(InputError):
        bind_presentation(g, pres, (5,))
    with pytest.raises(InputError):
        bind_presentation(g, pres, ())


def test_word_validation():
    with pytest.raises(InputError):
        Word(((0, 2),))
    with pytest.raises(InputError):
        Word(((-1, 1),))
    w = Word(((0, 1), (1, -1)))
    assert w.inverse().letters == ((1, 1), (0, -1))


def test_presentation_counts():
    pres = catalog_entry("icosahedral").marked.presentation
    assert pres.generator_count == 2
    assert pres.relator_count == 3
    assert pres.deficiency() == -1
    assert pres.euler_characteristic() == 2


def test_known_deficiencies():
    for entry in catalog():
        family = entry.key.split()[0]
        expected = 0 if family in ("trivial", "cyclic", "quaternion8") else -1
        assert entry.known_deficiency == expected
