"""Free differential calculus on marked groups, and presentation complexes.

Derivatives are evaluated straight into the group ring: only the image of a
free derivative under the marking homomorphism is ever needed, so elements of
the free group ring are never materialized.
"""

from __future__ import annotations

from .chains import ChainComplex, two_complex
from .errors import InputError
from .groupring import GroupRingElement, GroupRingMatrix
from .groups import MarkedGroup, Word
from . import intlinalg
from .groupring import integerize

__all__ = [
    "fox_derivative",
    "fox_jacobian",
    "presentation_complex",
    "relation_module_rank",
]


def fox_derivative(marked: MarkedGroup, word: Word, gen: int) -> GroupRingElement:
    """The image in ZG of the free derivative of ``word`` by generator ``gen``.

    Recursion d(x_j u) = delta_ij + x_j * du unrolled as a single left-to-right
    walk: a positive letter contributes the prefix before it, a negative letter
    contributes minus the prefix through it.
    """
    count = marked.presentation.generator_count
    if not 0 <= gen < count:
        raise InputError(f"generator index {gen} out of range for {count} generators")
    group = marked.group
    mul = group.mul
    inv = group.inv
    coeffs: dict[int, int] = {}
    prefix = group.identity
    for j, exp in word.letters:
        if not 0 <= j < count:
            raise InputError(f"letter uses generator {j}, presentation has {count}")
        img = marked.genmap[j]
        if exp == 1:
            if j == gen:
                coeffs[prefix] = coeffs.get(prefix, 0) + 1
            prefix = mul[prefix][img]
        else:
            prefix = mul[prefix][inv[img]]
            if j == gen:
                coeffs[prefix] = coeffs.get(prefix, 0) - 1
    return GroupRingElement(group, coeffs)


def fox_jacobian(marked: MarkedGroup) -> GroupRingMatrix:
    """Generator-by-relator matrix of Fox derivatives (the degree-2 boundary)."""
    g = marked.presentation.generator_count
    entries = {}
    for j, rel in enumerate(marked.presentation.relators):
        for i in range(g):
            der = fox_derivative(marked, rel, i)
            if not der.is_zero():
                entries[(i, j)] = der
    return GroupRingMatrix(
        marked.group, g, len(marked.presentation.relators), entries
    )


def presentation_complex(marked: MarkedGroup) -> ChainComplex:
    """The chain complex of the presentation 2-complex: ranks (1, g, r).

    One 0-cell, an edge per generator with boundary image(x_i) - 1, a 2-cell
    per relator with the Fox derivative column.
    """
    group = marked.group
    one = GroupRingElement.one(group)
    d1_entries = {}
    for i, img in enumerate(marked.genmap):
        elem = GroupRingElement.unit(group, img) - one
        if not elem.is_zero():
            d1_entries[(0, i)] = elem
    d1 = GroupRingMatrix(group, 1, marked.presentation.generator_count, d1_entries)
    return two_complex(group, d1, fox_jacobian(marked))


def relation_module_rank(marked: MarkedGroup) -> int:
    """Z-rank of the degree-1 cycles of the presentation complex.

    For a finite group on g generators this equals (g - 1) * |G| + 1.
    """
    x = presentation_complex(marked)
    n = marked.group.order
    return intlinalg.kernel_rank(
        integerize(x.d1), (x.ranks[0] * n, x.ranks[1] * n)
    )
