"""Finite groups as explicit multiplication tables, plus marked presentations.

Every group handled here is small enough to store its full multiplication
table: elements are the indices 0..order-1, and all derived structure
(identity, inverses, generator images) refers to those indices.  A
``MarkedGroup`` couples a finite presentation with a choice of element for
each abstract generator, which is the data the chain-level constructions
downstream actually consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import InputError

__all__ = [
    "FiniteGroup",
    "Word",
    "Presentation",
    "MarkedGroup",
    "CatalogEntry",
    "verify_group",
    "make_group",
    "family_generators",
    "bind_presentation",
    "evaluate_word",
    "catalog",
    "catalog_entry",
    "standard_marked_group",
]


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table on 0..order-1."""

    name: str
    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    identity: int = 0
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        n = self.order
        if n < 1:
            raise InputError(f"group order must be positive, got {n}")
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise InputError(f"multiplication table of {self.name!r} is not {n} x {n}")
        full = set(range(n))
        for i, row in enumerate(self.mul):
            if set(row) != full:
                raise InputError(f"row {i} of {self.name!r} is not a permutation")
        for j in range(n):
            if {row[j] for row in self.mul} != full:
                raise InputError(f"column {j} of {self.name!r} is not a permutation")
        e = self.identity
        if not 0 <= e < n:
            raise InputError(f"identity index {e} out of range")
        for a in range(n):
            if self.mul[e][a] != a or self.mul[a][e] != a:
                raise InputError(f"index {e} is not an identity for {self.name!r}")
        if len(self.inv) != n:
            raise InputError("inverse table length mismatch")
        for a in range(n):
            b = self.inv[a]
            if not 0 <= b < n or self.mul[a][b] != e or self.mul[b][a] != e:
                raise InputError(f"bad inverse for element {a} of {self.name!r}")
        if self.labels is not None and len(self.labels) != n:
            raise InputError("label table length mismatch")

    def multiply(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def label(self, a: int) -> str:
        if self.labels is None:
            return f"g{a}"
        return self.labels[a]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


def verify_group(group: FiniteGroup) -> None:
    """Check the group axioms exhaustively; associativity is O(order^3)."""
    mul = group.mul
    for a in range(group.order):
        for b in range(group.order):
            ab = mul[a][b]
            row_ab = mul[ab]
            row_b = mul[b]
            for c in range(group.order):
                if row_ab[c] != mul[a][row_b[c]]:
                    raise InputError(
                        f"associativity fails in {group.name!r} at ({a},{b},{c})"
                    )
    # Table shape, identity and inverses are rechecked by the constructor.
    FiniteGroup(
        group.name, group.order, group.mul, group.inv, group.identity, group.labels
    )


# ---------------------------------------------------------------------------
# Construction of the built-in families.


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # Left-to-right composition: apply p first, then q.
    return tuple(q[i] for i in p)


def _cycle_label(p: tuple[int, ...]) -> str:
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = p[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = p[nxt]
        parts.append("(" + " ".join(str(i) for i in cyc) + ")")
    return "".join(parts) if parts else "e"


def _closure_group(
    name: str, degree: int, gens: Sequence[tuple[int, ...]]
) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Close a set of permutations under composition; returns (group, gen indices)."""
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for g in gens:
            nxt = _compose(cur, g)
            if nxt not in index:
                index[nxt] = len(elems)
                elems.append(nxt)
    n = len(elems)
    mul = tuple(
        tuple(index[_compose(elems[i], elems[j])] for j in range(n)) for i in range(n)
    )
    inv = tuple(mul[i].index(0) for i in range(n))
    labels = tuple(_cycle_label(p) for p in elems)
    group = FiniteGroup(name, n, mul, inv, 0, labels)
    return group, tuple(index[g] for g in gens)


def _cyclic_group(n: int) -> tuple[FiniteGroup, tuple[int, ...]]:
    name = f"cyclic {n}"
    mul = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    inv = tuple((-i) % n for i in range(n))
    labels = tuple("e" if i == 0 else ("x" if i == 1 else f"x^{i}") for i in range(n))
    gen = 1 if n > 1 else 0
    return FiniteGroup(name, n, mul, inv, 0, labels), (gen,)


def _dihedral_group(n: int) -> tuple[FiniteGroup, tuple[int, ...]]:
    # Elements a^r b^s with 0 <= r < n, s in {0,1}, index r + n*s.
    # The reflection inverts the rotation: b a = a^-1 b.
    name = f"dihedral {n}"
    order = 2 * n

    def prod(i: int, j: int) -> int:
        r1, s1 = i % n, i // n
        r2, s2 = j % n, j // n
        r = (r1 + (r2 if s1 == 0 else -r2)) % n
        return r + n * ((s1 + s2) % 2)

    mul = tuple(tuple(prod(i, j) for j in range(order)) for i in range(order))
    inv = tuple(mul[i].index(0) for i in range(order))

    def lab(i: int) -> str:
        r, s = i % n, i // n
        rot = "e" if r == 0 else ("a" if r == 1 else f"a^{r}")
        if s == 0:
            return rot
        return "b" if r == 0 else f"{rot} b"

    labels = tuple(lab(i) for i in range(order))
    return FiniteGroup(name, order, mul, inv, 0, labels), (1, n)


_QUAT_AXIS = {
    # (axis1, axis2) -> (sign flip, axis) for the units 1, i, j, k.
    (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
    (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
    (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
    (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
}


def _quaternion_group() -> tuple[FiniteGroup, tuple[int, ...]]:
    # Index t + 4*s for the unit quaternion (-1)^s * {1, i, j, k}[t].
    name = "quaternion8"

    def prod(x: int, y: int) -> int:
        s1, t1 = x // 4, x % 4
        s2, t2 = y // 4, y % 4
        flip, t = _QUAT_AXIS[(t1, t2)]
        return t + 4 * ((s1 + s2 + flip) % 2)

    mul = tuple(tuple(prod(i, j) for j in range(8)) for i in range(8))
    inv = tuple(mul[i].index(0) for i in range(8))
    labels = ("1", "i", "j", "k", "-1", "-i", "-j", "-k")
    return FiniteGroup(name, 8, mul, inv, 0, labels), (1, 2)


def _trivial_group() -> tuple[FiniteGroup, tuple[int, ...]]:
    return FiniteGroup("trivial", 1, ((0,),), (0,), 0, ("e",)), ()


# Rotation groups of the platonic solids, as permutation groups.  The two
# generators are chosen so that (first, second, product) have the orders
# demanded by the triangle presentations bound in the catalog below.
_TETRA_GENS = ((1, 2, 0, 3), (0, 2, 3, 1))          # orders 3, 3, product order 2
_OCTA_GENS = ((2, 0, 3, 1), (0, 3, 1, 2))           # orders 4, 3, product order 2
_ICOSA_GENS = ((1, 2, 3, 4, 0), (4, 1, 0, 3, 2))    # orders 5, 3, product order 2


@lru_cache(maxsize=None)
def _builtin(family: str, n: int) -> tuple[FiniteGroup, tuple[int, ...]]:
    if family == "trivial":
        return _trivial_group()
    if family == "cyclic":
        if n < 1:
            raise InputError(f"cyclic order must be >= 1, got {n}")
        return _cyclic_group(n)
    if family == "dihedral":
        if n < 2:
            raise InputError(f"dihedral parameter must be >= 2, got {n}")
        return _dihedral_group(n)
    if family == "quaternion8":
        return _quaternion_group()
    if family == "tetrahedral":
        return _closure_group("tetrahedral", 4, _TETRA_GENS)
    if family == "octahedral":
        return _closure_group("octahedral", 4, _OCTA_GENS)
    if family == "icosahedral":
        return _closure_group("icosahedral", 5, _ICOSA_GENS)
    raise InputError(f"unknown group family {family!r}")


_PARAMETRIC = ("cyclic", "dihedral")


def make_group(family: str, n: Optional[int] = None) -> FiniteGroup:
    """Build a catalog-family group; ``n`` is required for cyclic and dihedral."""
    if family in _PARAMETRIC:
        if n is None:
            raise InputError(f"family {family!r} needs a parameter")
        return _builtin(family, n)[0]
    if n is not None:
        raise InputError(f"family {family!r} takes no parameter")
    return _builtin(family, 0)[0]


def family_generators(family: str, n: Optional[int] = None) -> tuple[int, ...]:
    """Element indices of the standard generators of a catalog-family group."""
    if family in _PARAMETRIC:
        if n is None:
            raise InputError(f"family {family!r} needs a parameter")
        return _builtin(family, n)[1]
    if n is not None:
        raise InputError(f"family {family!r} takes no parameter")
    return _builtin(family, 0)[1]


# ---------------------------------------------------------------------------
# Words, presentations and marked groups.


@dataclass(frozen=True)
class Word:
    """A word in abstract generators: a sequence of (generator, +1/-1) letters.

    Words are kept exactly as written; nothing here reduces them freely.
    """

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for gen, exp in self.letters:
            if gen < 0:
                raise InputError(f"negative generator index {gen}")
            if exp not in (1, -1):
                raise InputError(f"letter exponent must be +1 or -1, got {exp}")

    def inverse(self) -> "Word":
        return Word(tuple((gen, -exp) for gen, exp in reversed(self.letters)))

    def max_generator(self) -> int:
        return max((gen for gen, _ in self.letters), default=-1)

    def __len__(self) -> int:
        return len(self.letters)


def _power_word(gen: int, k: int) -> Word:
    return Word(tuple((gen, 1) for _ in range(k)))


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: named generators and a list of relator words."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise InputError("generator names must be distinct")
        for name in self.generators:
            if not name or not name.replace("_", "a").isalnum() or name[0].isdigit():
                raise InputError(f"bad generator name {name!r}")
        g = len(self.generators)
        for j, rel in enumerate(self.relators):
            if rel.max_generator() >= g:
                raise InputError(f"relator {j} uses an undeclared generator")

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @property
    def relator_count(self) -> int:
        return len(self.relators)

    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def euler_characteristic(self) -> int:
        return 1 - len(self.generators) + len(self.relators)


@dataclass(frozen=True)
class MarkedGroup:
    """A presentation together with an image element for each generator."""

    group: FiniteGroup
    presentation: Presentation
    genmap: tuple[int, ...]


def evaluate_word(marked: MarkedGroup, word: Word) -> int:
    """Evaluate a word through the generator marking; returns an element index."""
    group = marked.group
    out = group.identity
    for gen, exp in word.letters:
        if gen >= len(marked.genmap):
            raise InputError(f"word uses generator {gen} outside the marking")
        img = marked.genmap[gen]
        out = group.mul[out][img if exp == 1 else group.inv[img]]
    return out


def bind_presentation(
    group: FiniteGroup, presentation: Presentation, genmap: Sequence[int]
) -> MarkedGroup:
    """Attach a presentation to a concrete group, checking it actually presents it.

    The relators must evaluate to the identity and the generator images must
    generate the whole group; either failure is reported with its index.
    """
    images = tuple(genmap)
    if len(images) != presentation.generator_count:
        raise InputError(
            f"genmap has {len(images)} entries for "
            f"{presentation.generator_count} generators"
        )
    for img in images:
        if not 0 <= img < group.order:
            raise InputError(f"generator image {img} out of range for {group.name!r}")
    marked = MarkedGroup(group, presentation, images)
    for j, rel in enumerate(presentation.relators):
        val = evaluate_word(marked, rel)
        if val != group.identity:
            raise InputError(
                f"relator {j} evaluates to element {val}, not the identity"
            )
    # Closure of the images must reach every element.
    seen = {group.identity}
    frontier = [group.identity]
    step = set(images) | {group.inv[i] for i in images}
    while frontier:
        cur = frontier.pop()
        for img in step:
            nxt = group.mul[cur][img]
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    if len(seen) != group.order:
        raise InputError(
            f"generator images reach only {len(seen)} of {group.order} elements"
        )
    return marked


# ---------------------------------------------------------------------------
# The catalog.


@dataclass(frozen=True)
class CatalogEntry:
    """A named marked group plus its known minimal deficiency."""

    key: str
    marked: MarkedGroup
    known_deficiency: int


def _triangle_presentation(p: int) -> Presentation:
    rel_ab = Word(((0, 1), (1, 1), (0, 1), (1, 1)))
    return Presentation(("a", "b"), (_power_word(0, p), _power_word(1, 3), rel_ab))


def _catalog_presentation(family: str, n: Optional[int]) -> Presentation:
    if family == "trivial":
        return Presentation((), ())
    if family == "cyclic":
        return Presentation(("x",), (_power_word(0, n),))
    if family == "dihedral":
        rel_ab = Word(((0, 1), (1, 1), (0, 1), (1, 1)))
        return Presentation(("a", "b"), (_power_word(0, n), _power_word(1, 2), rel_ab))
    if family == "quaternion8":
        # a^2 = b^2 and b^-1 a b = a^-1, written as two relators.
        r1 = Word(((0, 1), (0, 1), (1, -1), (1, -1)))
        r2 = Word(((1, -1), (0, 1), (1, 1), (0, 1)))
        return Presentation(("a", "b"), (r1, r2))
    if family == "tetrahedral":
        return _triangle_presentation(3)
    if family == "octahedral":
        return _triangle_presentation(4)
    if family == "icosahedral":
        return _triangle_presentation(5)
    raise InputError(f"unknown group family {family!r}")


def standard_marked_group(family: str, n: Optional[int] = None) -> MarkedGroup:
    """The catalog presentation of a family group, bound to its standard generators."""
    group = make_group(family, n)
    gens = family_generators(family, n)
    pres = _catalog_presentation(family, n)
    return bind_presentation(group, pres, gens)


_KNOWN_DEFICIENCY = {
    "trivial": 0,
    "cyclic": 0,
    "dihedral": -1,
    "quaternion8": 0,
    "tetrahedral": -1,
    "octahedral": -1,
    "icosahedral": -1,
}


@lru_cache(maxsize=1)
def catalog() -> tuple[CatalogEntry, ...]:
    """The built-in marked groups, in a fixed deterministic order."""
    entries = []

    def add(family: str, n: Optional[int] = None) -> None:
        marked = standard_marked_group(family, n)
        entries.append(
            CatalogEntry(marked.group.name, marked, _KNOWN_DEFICIENCY[family])
        )

    add("trivial")
    for n in range(1, 9):
        add("cyclic", n)
    for n in range(2, 6):
        add("dihedral", n)
    add("quaternion8")
    add("tetrahedral")
    add("octahedral")
    add("icosahedral")
    return tuple(entries)


def catalog_entry(key: str) -> CatalogEntry:
    for entry in catalog():
        if entry.key == key:
            return entry
    raise InputError(f"no catalog entry named {key!r}")
