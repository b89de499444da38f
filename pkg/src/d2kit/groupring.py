"""Sparse arithmetic over the integral group ring of a finite group.

Elements are finite integer combinations of group elements.  A matrix is a
map of free left modules, written with the coefficients on the left of the
basis images; composing two such maps makes the entries of the first-applied
factor multiply from the left, so ``(A @ B)[i][j]`` is the sum of
``B[k][j] * A[i][k]``.  The ``integerize`` map replaces every ring entry by
the |G| x |G| integer matrix of right multiplication on the group basis,
which is exactly the choice that turns ``@`` into plain integer matrix
product.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import InputError
from .groups import FiniteGroup

__all__ = [
    "GroupRingElement",
    "GroupRingMatrix",
    "integerize",
    "integerize_opposite",
]

IntLike = Union["GroupRingElement", int]


class GroupRingElement:
    """An element of ZG, stored as a map from element index to coefficient."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs: Mapping[int, int]):
        clean = {}
        for idx, c in coeffs.items():
            if not 0 <= idx < group.order:
                raise InputError(f"element index {idx} out of range for {group.name!r}")
            if not isinstance(c, int):
                raise InputError(f"coefficient {c!r} is not an integer")
            if c:
                clean[idx] = c
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("GroupRingElement is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, group: FiniteGroup) -> "GroupRingElement":
        return cls(group, {})

    @classmethod
    def one(cls, group: FiniteGroup) -> "GroupRingElement":
        return cls(group, {group.identity: 1})

    @classmethod
    def unit(cls, group: FiniteGroup, element: int, coeff: int = 1) -> "GroupRingElement":
        return cls(group, {element: coeff})

    # -- queries ------------------------------------------------------------

    def coeff(self, idx: int) -> int:
        return self.coeffs.get(idx, 0)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    def items_sorted(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def augmentation(self) -> int:
        """Sum of coefficients: the ring map ZG -> Z sending every g to 1."""
        return sum(self.coeffs.values())

    def unit_info(self) -> Optional[tuple[int, int]]:
        """(sign, element) if this is +-g for a single group element, else None."""
        if len(self.coeffs) != 1:
            return None
        ((idx, c),) = self.coeffs.items()
        if c in (1, -1):
            return c, idx
        return None

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other: IntLike) -> "GroupRingElement":
        if isinstance(other, GroupRingElement):
            if other.group != self.group:
                raise InputError("group ring elements belong to different groups")
            return other
        if isinstance(other, int):
            return GroupRingElement(self.group, {self.group.identity: other})
        raise InputError(f"cannot combine group ring element with {type(other).__name__}")

    def __add__(self, other: IntLike) -> "GroupRingElement":
        rhs = self._coerce(other)
        out = dict(self.coeffs)
        for idx, c in rhs.coeffs.items():
            out[idx] = out.get(idx, 0) + c
        return GroupRingElement(self.group, out)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "GroupRingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: IntLike) -> "GroupRingElement":
        return self._coerce(other) + (-self)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {i: -c for i, c in self.coeffs.items()})

    def __mul__(self, other: IntLike) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement(
                self.group, {i: c * other for i, c in self.coeffs.items()}
            )
        rhs = self._coerce(other)
        mul = self.group.mul
        out: dict[int, int] = {}
        for g1, c1 in self.coeffs.items():
            row = mul[g1]
            for g2, c2 in rhs.coeffs.items():
                k = row[g2]
                out[k] = out.get(k, 0) + c1 * c2
        return GroupRingElement(self.group, out)

    def __rmul__(self, other: int) -> "GroupRingElement":
        if not isinstance(other, int):
            raise InputError(f"cannot multiply group ring element by {type(other).__name__}")
        return self.__mul__(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    # -- text form ----------------------------------------------------------

    def to_literal(self) -> str:
        """Canonical text form, e.g. ``1*g0 - 2*g3``; the zero element is ``0``."""
        if not self.coeffs:
            return "0"
        parts = []
        for idx, c in self.items_sorted():
            if not parts:
                sign = "-" if c < 0 else ""
            else:
                sign = " - " if c < 0 else " + "
            parts.append(f"{sign}{abs(c)}*g{idx}")
        return "".join(parts)

    _TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?g(\d+)\s*")

    @classmethod
    def from_literal(cls, group: FiniteGroup, text: str) -> "GroupRingElement":
        s = text.strip()
        if s == "0":
            return cls.zero(group)
        coeffs: dict[int, int] = {}
        pos = 0
        first = True
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or (not first and m.group(1) == ""):
                raise InputError(f"bad group ring literal {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            mag = int(m.group(2)) if m.group(2) is not None else 1
            idx = int(m.group(3))
            if idx >= group.order:
                raise InputError(
                    f"literal {text!r} uses g{idx} but {group.name!r} has order {group.order}"
                )
            coeffs[idx] = coeffs.get(idx, 0) + sign * mag
            pos = m.end()
            first = False
        return cls(group, coeffs)

    def __repr__(self) -> str:
        return f"<{self.to_literal()} in Z[{self.group.name}]>"


class GroupRingMatrix:
    """A sparse matrix over ZG, read as a map of free left modules.

    Column j lists the coefficients of the image of the j-th basis vector;
    ``A @ B`` is the composite "apply B, then A".
    """

    __slots__ = ("group", "rows", "cols", "entries")

    def __init__(
        self,
        group: FiniteGroup,
        rows: int,
        cols: int,
        entries: Mapping[tuple[int, int], GroupRingElement],
    ):
        if rows < 0 or cols < 0:
            raise InputError(f"negative matrix shape {rows} x {cols}")
        clean = {}
        for (i, j), elem in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise InputError(f"entry ({i},{j}) outside {rows} x {cols}")
            if elem.group != group:
                raise InputError("matrix entry belongs to a different group ring")
            if not elem.is_zero():
                clean[(i, j)] = elem
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("GroupRingMatrix is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, group: FiniteGroup, rows: int, cols: int) -> "GroupRingMatrix":
        return cls(group, rows, cols, {})

    @classmethod
    def identity(cls, group: FiniteGroup, n: int) -> "GroupRingMatrix":
        one = GroupRingElement.one(group)
        return cls(group, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def from_rows(
        cls, group: FiniteGroup, rows: Iterable[Iterable[GroupRingElement]]
    ) -> "GroupRingMatrix":
        grid = [list(r) for r in rows]
        nrows = len(grid)
        ncols = len(grid[0]) if grid else 0
        if any(len(r) != ncols for r in grid):
            raise InputError("ragged rows")
        entries = {
            (i, j): grid[i][j] for i in range(nrows) for j in range(ncols)
        }
        return cls(group, nrows, ncols, entries)

    @classmethod
    def transvection(
        cls, group: FiniteGroup, n: int, row: int, col: int, coeff: GroupRingElement
    ) -> "GroupRingMatrix":
        """The elementary matrix I + coeff * E(row, col) with row != col."""
        if row == col:
            raise InputError("transvection requires distinct row and column")
        if not (0 <= row < n and 0 <= col < n):
            raise InputError(f"transvection position ({row},{col}) outside size {n}")
        one = GroupRingElement.one(group)
        entries = {(i, i): one for i in range(n)}
        if not coeff.is_zero():
            entries[(row, col)] = coeff
        return cls(group, n, n, entries)

    @classmethod
    def unit_diagonal(
        cls, group: FiniteGroup, n: int, index: int, unit: GroupRingElement
    ) -> "GroupRingMatrix":
        """Identity with one diagonal entry replaced by a unit +-g."""
        if unit.unit_info() is None:
            raise InputError("diagonal scaling entry must be +-(group element)")
        if not 0 <= index < n:
            raise InputError(f"diagonal index {index} outside size {n}")
        one = GroupRingElement.one(group)
        entries = {(i, i): one for i in range(n)}
        entries[(index, index)] = unit
        return cls(group, n, n, entries)

    # -- queries ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> GroupRingElement:
        got = self.entries.get((i, j))
        if got is None:
            return GroupRingElement.zero(self.group)
        return got

    def items_sorted(self) -> list[tuple[tuple[int, int], GroupRingElement]]:
        return sorted(self.entries.items())

    def is_zero(self) -> bool:
        return not self.entries

    def is_identity(self) -> bool:
        if self.rows != self.cols or len(self.entries) != self.rows:
            return False
        one = GroupRingElement.one(self.group)
        return all(self.entries.get((i, i)) == one for i in range(self.rows))

    def column_augmentations(self) -> list[int]:
        """For each column, the sum of the augmentations of its entries."""
        out = [0] * self.cols
        for (_, j), elem in self.entries.items():
            out[j] += elem.augmentation()
        return out

    # -- arithmetic ---------------------------------------------------------

    def _check_same_ring(self, other: "GroupRingMatrix") -> None:
        if not isinstance(other, GroupRingMatrix):
            raise InputError(f"expected a matrix, got {type(other).__name__}")
        if other.group != self.group:
            raise InputError("matrices belong to different group rings")

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check_same_ring(other)
        if self.cols != other.rows:
            raise InputError(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        by_row: dict[int, list[tuple[int, GroupRingElement]]] = {}
        for (k, j), b in other.entries.items():
            by_row.setdefault(k, []).append((j, b))
        acc: dict[tuple[int, int], GroupRingElement] = {}
        # Left-module composition: the entry of the first-applied factor
        # (other) multiplies from the left.
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                prod = b * a
                key = (i, j)
                cur = acc.get(key)
                acc[key] = prod if cur is None else cur + prod
        return GroupRingMatrix(self.group, self.rows, other.cols, acc)

    def __add__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check_same_ring(other)
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")
        acc = dict(self.entries)
        for key, elem in other.entries.items():
            cur = acc.get(key)
            acc[key] = elem if cur is None else cur + elem
        return GroupRingMatrix(self.group, self.rows, self.cols, acc)

    def __neg__(self) -> "GroupRingMatrix":
        return GroupRingMatrix(
            self.group, self.rows, self.cols,
            {key: -elem for key, elem in self.entries.items()},
        )

    def __sub__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return (
            self.group == other.group
            and self.shape == other.shape
            and self.entries == other.entries
        )

    __hash__ = None  # type: ignore[assignment]

    # -- block assembly -----------------------------------------------------

    def hstack(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check_same_ring(other)
        if self.rows != other.rows:
            raise InputError("hstack needs equal row counts")
        entries = dict(self.entries)
        for (i, j), elem in other.entries.items():
            entries[(i, j + self.cols)] = elem
        return GroupRingMatrix(self.group, self.rows, self.cols + other.cols, entries)

    def vstack(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check_same_ring(other)
        if self.cols != other.cols:
            raise InputError("vstack needs equal column counts")
        entries = dict(self.entries)
        for (i, j), elem in other.entries.items():
            entries[(i + self.rows, j)] = elem
        return GroupRingMatrix(self.group, self.rows + other.rows, self.cols, entries)

    def direct_sum(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check_same_ring(other)
        entries = dict(self.entries)
        for (i, j), elem in other.entries.items():
            entries[(i + self.rows, j + self.cols)] = elem
        return GroupRingMatrix(
            self.group, self.rows + other.rows, self.cols + other.cols, entries
        )

    def submatrix(
        self, row_indices: Iterable[int], col_indices: Iterable[int]
    ) -> "GroupRingMatrix":
        rmap = {old: new for new, old in enumerate(row_indices)}
        cmap = {old: new for new, old in enumerate(col_indices)}
        for old in rmap:
            if not 0 <= old < self.rows:
                raise InputError(f"row index {old} out of range")
        for old in cmap:
            if not 0 <= old < self.cols:
                raise InputError(f"column index {old} out of range")
        entries = {
            (rmap[i], cmap[j]): elem
            for (i, j), elem in self.entries.items()
            if i in rmap and j in cmap
        }
        return GroupRingMatrix(self.group, len(rmap), len(cmap), entries)

    def __repr__(self) -> str:
        return (
            f"<GroupRingMatrix {self.rows}x{self.cols} over Z[{self.group.name}], "
            f"{len(self.entries)} entries>"
        )


# ---------------------------------------------------------------------------
# Integer realizations.


def _right_mul_block_add(
    big: list[list[int]], group: FiniteGroup, base_i: int, base_j: int,
    elem: GroupRingElement,
) -> None:
    # Right multiplication by g sends basis vector e_h to e_{h g}.
    mul = group.mul
    for g, c in elem.coeffs.items():
        for h in range(group.order):
            big[base_i + mul[h][g]][base_j + h] += c


def _left_mul_block_add(
    big: list[list[int]], group: FiniteGroup, base_i: int, base_j: int,
    elem: GroupRingElement,
) -> None:
    # Left multiplication by g sends basis vector e_h to e_{g h}.
    mul = group.mul
    for g, c in elem.coeffs.items():
        row = mul[g]
        for h in range(group.order):
            big[base_i + row[h]][base_j + h] += c


def integerize(mat: GroupRingMatrix) -> list[list[int]]:
    """The integer matrix of ``v -> mat @ v`` on stacked coefficient columns.

    Entry (i, j) of ``mat`` lands in the |G| x |G| block at (i*|G|, j*|G|)
    as the right-multiplication matrix of the entry; with the left-module
    composition of ``@`` this is functorial: ``integerize(A @ B)`` equals
    ``integerize(A) @ integerize(B)``, and ``integerize(I) = I``.
    """
    n = mat.group.order
    big = [[0] * (mat.cols * n) for _ in range(mat.rows * n)]
    for (i, j), elem in mat.entries.items():
        _right_mul_block_add(big, mat.group, i * n, j * n, elem)
    return big


def integerize_opposite(mat: GroupRingMatrix) -> list[list[int]]:
    """The integer matrix of the action ``v -> v @ mat`` on row vectors.

    Row vectors over the ring are stacked into coefficient columns, so this
    returns a (cols*|G|) x (rows*|G|) integer matrix; products reverse order:
    the realization of ``A @ B`` is ``realize(B) @ realize(A)``.
    """
    n = mat.group.order
    big = [[0] * (mat.rows * n) for _ in range(mat.cols * n)]
    for (j, k), elem in mat.entries.items():
        _left_mul_block_add(big, mat.group, k * n, j * n, elem)
    return big
