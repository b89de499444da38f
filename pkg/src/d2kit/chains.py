"""Chain complexes of free modules over the group ring, and their homology.

A complex here is the data 0 -> C3 -> C2 -> C1 -> C0 with boundary matrices
over ZG (column j lists the boundary of the j-th basis cell); n3 = 0 encodes
a 2-complex.  Homology is
always computed exactly, by diagonalizing the integer realizations of the
boundaries.  ``augmented`` complexes additionally promise that the
coefficient-sum map on C0 kills the image of d1; their degree-0 homology is
reported unreduced, so a connected augmented complex shows H0 = Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import intlinalg
from .errors import CheckError, InputError
from .groupring import GroupRingElement, GroupRingMatrix, integerize, integerize_opposite
from .groups import FiniteGroup

__all__ = [
    "CheckResult",
    "ChainComplex",
    "HomologyReport",
    "ChainMap",
    "SplittingCertificate",
    "NotInjective",
    "NoSplit",
    "make_complex",
    "two_complex",
    "validate",
    "require_valid",
    "euler_characteristic",
    "integer_homology",
    "pi2_lattice",
    "pi2_rank",
    "d2_split",
    "verify_splitting",
    "identity_chain_map",
    "validate_chain_map",
    "lift_chain_map",
    "mapping_cone_homology",
    "is_equivalence",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ChainComplex:
    """Free ZG-complex C3 -> C2 -> C1 -> C0 with the given ranks."""

    group: FiniteGroup
    ranks: tuple[int, int, int, int]
    d1: GroupRingMatrix
    d2: GroupRingMatrix
    d3: GroupRingMatrix
    augmented: bool = True

    def __post_init__(self) -> None:
        n0, n1, n2, n3 = self.ranks
        if min(self.ranks) < 0:
            raise InputError(f"negative rank in {self.ranks}")
        for name, mat, shape in (
            ("d1", self.d1, (n0, n1)),
            ("d2", self.d2, (n1, n2)),
            ("d3", self.d3, (n2, n3)),
        ):
            if mat.shape != shape:
                raise InputError(f"{name} has shape {mat.shape}, ranks demand {shape}")
            if mat.group != self.group:
                raise InputError(f"{name} lives over a different group")

    def boundary(self, k: int) -> GroupRingMatrix:
        if k == 1:
            return self.d1
        if k == 2:
            return self.d2
        if k == 3:
            return self.d3
        raise InputError(f"no boundary in degree {k}")

    @property
    def is_two_complex(self) -> bool:
        return self.ranks[3] == 0

    @property
    def top_degree(self) -> int:
        return 2 if self.is_two_complex else 3


def make_complex(
    group: FiniteGroup,
    d1: GroupRingMatrix,
    d2: GroupRingMatrix,
    d3: Optional[GroupRingMatrix] = None,
    augmented: bool = True,
) -> ChainComplex:
    """Assemble a complex, reading the ranks off the boundary shapes."""
    if d3 is None:
        d3 = GroupRingMatrix.zero(group, d2.cols, 0)
    ranks = (d1.rows, d1.cols, d2.cols, d3.cols)
    if d2.rows != d1.cols or d3.rows != d2.cols:
        raise InputError(
            f"boundary shapes do not chain: {d1.shape}, {d2.shape}, {d3.shape}"
        )
    return ChainComplex(group, ranks, d1, d2, d3, augmented)


def two_complex(
    group: FiniteGroup, d1: GroupRingMatrix, d2: GroupRingMatrix, augmented: bool = True
) -> ChainComplex:
    return make_complex(group, d1, d2, None, augmented)


def validate(x: ChainComplex) -> list[CheckResult]:
    """Pass/fail per complex invariant (shape/group violations cannot construct)."""
    out = []
    prod12 = x.d1 @ x.d2
    out.append(
        CheckResult("d1d2-zero", prod12.is_zero(), "" if prod12.is_zero() else "d1 @ d2 != 0")
    )
    prod23 = x.d2 @ x.d3
    out.append(
        CheckResult("d2d3-zero", prod23.is_zero(), "" if prod23.is_zero() else "d2 @ d3 != 0")
    )
    if x.augmented:
        sums = x.d1.column_augmentations()
        ok = all(s == 0 for s in sums)
        out.append(
            CheckResult(
                "aug-d1-zero", ok, "" if ok else f"column augmentation sums {sums}"
            )
        )
    return out


def require_valid(x: ChainComplex) -> None:
    bad = [c for c in validate(x) if not c.passed]
    if bad:
        raise CheckError(
            "invalid complex: " + "; ".join(f"{c.name} ({c.detail})" for c in bad)
        )


def euler_characteristic(x: ChainComplex) -> int:
    n0, n1, n2, n3 = x.ranks
    return n0 - n1 + n2 - n3


# ---------------------------------------------------------------------------
# Homology.


@dataclass(frozen=True)
class HomologyReport:
    """Per degree: free rank and torsion coefficients (each > 1, divisibility order)."""

    entries: tuple[tuple[int, tuple[int, ...]], ...]

    def rank(self, k: int) -> int:
        return self.entries[k][0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.entries[k][1]

    def is_trivial(self) -> bool:
        return all(r == 0 and not t for r, t in self.entries)

    def lines(self) -> list[str]:
        return [
            f"H{k}: rank {r} torsion [{','.join(str(t) for t in tors)}]"
            for k, (r, tors) in enumerate(self.entries)
        ]


def _integer_complex_homology(
    dims: list[int], boundaries: list[tuple[list[list[int]], tuple[int, int]]]
) -> HomologyReport:
    """Homology of 0 -> Z^dims[top] -> ... -> Z^dims[0]; boundaries[k] maps degree k+1 to k."""
    ranks = []
    divisors = []
    for rows, shape in boundaries:
        r, div = intlinalg.rank_and_divisors(rows, shape)
        ranks.append(r)
        divisors.append(div)
    ranks.append(0)  # no boundary into the top degree
    divisors.append(())
    entries = []
    for k, dim in enumerate(dims):
        out_rank = ranks[k - 1] if k > 0 else 0
        free = dim - out_rank - ranks[k]
        torsion = tuple(d for d in divisors[k] if d > 1)
        entries.append((free, torsion))
    return HomologyReport(tuple(entries))


def integer_homology(x: ChainComplex) -> HomologyReport:
    """Exact homology of the integer realization, degrees 0..top, unreduced."""
    n = x.group.order
    dims = [r * n for r in x.ranks[: x.top_degree + 1]]
    boundaries = [
        (integerize(x.boundary(k)), (x.ranks[k - 1] * n, x.ranks[k] * n))
        for k in range(1, x.top_degree + 1)
    ]
    return _integer_complex_homology(dims, boundaries)


def pi2_lattice(x: ChainComplex) -> list[list[int]]:
    """Integer basis of the degree-2 cycles of a 2-complex."""
    if not x.is_two_complex:
        raise InputError("pi2_lattice expects a 2-complex (n3 = 0)")
    n = x.group.order
    return intlinalg.kernel_basis(
        integerize(x.d2), (x.ranks[1] * n, x.ranks[2] * n)
    )


def pi2_rank(x: ChainComplex) -> int:
    if not x.is_two_complex:
        raise InputError("pi2_rank expects a 2-complex (n3 = 0)")
    n = x.group.order
    return intlinalg.kernel_rank(integerize(x.d2), (x.ranks[1] * n, x.ranks[2] * n))


# ---------------------------------------------------------------------------
# Split injectivity of d3.


@dataclass(frozen=True)
class SplittingCertificate:
    """A left inverse of d3 over the group ring: phi @ d3 = identity."""

    phi: GroupRingMatrix


@dataclass(frozen=True)
class NotInjective:
    """The integer realization of d3 has a nonzero kernel."""

    kernel_rank: int


@dataclass(frozen=True)
class NoSplit:
    """d3 is injective but admits no left inverse over the group ring."""

    detail: str = ""


def _element_from_block(group: FiniteGroup, flat: list[int], block: int) -> GroupRingElement:
    n = group.order
    return GroupRingElement(
        group, {h: flat[block * n + h] for h in range(n) if flat[block * n + h]}
    )


def d2_split(x: ChainComplex) -> Union[SplittingCertificate, NotInjective, NoSplit]:
    """Decide split injectivity of d3; sound in all three answers.

    The unknown phi is a full ZG-matrix, so phi @ d3 = I is a plain integer
    linear system in the realization of right multiplication by d3; one
    diagonalization serves all n3 rows of phi.
    """
    n2, n3 = x.ranks[2], x.ranks[3]
    if n3 == 0:
        raise InputError("d2_split expects a 3-complex (n3 >= 1)")
    n = x.group.order
    kr = intlinalg.kernel_rank(integerize(x.d3), (n2 * n, n3 * n))
    if kr:
        return NotInjective(kr)
    right = integerize_opposite(x.d3)  # (n3*n) x (n2*n): row vector v -> v @ d3
    rhs = []
    for t in range(n3):
        b = [0] * (n3 * n)
        b[t * n + x.group.identity] = 1
        rhs.append(b)
    sols = intlinalg.solve_columns(right, (n3 * n, n2 * n), rhs)
    if any(s is None for s in sols):
        return NoSplit("phi @ d3 = I has no integer solution")
    entries = {}
    for t, flat in enumerate(sols):
        assert flat is not None
        for j in range(n2):
            elem = _element_from_block(x.group, flat, j)
            if not elem.is_zero():
                entries[(t, j)] = elem
    phi = GroupRingMatrix(x.group, n3, n2, entries)
    assert (phi @ x.d3).is_identity()
    return SplittingCertificate(phi)


def verify_splitting(cert: SplittingCertificate, x: ChainComplex) -> bool:
    """Re-check a splitting certificate from scratch."""
    phi = cert.phi
    if phi.group != x.group or phi.shape != (x.ranks[3], x.ranks[2]):
        return False
    return (phi @ x.d3).is_identity()


# ---------------------------------------------------------------------------
# Chain maps.


@dataclass(frozen=True)
class ChainMap:
    """Degreewise map between complexes over the same group; f_k: source C_k -> target C_k."""

    source: ChainComplex
    target: ChainComplex
    maps: tuple[GroupRingMatrix, GroupRingMatrix, GroupRingMatrix, GroupRingMatrix]

    def __post_init__(self) -> None:
        if self.source.group != self.target.group:
            raise InputError("chain map endpoints live over different groups")
        for k, f in enumerate(self.maps):
            want = (self.target.ranks[k], self.source.ranks[k])
            if f.shape != want:
                raise InputError(f"f{k} has shape {f.shape}, endpoints demand {want}")
            if f.group != self.source.group:
                raise InputError(f"f{k} lives over a different group")


def identity_chain_map(x: ChainComplex) -> ChainMap:
    ident = tuple(GroupRingMatrix.identity(x.group, r) for r in x.ranks)
    return ChainMap(x, x, ident)


def validate_chain_map(f: ChainMap) -> list[CheckResult]:
    out = []
    for k in range(1, 4):
        lhs = f.target.boundary(k) @ f.maps[k]
        rhs = f.maps[k - 1] @ f.source.boundary(k)
        ok = lhs == rhs
        out.append(
            CheckResult(
                f"commutes-deg{k}", ok, "" if ok else f"boundary square {k} fails"
            )
        )
    if f.source.augmented and f.target.augmented:
        sums = f.maps[0].column_augmentations()
        ok = all(s == 1 for s in sums)
        out.append(
            CheckResult(
                "aug-compatible", ok, "" if ok else f"f0 column augmentations {sums}"
            )
        )
    return out


def is_valid_chain_map(f: ChainMap) -> bool:
    return all(c.passed for c in validate_chain_map(f))


def _solve_ring_columns(
    target_boundary: GroupRingMatrix, rhs: GroupRingMatrix
) -> Optional[GroupRingMatrix]:
    """Solve target_boundary @ F = rhs for F over the ring, or None."""
    group = target_boundary.group
    n = group.order
    big = integerize(target_boundary)
    shape = (target_boundary.rows * n, target_boundary.cols * n)
    cols = []
    for j in range(rhs.cols):
        b = [0] * (rhs.rows * n)
        for i in range(rhs.rows):
            for h, c in rhs.entry(i, j).coeffs.items():
                b[i * n + h] = c
        cols.append(b)
    sols = intlinalg.solve_columns(big, shape, cols)
    if any(s is None for s in sols):
        return None
    entries = {}
    for j, flat in enumerate(sols):
        assert flat is not None
        for i in range(target_boundary.cols):
            elem = _element_from_block(group, flat, i)
            if not elem.is_zero():
                entries[(i, j)] = elem
    return GroupRingMatrix(group, target_boundary.cols, rhs.cols, entries)


def _require_connected_simply_connected(x: ChainComplex, which: str) -> None:
    h = integer_homology(x)
    if h.entries[0] != (1, ()):
        raise CheckError(f"{which}: H0 is not Z")
    if h.entries[1] != (0, ()):
        raise CheckError(f"{which}: H1 is not zero")


def lift_chain_map(source: ChainComplex, target: ChainComplex) -> ChainMap:
    """A chain map source -> target covering the identity on Z.

    Requires both complexes valid and augmented with H0 = Z and H1 = 0; then
    degrees 0..2 always lift (degree 3 can honestly fail and raises).  The
    returned lift is one solution, not a canonical one.
    """
    if source.group != target.group:
        raise InputError("lift endpoints live over different groups")
    if not (source.augmented and target.augmented):
        raise InputError("lift endpoints must be augmented")
    require_valid(source)
    require_valid(target)
    _require_connected_simply_connected(source, "source")
    _require_connected_simply_connected(target, "target")
    one = GroupRingElement.one(source.group)
    f0 = GroupRingMatrix(
        source.group, target.ranks[0], source.ranks[0],
        {(0, j): one for j in range(source.ranks[0])},
    )
    maps = [f0]
    for k in (1, 2, 3):
        rhs = maps[k - 1] @ source.boundary(k)
        if source.ranks[k] == 0:
            maps.append(GroupRingMatrix.zero(source.group, target.ranks[k], 0))
            continue
        sol = _solve_ring_columns(target.boundary(k), rhs)
        if sol is None:
            raise CheckError(f"no lift in degree {k}")
        maps.append(sol)
    return ChainMap(source, target, tuple(maps))


# ---------------------------------------------------------------------------
# Mapping cones and equivalence.


def _int_zero(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def _int_block(
    blocks: list[list[Optional[list[list[int]]]]],
    row_dims: list[int],
    col_dims: list[int],
) -> list[list[int]]:
    out = _int_zero(sum(row_dims), sum(col_dims))
    ri = 0
    for bi, rdim in enumerate(row_dims):
        ci = 0
        for bj, cdim in enumerate(col_dims):
            blk = blocks[bi][bj]
            if blk is not None:
                for i in range(rdim):
                    row = blk[i]
                    orow = out[ri + i]
                    for j in range(cdim):
                        orow[ci + j] = row[j]
            ci += cdim
        ri += rdim
    return out


def _int_neg(mat: list[list[int]]) -> list[list[int]]:
    return [[-v for v in row] for row in mat]


def mapping_cone_homology(f: ChainMap) -> HomologyReport:
    """Integer homology of the algebraic mapping cone, degrees 0..4.

    cone_k = target_k (+) source_{k-1} with boundary [[d, f], [0, -d]]; for a
    map of free complexes over a finite group ring, vanishing integer homology
    of the cone is equivalent to f being a chain homotopy equivalence.
    """
    n = f.source.group.order

    def tdim(k: int) -> int:
        return f.target.ranks[k] * n if 0 <= k <= 3 else 0

    def sdim(k: int) -> int:
        return f.source.ranks[k] * n if 0 <= k <= 3 else 0

    t_int = [integerize(f.target.boundary(k)) for k in (1, 2, 3)]
    s_int = [integerize(f.source.boundary(k)) for k in (1, 2, 3)]
    f_int = [integerize(f.maps[k]) for k in range(4)]

    dims = [tdim(k) + sdim(k - 1) for k in range(5)]
    boundaries = []
    for k in range(1, 5):
        row_dims = [tdim(k - 1), sdim(k - 2)]
        col_dims = [tdim(k), sdim(k - 1)]
        top_left = t_int[k - 1] if k <= 3 else None
        top_right = f_int[k - 1] if k - 1 <= 3 else None
        bottom_right = _int_neg(s_int[k - 2]) if 2 <= k <= 4 else None
        rows = _int_block(
            [[top_left, top_right], [None, bottom_right]], row_dims, col_dims
        )
        boundaries.append((rows, (sum(row_dims), sum(col_dims))))
    return _integer_complex_homology(dims, boundaries)


def is_equivalence(f: ChainMap) -> tuple[bool, HomologyReport]:
    """Whether f is a chain homotopy equivalence, plus the cone homology."""
    bad = [c for c in validate_chain_map(f) if not c.passed]
    if bad:
        raise CheckError(
            "not a chain map: " + "; ".join(c.name for c in bad)
        )
    cone = mapping_cone_homology(f)
    return cone.is_trivial(), cone
