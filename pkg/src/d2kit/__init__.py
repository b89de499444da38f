"""Chain-level toolkit for two-complexes over integral group rings of finite groups.

Builds presentation complexes by free differential calculus, computes exact
integer homology of the integerized boundaries, decides split injectivity of
the degree-3 boundary, and manipulates complexes by audited elementary moves
with independently re-verifiable equivalence certificates.
"""

from .errors import CheckError, InputError
from .groups import (
    CatalogEntry,
    FiniteGroup,
    MarkedGroup,
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
from .groupring import (
    GroupRingElement,
    GroupRingMatrix,
    integerize,
    integerize_opposite,
)
from .intlinalg import backend_name
from .fox import (
    fox_derivative,
    fox_jacobian,
    presentation_complex,
    relation_module_rank,
)
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
    is_valid_chain_map,
    lift_chain_map,
    make_complex,
    mapping_cone_homology,
    pi2_lattice,
    pi2_rank,
    require_valid,
    two_complex,
    validate,
    validate_chain_map,
    verify_splitting,
)
from .moves import (
    Attach,
    EquivalenceCertificate,
    Expand,
    Move,
    MoveLog,
    MoveStep,
    SplitThree,
    Stabilize,
    Transvect,
    UnitScale,
    Unknown,
    apply_move,
    apply_moves,
    attach_cells,
    basis_automorphism,
    certificate_ok,
    elementary_expansion,
    empty_log,
    reduce_d2,
    replay_log,
    schanuel_compare,
    stabilize,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "CheckError",
    "InputError",
    "CatalogEntry",
    "FiniteGroup",
    "MarkedGroup",
    "Presentation",
    "Word",
    "bind_presentation",
    "catalog",
    "catalog_entry",
    "evaluate_word",
    "family_generators",
    "make_group",
    "standard_marked_group",
    "verify_group",
    "GroupRingElement",
    "GroupRingMatrix",
    "integerize",
    "integerize_opposite",
    "backend_name",
    "fox_derivative",
    "fox_jacobian",
    "presentation_complex",
    "relation_module_rank",
    "ChainComplex",
    "ChainMap",
    "CheckResult",
    "HomologyReport",
    "NoSplit",
    "NotInjective",
    "SplittingCertificate",
    "d2_split",
    "euler_characteristic",
    "identity_chain_map",
    "integer_homology",
    "is_equivalence",
    "is_valid_chain_map",
    "lift_chain_map",
    "make_complex",
    "mapping_cone_homology",
    "pi2_lattice",
    "pi2_rank",
    "require_valid",
    "two_complex",
    "validate",
    "validate_chain_map",
    "verify_splitting",
    "Attach",
    "EquivalenceCertificate",
    "Expand",
    "Move",
    "MoveLog",
    "MoveStep",
    "SplitThree",
    "Stabilize",
    "Transvect",
    "UnitScale",
    "Unknown",
    "apply_move",
    "apply_moves",
    "attach_cells",
    "basis_automorphism",
    "certificate_ok",
    "elementary_expansion",
    "empty_log",
    "reduce_d2",
    "replay_log",
    "schanuel_compare",
    "stabilize",
    "verify_certificate",
    "__version__",
]
