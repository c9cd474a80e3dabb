"""Exact finite-dimensional model of perverse sheaves on the line.

Local systems on the punctured line are pairs (V, T); sheaves on the whole
line are quadruples (V, T, W, u, v) with v o u = 1 - t on the unipotent
part.  All arithmetic is exact over the rationals and every structural law
is checked as a matrix identity.
"""

from .errors import (
    ConstraintViolation,
    InvalidDiad,
    InvalidMorphism,
    InvalidParameter,
    InvalidSESMorphism,
    InvalidTriad,
    NotAComplex,
    NotInvertible,
    NotNilpotent,
    ParseError,
    PervglueError,
    RealizationMismatch,
    ShapeMismatch,
)
from .linalg import (
    EchelonSolve,
    LinearMap,
    QQ,
    Subspace,
    block_diag,
    echelon_solve,
    fitting_one,
    hstack,
    kernel_basis,
    kron,
    nilpotency_index,
    rat,
    rational_spectrum,
    rcef,
    solve_columns,
    vstack,
)
from .localsystems import (
    LocalSystem,
    dualize,
    ell_action,
    g_matrix,
    g_transpose_law,
    jordan_matrix,
    jordan_system,
    make_standard,
    psi_component,
    rank_one,
    stable_span,
    std_pairing,
    sub_quotient,
    tensor_L,
    trivial_system,
    twist_rank_one,
    unipotent_conjugator,
    unipotent_split,
)

__version__ = "0.1.0"
