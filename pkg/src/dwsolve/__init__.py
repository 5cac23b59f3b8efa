"""Domain-wall partition functions of the so(n) vertex model.

The lattice sum (:func:`z_bruteforce`) is compared with a block-determinant
expression (:func:`z_determinant`) that holds for ``n = 3`` at any crossing
parameter and for ``n >= 4`` at ``lam = m pi / (2(n-3))``.
"""

from .bracket import CrossingParameter, Jet, angle_bracket, bracket, bracket_jet, jet_sin_affine, to_multiplicative
from .determinant import (
    block_matrix,
    lu_det,
    prefactor_d,
    prefactor_n,
    richardson,
    row_coincidence_check,
    z_determinant,
    z_homogeneous,
    z_semi_homogeneous,
)
from .errors import (
    AliasError,
    BudgetExceeded,
    ConditionWarning,
    DWSolveError,
    PoleError,
    PreconditionError,
    VanishingFunctionError,
)
from .harness import CheckRecord, VerificationReport, compare, lambda_sweep, rel_diff, run_proof_suite
from .lattice import (
    Rapidities,
    z_bruteforce,
    z_bruteforce_corner_left,
    z_bruteforce_corner_right,
    z_multiplicative_slice,
)
from .laurent import LaurentSpan, extract_laurent_span
from .model import (
    ModelParams,
    VertexState,
    assemble_r_matrix,
    weight_additive,
    weight_degree,
    weight_multiplicative,
    ybe_residual,
)

__all__ = [name for name in dir() if not name.startswith("_")]
