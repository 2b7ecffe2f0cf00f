"""fourlab: Fourier-like period-4 operators on a truncated Hermite basis.

Build the canonical transform and its infinitely many siblings (regrouped
quarter-phase operators), verify the algebra they all share, and measure the
properties that tell them apart.
"""

from ._kernels import NUMBA_ENABLED, hermite_table
from .analysis import (
    CheckRow,
    CommutatorCheck,
    ExplorationReport,
    PauliReport,
    PropertyReport,
    TranslationCheck,
    UnbiasednessScan,
    UncertaintyRow,
    commutator_residual,
    explore,
    pauli_report,
    random_interior_states,
    reliable_window,
    translation_check,
    unbiasedness_scan,
    uncertainty_scan,
    verify_symmetry,
)
from .basis import (
    BasisMatrix,
    BasisSpec,
    QuadratureGrid,
    basis_matrix,
    coeffs_from_grid,
    gauss_hermite,
    gram_defect,
    grid_from_coeffs,
    hermite_psi,
    quadrature,
)
from .errors import (
    ConfigError,
    ContractError,
    DimensionError,
    FourlabError,
    PlanError,
    QuadratureError,
    RangeError,
    TruncationError,
)
from .operators import (
    OperatorMatrix,
    ProjectorSet,
    RegroupingPlan,
    conjugated_position,
    exact_fourier_kernel,
    fourier_operator,
    fourier_plan,
    fourier_projectors,
    fractional_operator,
    k_operator,
    kernel_matrix,
    make_regrouping_plan,
    momentum_operator,
    operator_from_kernel,
    parity_operator,
    position_operator,
    projectors_from_plan,
)
from .states import (
    GridState,
    StateVector,
    basis_state,
    existential_weight,
    moments,
    momentum_weight,
    pauli_pair,
    state_from_weight_phase,
    transform_state,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
