"""State vectors and their grid-side description: existential weight and phase.

A normalized coefficient vector describes a state abstractly; on the grid the
same state is a pair of real fields, the weight rho(x) = |f(x)|**2 and the
phase alpha(x) = arg f(x).  The weight integrates to one and is what the
operators here are ultimately about: a transform partner assigns a second,
"momentum" weight to the same state.  The phase is undefined wherever the
weight vanishes; those points are flagged rather than filled with noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import BasisMatrix, QuadratureGrid, _frozen, coeffs_from_grid, grid_from_coeffs
from .errors import ContractError, DimensionError, TruncationError
from .operators import OperatorMatrix, fourier_operator

_NORM_TOL = 1e-10
_WEIGHT_TOL = 1e-8
_PHASE_FLOOR = 1e-12
_LEAK_TOL = 1e-6

PERSPECTIVES = ("position", "momentum")


@dataclass(frozen=True)
class StateVector:
    """Unit-norm coefficient vector in the truncated Hermite basis."""

    coeffs: np.ndarray
    label: str = ""

    def __post_init__(self):
        coeffs = _frozen(np.asarray(self.coeffs, dtype=np.complex128))
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.ndim != 1:
            raise DimensionError("state coefficients must form a 1-d vector")
        norm = np.linalg.norm(coeffs)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ContractError(f"state norm is {norm!r}, not 1 within {_NORM_TOL}")

    @property
    def dim(self) -> int:
        return self.coeffs.size


def basis_state(n: int, dim: int) -> StateVector:
    """The n-th Hermite function as a state."""
    if not 0 <= n < dim:
        raise DimensionError(f"basis index {n} outside 0..{dim - 1}")
    c = np.zeros(dim, dtype=np.complex128)
    c[n] = 1.0
    return StateVector(c, label=f"e{n}")


@dataclass(frozen=True)
class GridState:
    """Weight/phase description of a state on a quadrature grid.

    ``defined`` marks nodes where the weight is large enough for the phase
    to mean anything; elsewhere alpha is stored as 0 by convention.
    ``leakage`` records how much squared mass fell outside the truncated
    span when this object was produced from raw grid data (0 when it came
    from an in-span state).
    """

    grid: QuadratureGrid = field(repr=False)
    rho: np.ndarray
    alpha: np.ndarray
    defined: np.ndarray
    perspective: str
    dim: int
    leakage: float = 0.0

    def __post_init__(self):
        rho = _frozen(np.asarray(self.rho, dtype=np.float64))
        alpha = _frozen(np.asarray(self.alpha, dtype=np.float64))
        defined = _frozen(np.asarray(self.defined, dtype=bool))
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "defined", defined)
        m = len(self.grid)
        if rho.shape != (m,) or alpha.shape != (m,) or defined.shape != (m,):
            raise DimensionError("rho, alpha and defined must match the grid length")
        if self.perspective not in PERSPECTIVES:
            raise ContractError(f"perspective must be one of {PERSPECTIVES}")
        if np.any(rho < 0.0):
            raise ContractError("weights must be nonnegative")
        total = float(self.grid.weights @ rho)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ContractError(f"weight integrates to {total!r}, not 1 within {_WEIGHT_TOL}")

    def total_weight(self) -> float:
        return float(self.grid.weights @ self.rho)


def transform_state(op: OperatorMatrix, state: StateVector) -> StateVector:
    if op.dim != state.dim:
        raise DimensionError(f"operator dim {op.dim} != state dim {state.dim}")
    return StateVector(op.apply(state.coeffs), label=state.label)


def existential_weight(
    state: StateVector,
    basis: BasisMatrix,
    transform: OperatorMatrix | None = None,
) -> GridState:
    """Weight and phase of a state on the grid, optionally after a transform.

    With no transform this is the position-perspective description; passing
    a Fourier-like operator yields the momentum-perspective description that
    the operator induces.
    """
    if transform is not None:
        state = transform_state(transform, state)
        perspective = "momentum"
    else:
        perspective = "position"
    folded = grid_from_coeffs(state.coeffs, basis)
    f = folded / np.sqrt(basis.grid.weights)
    rho = np.abs(f) ** 2
    defined = rho > _PHASE_FLOOR
    alpha = np.where(defined, np.angle(f), 0.0)
    # quadrature is exact for |f|^2 of in-span states, but guard the contract
    return GridState(
        grid=basis.grid,
        rho=rho,
        alpha=alpha,
        defined=defined,
        perspective=perspective,
        dim=state.dim,
    )


def state_from_weight_phase(
    rho: np.ndarray,
    alpha: np.ndarray,
    basis: BasisMatrix,
    leak_tol: float = _LEAK_TOL,
) -> tuple[StateVector, float]:
    """Rebuild a state from grid weight/phase data; also report the leakage.

    The grid function sqrt(rho) * exp(i alpha) is projected onto the span.
    ``leakage`` is the squared mass lost in that projection; beyond
    ``leak_tol`` the data does not describe a state of this basis and a
    TruncationError is raised.
    """
    rho = np.asarray(rho, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    if rho.shape != alpha.shape or rho.shape != (len(basis.grid),):
        raise DimensionError("rho and alpha must be grid-length vectors")
    if np.any(rho < 0.0):
        raise ContractError("weights must be nonnegative")
    f = np.sqrt(rho) * np.exp(1j * alpha)
    folded = np.sqrt(basis.grid.weights) * f
    total = float(np.vdot(folded, folded).real)
    if total == 0.0:
        raise ContractError("weight data is identically zero")
    coeffs = coeffs_from_grid(folded, basis)
    captured = float(np.vdot(coeffs, coeffs).real)
    leakage = max(0.0, 1.0 - captured / total)
    if leakage > leak_tol:
        raise TruncationError(
            f"grid data leaks {leakage:.3e} of its mass outside the truncated span"
        )
    return StateVector(coeffs / np.sqrt(captured)), leakage


def pauli_pair(phi: float, dim: int) -> tuple[StateVector, StateVector]:
    """The classic counterexample pair: f and its coefficient conjugate.

    f = (e0 + exp(i phi) e2) / sqrt(2) and fbar has the conjugated
    coefficients.  Both share the same position weight; their overlap is
    exp(-i phi) cos(phi), so for phi away from multiples of pi they are
    genuinely different states.
    """
    if dim < 3:
        raise DimensionError("pauli pair needs dim >= 3")
    c = np.zeros(dim, dtype=np.complex128)
    c[0] = 1.0 / np.sqrt(2.0)
    c[2] = np.exp(1j * phi) / np.sqrt(2.0)
    f = StateVector(c, label="pauli-f")
    fbar = StateVector(c.conj(), label="pauli-fbar")
    return f, fbar


def moments(op: OperatorMatrix, state: StateVector) -> tuple[float, float]:
    """Mean and variance of a hermitian operator in a state."""
    if not op.hermitian:
        raise ContractError("moments are defined for hermitian operators")
    if op.dim != state.dim:
        raise DimensionError(f"operator dim {op.dim} != state dim {state.dim}")
    v = state.coeffs
    av = op.values @ v
    mean = float(np.vdot(v, av).real)
    second = float(np.vdot(av, av).real)
    return mean, max(0.0, second - mean * mean)


def momentum_weight(state: StateVector, basis: BasisMatrix) -> GridState:
    """Shorthand: existential weight after the canonical transform."""
    return existential_weight(state, basis, transform=fourier_operator(state.dim))
