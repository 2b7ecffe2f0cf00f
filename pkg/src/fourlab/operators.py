"""Operators on the truncated Hermite span: the canonical transform and its rivals.

The canonical transform acts diagonally on Hermite functions, multiplying
psi_n by (-i)**n.  It is unitary, squares to parity, and has fourth power
one.  Those last two properties do not pin it down: split the even indices
into two classes (h0, h2) and the odd indices into two classes (h1, h3),
assign the phases 1, -i, -1, i to the classes, and the resulting diagonal
operator K satisfies exactly the same algebra.  The canonical choice is the
plan h_k = {n : n = k mod 4}; every other plan yields a genuinely different
operator at spectral distance exactly 2 from it.

Phases on quarter-turn lattices are always taken from the exact table
(1, -1j, -1, 1j) rather than computed as complex powers, so operator
identities like K @ K == parity hold bitwise, not just to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import BasisMatrix, _frozen
from .errors import ContractError, DimensionError, PlanError

QUARTER = np.array([1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j])
_PARITY = np.array([1.0, -1.0])

_TAG_TOL = 1e-12


@dataclass(frozen=True)
class OperatorMatrix:
    """A validated square matrix with declared structure tags.

    Tags are promises checked at construction: ``unitary`` means the adjoint
    inverts it, ``hermitian`` means it equals its adjoint, ``diagonal`` means
    every off-diagonal entry is exactly zero.
    """

    values: np.ndarray
    label: str = ""
    unitary: bool = False
    hermitian: bool = False
    diagonal: bool = False

    def __post_init__(self):
        values = _frozen(np.asarray(self.values, dtype=np.complex128))
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise DimensionError(f"operator must be square, got shape {values.shape}")
        n = values.shape[0]
        if self.diagonal:
            off = values - np.diag(np.diag(values))
            if np.count_nonzero(off):
                raise ContractError(f"operator {self.label!r} tagged diagonal has off-diagonal entries")
        if self.hermitian:
            defect = np.max(np.abs(values - values.conj().T))
            if defect > _TAG_TOL:
                raise ContractError(
                    f"operator {self.label!r} tagged hermitian deviates by {defect:.3e}"
                )
        if self.unitary:
            defect = np.max(np.abs(values.conj().T @ values - np.eye(n)))
            if defect > _TAG_TOL:
                raise ContractError(
                    f"operator {self.label!r} tagged unitary deviates by {defect:.3e}"
                )

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (self.dim,):
            raise DimensionError(f"expected vector of length {self.dim}, got {coeffs.shape}")
        if self.diagonal:
            return np.diag(self.values) * coeffs
        return self.values @ coeffs

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(
            self.values.conj().T,
            label=f"{self.label}^*" if self.label else "",
            unitary=self.unitary,
            hermitian=self.hermitian,
            diagonal=self.diagonal,
        )

    def power(self, k: int) -> "OperatorMatrix":
        """k-th power (k >= 0) by repeated multiplication, never complex **.

        Repeated products of exact quarter-turn phases stay exact, which is
        why diagonal powers here satisfy identities bitwise.
        """
        if k < 0:
            raise ValueError("power expects k >= 0; use inverse() first")
        if self.diagonal:
            d = np.diag(self.values)
            acc = np.ones(self.dim, dtype=np.complex128)
            for _ in range(k):
                acc = acc * d
            vals = np.diag(acc)
        else:
            vals = np.linalg.matrix_power(self.values, k)
        return OperatorMatrix(
            vals,
            label=f"{self.label}^{k}" if self.label else "",
            unitary=self.unitary,
            diagonal=self.diagonal,
        )

    def inverse(self) -> "OperatorMatrix":
        if self.unitary:
            return self.adjoint()
        if self.diagonal:
            d = np.diag(self.values)
            if np.any(d == 0):
                raise ContractError("diagonal operator with zero entry has no inverse")
            return OperatorMatrix(np.diag(1.0 / d), diagonal=True)
        return OperatorMatrix(np.linalg.inv(self.values))


@dataclass(frozen=True)
class RegroupingPlan:
    """A parity-respecting partition of 0..dim-1 into four phase classes.

    h0 and h2 split the even indices, h1 and h3 split the odd indices; the
    class k carries the phase (-i)**k.  ``seed`` records how a random plan
    was drawn and is None for hand-built plans.
    """

    dim: int
    h0: frozenset
    h1: frozenset
    h2: frozenset
    h3: frozenset
    seed: int | None = None

    def __post_init__(self):
        classes = []
        for name in ("h0", "h1", "h2", "h3"):
            cls = frozenset(int(i) for i in getattr(self, name))
            object.__setattr__(self, name, cls)
            classes.append((name, cls))
        if self.dim < 4:
            raise DimensionError(f"plan dim must be >= 4, got {self.dim}")
        seen = {}
        for name, cls in classes:
            for i in cls:
                if i < 0 or i >= self.dim:
                    raise PlanError(f"index {i} in {name} is outside 0..{self.dim - 1}")
                if i in seen:
                    raise PlanError(f"index {i} appears in both {seen[i]} and {name}")
                seen[i] = name
        for i in range(self.dim):
            if i not in seen:
                raise PlanError(f"index {i} is not assigned to any class")
        for name in ("h0", "h2"):
            for i in getattr(self, name):
                if i % 2 == 1:
                    raise PlanError(f"odd index {i} assigned to even-parity class {name}")
        for name in ("h1", "h3"):
            for i in getattr(self, name):
                if i % 2 == 0:
                    raise PlanError(f"even index {i} assigned to odd-parity class {name}")

    def phase_exponents(self) -> np.ndarray:
        """Array e with e[n] = k for n in class h_k (so phases are QUARTER[e])."""
        e = np.empty(self.dim, dtype=np.int64)
        for k, cls in enumerate((self.h0, self.h1, self.h2, self.h3)):
            for i in cls:
                e[i] = k
        return e

    def is_fourier(self) -> bool:
        return bool(np.all(self.phase_exponents() == np.arange(self.dim) % 4))

    def as_dict(self) -> dict:
        d = {"dim": self.dim}
        for name in ("h0", "h1", "h2", "h3"):
            d[name] = sorted(getattr(self, name))
        d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RegroupingPlan":
        return cls(
            dim=int(d["dim"]),
            h0=frozenset(d["h0"]),
            h1=frozenset(d["h1"]),
            h2=frozenset(d["h2"]),
            h3=frozenset(d["h3"]),
            seed=None if d.get("seed") is None else int(d["seed"]),
        )


def fourier_plan(dim: int) -> RegroupingPlan:
    """The canonical plan: h_k holds the indices congruent to k mod 4."""
    idx = np.arange(dim)
    return RegroupingPlan(
        dim=dim,
        h0=frozenset(idx[idx % 4 == 0].tolist()),
        h1=frozenset(idx[idx % 4 == 1].tolist()),
        h2=frozenset(idx[idx % 4 == 2].tolist()),
        h3=frozenset(idx[idx % 4 == 3].tolist()),
    )


def make_regrouping_plan(dim: int, seed: int) -> RegroupingPlan:
    """Draw a random parity-respecting plan from the PCG64 stream for seed.

    Each index n, taken in increasing order, consumes exactly one binary
    draw: 0 keeps it in the canonical-side class (h0 for even n, h1 for
    odd), 1 moves it to the partner class (h2 or h3).  One draw per index
    makes the mapping from seed to plan easy to reproduce in other tools.
    """
    if dim < 4:
        raise DimensionError(f"plan dim must be >= 4, got {dim}")
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, 2, size=dim)
    sets: dict[str, set] = {"h0": set(), "h1": set(), "h2": set(), "h3": set()}
    for n in range(dim):
        if n % 2 == 0:
            sets["h0" if draws[n] == 0 else "h2"].add(n)
        else:
            sets["h1" if draws[n] == 0 else "h3"].add(n)
    return RegroupingPlan(
        dim=dim,
        h0=frozenset(sets["h0"]),
        h1=frozenset(sets["h1"]),
        h2=frozenset(sets["h2"]),
        h3=frozenset(sets["h3"]),
        seed=int(seed),
    )


@dataclass(frozen=True)
class ProjectorSet:
    """Four orthogonal projectors that sum to the identity."""

    projectors: tuple
    dim: int

    def __post_init__(self):
        if len(self.projectors) != 4:
            raise ContractError("a projector set has exactly four members")
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for j, p in enumerate(self.projectors):
            if p.dim != self.dim:
                raise DimensionError(f"projector {j} has dim {p.dim}, expected {self.dim}")
            pv = p.values
            if np.max(np.abs(pv @ pv - pv)) > _TAG_TOL:
                raise ContractError(f"projector {j} is not idempotent")
            if np.max(np.abs(pv - pv.conj().T)) > _TAG_TOL:
                raise ContractError(f"projector {j} is not hermitian")
            total += pv
        if np.max(np.abs(total - np.eye(self.dim))) > _TAG_TOL:
            raise ContractError("projectors do not sum to the identity")


def _diag_op(diag: np.ndarray, label: str, unitary=True, hermitian=False) -> OperatorMatrix:
    return OperatorMatrix(
        np.diag(diag.astype(np.complex128)),
        label=label,
        unitary=unitary,
        hermitian=hermitian,
        diagonal=True,
    )


def fourier_operator(dim: int) -> OperatorMatrix:
    """The canonical transform: diagonal phases (-i)**n from the exact table."""
    return _diag_op(QUARTER[np.arange(dim) % 4], "fourier")


def parity_operator(dim: int) -> OperatorMatrix:
    """Coordinate reversal: diagonal (+1, -1) alternation (exact table, not powers)."""
    return _diag_op(_PARITY[np.arange(dim) % 2] + 0.0j, "parity", hermitian=True)


def k_operator(plan: RegroupingPlan) -> OperatorMatrix:
    """The alternative transform of a plan: phase (-i)**k on class h_k."""
    label = "fourier" if plan.is_fourier() else f"k-plan(seed={plan.seed})"
    return _diag_op(QUARTER[plan.phase_exponents()], label)


def projectors_from_plan(plan: RegroupingPlan) -> ProjectorSet:
    """Diagonal 0/1 projectors onto the four classes of a plan."""
    e = plan.phase_exponents()
    ps = []
    for k in range(4):
        d = (e == k).astype(np.complex128)
        ps.append(OperatorMatrix(np.diag(d), label=f"P{k}", hermitian=True, diagonal=True))
    return ProjectorSet(projectors=tuple(ps), dim=plan.dim)


def fourier_projectors(dim: int) -> ProjectorSet:
    return projectors_from_plan(fourier_plan(dim))


def fractional_operator(dim: int, theta: float) -> OperatorMatrix:
    """Fractional transform: diagonal exp(-i n theta).

    When theta is an exact multiple of a quarter turn the phases are taken
    from the quarter-phase table instead of the exponential, so
    fractional_operator(dim, pi/2) reproduces fourier_operator(dim) bitwise
    and the period-4 identities stay exact.
    """
    n = np.arange(dim)
    turns = theta / (0.5 * np.pi)
    nearest = np.rint(turns)
    if abs(turns - nearest) <= 1e-12 * max(1.0, abs(turns)):
        d = QUARTER[(n * int(nearest)) % 4]
    else:
        d = np.exp(-1j * n * theta)
    return _diag_op(d, f"fractional({theta!r})")


def position_operator(dim: int) -> OperatorMatrix:
    """Position in the Hermite basis: tridiagonal with X[n, n+1] = sqrt((n+1)/2)."""
    off = np.sqrt((np.arange(dim - 1) + 1.0) / 2.0)
    x = np.diag(off, 1) + np.diag(off, -1)
    return OperatorMatrix(x.astype(np.complex128), label="position", hermitian=True)


def momentum_operator(dim: int) -> OperatorMatrix:
    """Momentum in the Hermite basis: P[n, n+1] = -i sqrt((n+1)/2), antihermitian off-diagonals.

    This is the closed form of conjugating position by the canonical
    transform; building it directly keeps it exactly tridiagonal.
    """
    off = np.sqrt((np.arange(dim - 1) + 1.0) / 2.0)
    p = np.diag(-1j * off, 1) + np.diag(1j * off, -1)
    return OperatorMatrix(p, label="momentum", hermitian=True)


def conjugated_position(op: OperatorMatrix, position: OperatorMatrix | None = None) -> OperatorMatrix:
    """op^* X op: the momentum-like partner that op induces from position."""
    if position is None:
        position = position_operator(op.dim)
    if position.dim != op.dim:
        raise DimensionError("operator and position dimensions differ")
    vals = op.values.conj().T @ position.values @ op.values
    return OperatorMatrix(
        vals,
        label=f"{op.label or 'op'}*X{op.label or 'op'}",
        hermitian=op.unitary and position.hermitian,
    )


def kernel_matrix(op: OperatorMatrix, basis: BasisMatrix) -> np.ndarray:
    """Unfolded integral kernel of op on the grid: kappa(x_i, y_j).

    kappa = sum_{n,m} psi_n(x_i) op[n, m] psi_m(y_j), evaluated as
    B op B.T with the sqrt-weight folding divided back out.  For the
    canonical transform this is the truncation of exp(-i x y) / sqrt(2 pi).
    """
    if op.dim != basis.spec.dim:
        raise DimensionError(f"operator dim {op.dim} does not match basis dim {basis.spec.dim}")
    folded = basis.values @ op.values @ basis.values.T
    root_w = np.sqrt(basis.grid.weights)
    return folded / np.outer(root_w, root_w)


def operator_from_kernel(kernel: np.ndarray, basis: BasisMatrix, **tags) -> OperatorMatrix:
    """Project an unfolded grid kernel back onto the basis (adjoint of kernel_matrix)."""
    kernel = np.asarray(kernel)
    m = basis.spec.quad_order
    if kernel.shape != (m, m):
        raise DimensionError(f"kernel shape {kernel.shape} does not match grid ({m}, {m})")
    root_w = np.sqrt(basis.grid.weights)
    folded = kernel * np.outer(root_w, root_w)
    return OperatorMatrix(basis.values.T @ folded @ basis.values, **tags)


def exact_fourier_kernel(grid) -> np.ndarray:
    """The untruncated transform kernel exp(-i x y) / sqrt(2 pi) on the grid."""
    xy = np.outer(grid.nodes, grid.nodes)
    return np.exp(-1j * xy) / np.sqrt(2.0 * np.pi)
