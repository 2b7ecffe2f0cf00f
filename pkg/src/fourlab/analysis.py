"""Checks and explorations: does an operator behave like a Fourier transform?

Two layers live here.  The *verification* layer tests the defining algebra
(unitarity, square = parity, fourth power = identity, quartic spectrum) and
produces a PropertyReport of named residual rows.  The *exploration* layer
measures the properties the algebra does not fix: commutators with position,
uncertainty products, translation generation, and the flatness of the
transform kernel's modulus.  Exploration rows mostly carry numbers rather
than verdicts, because for the alternative operators the interesting output
is the measured value itself.

Truncation is a first-class concern throughout.  The last few basis modes of
a truncated span feel the missing tail, so residuals are reported both on an
interior block and on the full matrix, and windows on the grid are validated
against the span's reliable radius ~ 0.7 * sqrt(2 N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisMatrix
from .errors import DimensionError, RangeError
from .operators import (
    OperatorMatrix,
    QUARTER,
    conjugated_position,
    kernel_matrix,
    parity_operator,
    position_operator,
)
from .states import GridState, StateVector, existential_weight, moments, transform_state

DEFAULT_CHECK_TOL = 1e-12

SYMMETRY_CHECKS = (
    "unitarity",
    "square_is_parity",
    "period_four",
    "eigenvalues_quartic",
    "inverse_is_cube",
)


@dataclass(frozen=True)
class CheckRow:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "passed": bool(self.passed),
        }


@dataclass(frozen=True)
class PropertyReport:
    operator: str
    dim: int
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def row(self, name: str) -> CheckRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "operator": self.operator,
            "dim": self.dim,
            "passed": bool(self.passed),
            "checks": [r.as_dict() for r in self.rows],
        }


def _maxabs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a)))


def verify_symmetry(op: OperatorMatrix, tolerances: dict | None = None) -> PropertyReport:
    """Residuals of the five defining identities of a Fourier-like operator.

    All five residuals are exactly zero for the diagonal operators built by
    this package; the report machinery exists for operators built any other
    way (from kernels, from plans edited by hand, fractional angles).
    """
    tol = {name: DEFAULT_CHECK_TOL for name in SYMMETRY_CHECKS}
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise KeyError(f"unknown check names: {sorted(unknown)}")
        tol.update(tolerances)
    n = op.dim
    v = op.values
    eye = np.eye(n)
    par = parity_operator(n).values
    sq = v @ v
    rows = [
        CheckRow("unitarity", _maxabs(v.conj().T @ v - eye), tol["unitarity"]),
        CheckRow("square_is_parity", _maxabs(sq - par), tol["square_is_parity"]),
        CheckRow("period_four", _maxabs(sq @ sq - eye), tol["period_four"]),
    ]
    eigs = np.diag(v) if op.diagonal else np.linalg.eigvals(v)
    dist = np.min(np.abs(eigs[:, None] - QUARTER[None, :]), axis=1)
    rows.append(CheckRow("eigenvalues_quartic", float(np.max(dist)), tol["eigenvalues_quartic"]))
    rows.append(CheckRow("inverse_is_cube", _maxabs(op.inverse().values - sq @ v), tol["inverse_is_cube"]))
    return PropertyReport(operator=op.label or "operator", dim=n, rows=tuple(rows))


@dataclass(frozen=True)
class CommutatorCheck:
    dim: int
    interior: int
    residual_interior: float
    residual_full: float

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "interior": self.interior,
            "residual_interior": float(self.residual_interior),
            "residual_full": float(self.residual_full),
        }


def commutator_residual(
    a: OperatorMatrix, b: OperatorMatrix, interior: int | None = None
) -> CommutatorCheck:
    """Deviation of [a, b] from i * identity, on an interior block and in full.

    Truncation corrupts exactly the last diagonal entry of [X, P] (its full
    residual equals dim), so the interior number is the meaningful one;
    interior defaults to dim - 2.
    """
    if a.dim != b.dim:
        raise DimensionError("commutator operands must share a dimension")
    n = a.dim
    if interior is None:
        interior = n - 2
    if not 1 <= interior <= n:
        raise RangeError(f"interior block {interior} outside 1..{n}")
    comm = a.values @ b.values - b.values @ a.values - 1j * np.eye(n)
    return CommutatorCheck(
        dim=n,
        interior=interior,
        residual_interior=_maxabs(comm[:interior, :interior]),
        residual_full=_maxabs(comm),
    )


@dataclass(frozen=True)
class UncertaintyRow:
    state: str
    delta_x: float
    delta_p: float
    product: float
    bound: float

    @property
    def margin(self) -> float:
        return self.product - self.bound

    def as_dict(self) -> dict:
        return {
            "state": self.state,
            "delta_x": float(self.delta_x),
            "delta_p": float(self.delta_p),
            "product": float(self.product),
            "bound": float(self.bound),
            "margin": float(self.margin),
        }


def uncertainty_scan(
    op: OperatorMatrix, states: list, position: OperatorMatrix | None = None
) -> list:
    """Deviation products Delta X * Delta P_op per state, with the Robertson bound.

    P_op = op^* X op is the momentum-like observable op induces; the bound
    column is |<[X, P_op]>| / 2, which any hermitian pair must respect.
    """
    if position is None:
        position = position_operator(op.dim)
    pk = conjugated_position(op, position)
    comm = position.values @ pk.values - pk.values @ position.values
    rows = []
    for s in states:
        mx, vx = moments(position, s)
        mp, vp = moments(pk, s)
        dx, dp = math.sqrt(vx), math.sqrt(vp)
        expect = complex(np.vdot(s.coeffs, comm @ s.coeffs))
        rows.append(
            UncertaintyRow(
                state=s.label or "state",
                delta_x=dx,
                delta_p=dp,
                product=dx * dp,
                bound=0.5 * abs(expect),
            )
        )
    return rows


def random_interior_states(count: int, dim: int, seed: int, edge: int = 8) -> list:
    """Random complex states supported away from the truncation edge.

    The last ``edge`` coefficients are zeroed so that tridiagonal operators
    act on these states exactly as their untruncated versions would.
    """
    if not 0 <= edge < dim:
        raise DimensionError(f"edge {edge} outside 0..{dim - 1}")
    rng = np.random.default_rng(seed)
    out = []
    for j in range(count):
        re = rng.standard_normal(dim - edge)
        im = rng.standard_normal(dim - edge)
        c = np.zeros(dim, dtype=np.complex128)
        c[: dim - edge] = re + 1j * im
        c /= np.linalg.norm(c)
        out.append(StateVector(c, label=f"random{j}"))
    return out


def reliable_window(dim: int) -> float:
    """Radius inside which the truncated span resolves grid detail: 0.7 sqrt(2 dim)."""
    return 0.7 * math.sqrt(2.0 * dim)


@dataclass(frozen=True)
class UnbiasednessScan:
    operator: str
    dim: int
    window: float
    node_count: int
    max_dev: float
    rms_dev: float

    def as_dict(self) -> dict:
        return {
            "operator": self.operator,
            "dim": self.dim,
            "window": float(self.window),
            "node_count": int(self.node_count),
            "max_dev": float(self.max_dev),
            "rms_dev": float(self.rms_dev),
        }


def unbiasedness_scan(op: OperatorMatrix, basis: BasisMatrix, window: float) -> UnbiasednessScan:
    """Relative flatness of |kernel| against 1/sqrt(2 pi) inside a window.

    A transform is unbiased when every position is weighted equally by the
    modulus of its kernel.  The scan reports the worst and rms relative
    deviation of |kappa(x, y)| from the flat value over all grid nodes with
    |x|, |y| <= window.  The window must stay inside the reliable radius of
    the truncated span.
    """
    if window <= 0.0:
        raise RangeError("window must be positive")
    bound = reliable_window(basis.spec.dim)
    if window > bound:
        raise RangeError(
            f"window {window} exceeds the reliable radius {bound:.3f} for dim {basis.spec.dim}"
        )
    kappa = kernel_matrix(op, basis)
    inside = np.abs(basis.grid.nodes) <= window
    block = kappa[np.ix_(inside, inside)]
    dev = np.abs(block) * math.sqrt(2.0 * math.pi) - 1.0
    return UnbiasednessScan(
        operator=op.label or "operator",
        dim=basis.spec.dim,
        window=window,
        node_count=int(np.count_nonzero(inside)),
        max_dev=_maxabs(dev),
        rms_dev=float(np.sqrt(np.mean(dev * dev))),
    )


@dataclass(frozen=True)
class TranslationCheck:
    a: float
    dim: int
    interior: int
    guard_band: int
    residual_interior: float
    residual_full: float

    def as_dict(self) -> dict:
        return {
            "a": float(self.a),
            "dim": self.dim,
            "interior": self.interior,
            "guard_band": self.guard_band,
            "residual_interior": float(self.residual_interior),
            "residual_full": float(self.residual_full),
        }


def translation_check(dim: int, a: float, interior: int | None = None) -> TranslationCheck:
    """Does exp(-i a P) shift position by a?  Residual of U* X U - (X + a).

    The guard band ceil(4 dim |a|) estimates how many edge modes the
    truncated exponential corrupts; the interior block must keep clear of
    it.  interior defaults to the largest allowed block.  a = 0 is exact by
    construction.
    """
    x = position_operator(dim)
    guard = min(dim, math.ceil(4.0 * dim * abs(a)))
    max_interior = dim - guard
    if interior is None:
        interior = max_interior
    if interior < 1 or interior > max_interior:
        raise RangeError(
            f"interior {interior} outside 1..{max_interior} "
            f"(guard band {guard} for a={a}, dim={dim})"
        )
    if a == 0.0:
        return TranslationCheck(a=0.0, dim=dim, interior=interior, guard_band=guard,
                                residual_interior=0.0, residual_full=0.0)
    from .operators import momentum_operator

    p = momentum_operator(dim)
    lam, vec = np.linalg.eigh(p.values)
    u = (vec * np.exp(-1j * a * lam)) @ vec.conj().T
    shifted = u.conj().T @ x.values @ u - (x.values + a * np.eye(dim))
    return TranslationCheck(
        a=float(a),
        dim=dim,
        interior=interior,
        guard_band=guard,
        residual_interior=_maxabs(shifted[:interior, :interior]),
        residual_full=_maxabs(shifted),
    )


@dataclass(frozen=True)
class ExplorationReport:
    """Everything measured about one operator, plus its required checks.

    ``sections`` maps section names to plain-dict payloads ready for JSON.
    ``checks`` holds the pass/fail rows; it is empty for non-canonical
    operators, whose exploration is purely observational.
    """

    operator: str
    dim: int
    sections: dict
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)

    def as_dict(self) -> dict:
        return {
            "operator": self.operator,
            "dim": self.dim,
            "passed": bool(self.passed),
            "checks": [r.as_dict() for r in self.checks],
            "sections": self.sections,
        }


EXPLORE_CHECK_TOL = {
    "commutator_interior": 1e-10,
    "translation_interior": 1e-6,
    "robertson_margin": 1e-9,
}


def explore(
    op: OperatorMatrix,
    basis: BasisMatrix,
    *,
    seed: int = 7,
    state_count: int = 100,
    window: float = 3.0,
    a: float = 0.1,
    interior: int | None = None,
    tolerances: dict | None = None,
    canonical: bool | None = None,
) -> ExplorationReport:
    """Run the full observational battery on one Fourier-like operator.

    Sections: the symmetry report, the commutator of position with the
    induced momentum, translation generation, an uncertainty scan over
    ``state_count`` random interior states, and the kernel flatness scan.
    For a non-canonical operator the kernel section also records the ratio
    of its flatness deviation to the canonical baseline at the same size.

    Only the canonical transform gets pass/fail checks (its commutator,
    translation and Robertson-margin residuals have known expected values);
    everything else is reported as numbers.  ``canonical`` is inferred from
    the operator label when not given.
    """
    tol = dict(EXPLORE_CHECK_TOL)
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise KeyError(f"unknown check names: {sorted(unknown)}")
        tol.update(tolerances)
    dim = basis.spec.dim
    if op.dim != dim:
        raise DimensionError(f"operator dim {op.dim} != basis dim {dim}")
    if canonical is None:
        canonical = op.label == "fourier"

    symmetry = verify_symmetry(op)
    x = position_operator(dim)
    pk = conjugated_position(op, x)
    comm = commutator_residual(x, pk)
    trans = translation_check(dim, a, interior=dim // 2 if interior is None else interior)
    states = random_interior_states(state_count, dim, seed)
    unc_rows = uncertainty_scan(op, states, x)
    min_product = min(r.product for r in unc_rows)
    min_margin = min(r.margin for r in unc_rows)
    kernel = unbiasedness_scan(op, basis, window)
    kernel_section = kernel.as_dict()
    if not canonical:
        from .operators import fourier_operator

        baseline = unbiasedness_scan(fourier_operator(dim), basis, window)
        kernel_section["fourier_max_dev"] = baseline.max_dev
        kernel_section["ratio_vs_fourier"] = kernel.max_dev / baseline.max_dev

    sections = {
        "symmetry": symmetry.as_dict(),
        "commutator": comm.as_dict(),
        "translation": trans.as_dict(),
        "uncertainty": {
            "state_count": state_count,
            "seed": seed,
            "min_product": min_product,
            "min_margin": min_margin,
            "rows": [r.as_dict() for r in unc_rows],
        },
        "kernel": kernel_section,
    }
    checks = ()
    if canonical:
        checks = (
            CheckRow("commutator_interior", comm.residual_interior, tol["commutator_interior"]),
            CheckRow("translation_interior", trans.residual_interior, tol["translation_interior"]),
            CheckRow("robertson_margin", max(0.0, -min_margin), tol["robertson_margin"]),
        )
    return ExplorationReport(
        operator=op.label or "operator", dim=dim, sections=sections, checks=checks
    )


@dataclass(frozen=True)
class PauliRow:
    transform: str
    weight_distance: float

    def as_dict(self) -> dict:
        return {"transform": self.transform, "weight_distance": float(self.weight_distance)}


@dataclass(frozen=True)
class PauliReport:
    phi: float
    overlap: complex
    state_distance: float
    position_distance: float
    rows: tuple

    def as_dict(self) -> dict:
        return {
            "phi": float(self.phi),
            "overlap_re": float(self.overlap.real),
            "overlap_im": float(self.overlap.imag),
            "overlap_abs": float(abs(self.overlap)),
            "state_distance": float(self.state_distance),
            "position_distance": float(self.position_distance),
            "rows": [r.as_dict() for r in self.rows],
        }


def _weight_distance(a: GridState, b: GridState) -> float:
    return float(a.grid.weights @ np.abs(a.rho - b.rho))


def pauli_report(
    f: StateVector, fbar: StateVector, transforms: list, basis: BasisMatrix, phi: float
) -> PauliReport:
    """How well a family of transforms distinguishes a conjugate state pair.

    The pair shares its position weight exactly.  For each transform the row
    records the integrated distance between the two transformed weights; a
    transform that cannot separate any such pair leaves every row at zero,
    exposing how little of a state the weights pin down.
    """
    overlap = complex(np.vdot(f.coeffs, fbar.coeffs))
    state_distance = math.sqrt(max(0.0, 2.0 - 2.0 * abs(overlap)))
    pos_f = existential_weight(f, basis)
    pos_fbar = existential_weight(fbar, basis)
    rows = []
    for op in transforms:
        wf = existential_weight(transform_state(op, f), basis)
        wb = existential_weight(transform_state(op, fbar), basis)
        rows.append(PauliRow(transform=op.label or "operator", weight_distance=_weight_distance(wf, wb)))
    return PauliReport(
        phi=phi,
        overlap=overlap,
        state_distance=state_distance,
        position_distance=_weight_distance(pos_f, pos_fbar),
        rows=tuple(rows),
    )
