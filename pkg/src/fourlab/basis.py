"""Truncated Hermite basis: specs, Gauss-Hermite grids, and sampling matrices.

The working space is span{psi_0, ..., psi_{N-1}} of the first N orthonormal
Hermite functions.  A function in that span is held either as a coefficient
vector of length N or as *folded* samples s_i = sqrt(w_i) * f(x_i) on an
M-point Gauss-Hermite grid (M >= N).  Folding the square root of the weight
into the sample makes the basis matrix

    B[i, n] = sqrt(w_i) * psi_n(x_i)

an isometry on the span (B.T @ B ~ identity), so conversions between the two
representations are plain matrix products with B and B.T.

The w_i here are not the raw Gauss-Hermite weights (which integrate against
exp(-x**2) and underflow for large M) but the weights already multiplied by
exp(x_i**2), i.e. the weights of the quadrature rule for plain integrals of
Hermite-function products.  They are computed in closed form from the
identity  w_i = 1 / (M * psi_{M-1}(x_i)**2),  which never leaves the
well-scaled regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionError, QuadratureError

# The companion-matrix node solver produces non-finite nodes once the extreme
# node's Gaussian factor leaves the normal double range (order ~ 720).
MAX_QUAD_ORDER = 704


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BasisSpec:
    """Size of the truncated basis (dim) and of the quadrature grid (quad_order)."""

    dim: int = 128
    quad_order: int = 256

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 4:
            raise DimensionError(f"dim must be an integer >= 4, got {self.dim!r}")
        if int(self.quad_order) != self.quad_order or self.quad_order < self.dim:
            raise DimensionError(
                f"quad_order must be an integer >= dim={self.dim}, got {self.quad_order!r}"
            )

    def as_dict(self) -> dict:
        return {"dim": int(self.dim), "quad_order": int(self.quad_order)}

    @classmethod
    def from_dict(cls, d: dict) -> "BasisSpec":
        return cls(dim=int(d["dim"]), quad_order=int(d["quad_order"]))


@dataclass(frozen=True)
class QuadratureGrid:
    """Symmetric Gauss-Hermite nodes with folded (exp(x**2)-corrected) weights."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = _frozen(np.asarray(self.nodes, dtype=np.float64))
        weights = _frozen(np.asarray(self.weights, dtype=np.float64))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or weights.shape != nodes.shape:
            raise QuadratureError("nodes and weights must be 1-d arrays of equal length")
        m = nodes.size
        bad = np.flatnonzero(~np.isfinite(weights) | (weights <= 0.0))
        if bad.size:
            raise QuadratureError(f"non-positive or non-finite weight at node index {bad[0]}")
        diffs = np.diff(nodes)
        bad = np.flatnonzero(diffs <= 0.0)
        if bad.size:
            raise QuadratureError(f"nodes not strictly increasing at index {bad[0] + 1}")
        scale = max(abs(nodes[0]), abs(nodes[-1]), 1.0)
        asym = np.abs(nodes + nodes[::-1])
        bad = np.flatnonzero(asym > 1e-12 * scale)
        if bad.size:
            raise QuadratureError(f"nodes not symmetric about 0 at index {bad[0]}")
        wasym = np.abs(weights - weights[::-1])
        bad = np.flatnonzero(wasym > 1e-12 * np.abs(weights))
        if bad.size:
            raise QuadratureError(f"weights not symmetric at index {bad[0]}")
        if m % 2 == 1 and nodes[m // 2] != 0.0:
            raise QuadratureError(f"odd-order grid must contain the node 0.0 at index {m // 2}")

    def __len__(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class BasisMatrix:
    """Folded sampling matrix B[i, n] = sqrt(w_i) * psi_n(x_i) for a spec/grid pair."""

    values: np.ndarray
    spec: BasisSpec
    grid: QuadratureGrid = field(repr=False)

    def __post_init__(self):
        values = _frozen(np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "values", values)
        if values.shape != (self.spec.quad_order, self.spec.dim):
            raise DimensionError(
                f"basis matrix shape {values.shape} does not match spec "
                f"({self.spec.quad_order}, {self.spec.dim})"
            )


def hermite_psi(n: int, x):
    """Orthonormal Hermite function psi_n evaluated at x (scalar or array).

    Uses the stable normalized three-term recurrence; intermediate values
    stay O(1), so the result is finite for all n up to at least 10**4.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = _kernels.hermite_order_scaled(int(n), arr)
    return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def gauss_hermite(order: int) -> QuadratureGrid:
    """Gauss-Hermite grid of a given order with folded weights.

    Nodes come from the standard companion-matrix routine and are then
    symmetrized exactly (x -> (x - reverse(x))/2) so that parity operations
    on grid samples are bitwise involutions.  Weights use the closed form
    1 / (order * psi_{order-1}(x_i)**2).
    """
    order = int(order)
    if order < 1:
        raise DimensionError(f"quadrature order must be >= 1, got {order}")
    if order > MAX_QUAD_ORDER:
        raise QuadratureError(
            f"quadrature order {order} exceeds the supported maximum {MAX_QUAD_ORDER} "
            "(the companion-matrix node solver degrades beyond it)"
        )
    with np.errstate(all="ignore"):  # hermgauss's own weights underflow at large order
        nodes = np.polynomial.hermite.hermgauss(order)[0]
    nodes = 0.5 * (nodes - nodes[::-1])
    if order % 2 == 1:
        nodes[order // 2] = 0.0
    top = _kernels.hermite_order_scaled(order - 1, nodes)
    with np.errstate(divide="ignore", over="ignore"):
        weights = 1.0 / (order * top * top)
    return QuadratureGrid(nodes=nodes, weights=weights)


def quadrature(spec: BasisSpec) -> QuadratureGrid:
    """The grid a spec asks for: gauss_hermite(spec.quad_order)."""
    return gauss_hermite(spec.quad_order)


def basis_matrix(spec: BasisSpec, grid: QuadratureGrid | None = None) -> BasisMatrix:
    """Build the folded sampling matrix for spec on grid (computed if omitted)."""
    if grid is None:
        grid = quadrature(spec)
    if len(grid) != spec.quad_order:
        raise DimensionError(
            f"grid has {len(grid)} nodes but spec.quad_order is {spec.quad_order}"
        )
    table = _kernels.hermite_table(grid.nodes, spec.dim)
    values = np.sqrt(grid.weights)[:, None] * table
    return BasisMatrix(values=values, spec=spec, grid=grid)


def coeffs_from_grid(samples: np.ndarray, basis: BasisMatrix) -> np.ndarray:
    """Hermite coefficients of folded grid samples (length M -> length N).

    Exact on the span; anything orthogonal to the span is silently projected
    away, which is what makes the round trip through grid_from_coeffs the
    identity only for in-span data.
    """
    samples = np.asarray(samples)
    if samples.shape != (basis.spec.quad_order,):
        raise DimensionError(
            f"expected {basis.spec.quad_order} samples, got shape {samples.shape}"
        )
    return basis.values.T @ samples


def grid_from_coeffs(coeffs: np.ndarray, basis: BasisMatrix) -> np.ndarray:
    """Folded grid samples of a coefficient vector (length N -> length M)."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (basis.spec.dim,):
        raise DimensionError(
            f"expected {basis.spec.dim} coefficients, got shape {coeffs.shape}"
        )
    return basis.values @ coeffs


def gram_defect(basis: BasisMatrix) -> float:
    """max |B.T B - I|: how far the folded sampling is from an exact isometry."""
    g = basis.values.T @ basis.values
    return float(np.max(np.abs(g - np.eye(basis.spec.dim))))
