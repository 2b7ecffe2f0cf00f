"""Hot numeric kernels: orthonormal Hermite-function recurrences.

Everything downstream (quadrature weights, basis matrices, spectral kernels)
reduces to evaluating the orthonormal Hermite functions

    psi_0(x)     = pi**(-1/4) * exp(-x**2 / 2)
    psi_1(x)     = sqrt(2) * x * psi_0(x)
    psi_{k+1}(x) = sqrt(2/(k+1)) * x * psi_k(x) - sqrt(k/(k+1)) * psi_{k-1}(x)

on many points, so these loops are the only performance-sensitive code in
the package.  Two interchangeable implementations live here: numba-jitted
loops and a vectorized pure-numpy fallback.  The numpy path is used
automatically when numba is not importable, or can be forced by setting the
environment variable ``FOURLAB_NO_NUMBA=1`` before import.

The two paths agree bitwise, which the tests assert.  That only works
because nothing transcendental happens inside the kernels: the Gaussian seed
row is computed once by shared numpy code (vectorized exp can differ from
scalar libm exp by an ulp, so it must not be duplicated per path), and both
kernels then apply the same precomputed coefficients with plain multiplies
and subtractions, which IEEE 754 rounds identically no matter how they are
batched.

The normalized recurrence is the whole point: the classical closed form with
factorials overflows near n = 85, while the recurrence keeps every
intermediate O(1) and stays finite up to n = 10**4 and beyond.  Where the
seed itself underflows (|x| >~ 37) the plain recurrence collapses to zero
even though psi_n(x) may be O(1); hermite_order_scaled carries an explicit
power-of-2 exponent through the recurrence to cover that regime.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("FOURLAB_NO_NUMBA", "").strip().lower()
_FORCED_OFF = _flag not in ("", "0", "false", "no")

try:
    if _FORCED_OFF:
        raise ImportError("numba disabled via FOURLAB_NO_NUMBA")
    from numba import njit
except ImportError:
    njit = None

NUMBA_ENABLED = njit is not None

_SEED = np.pi ** -0.25


def recurrence_coeffs(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (a, b) with psi_{k+1} = a[k]*x*psi_k - b[k]*psi_{k-1}.

    Shared by all implementations so that every path multiplies by the
    exact same doubles.
    """
    k = np.arange(max(n_max - 1, 0), dtype=np.float64)
    return np.sqrt(2.0 / (k + 1.0)), np.sqrt(k / (k + 1.0))


def seed_row(x: np.ndarray) -> np.ndarray:
    """psi_0 on the points x; the one transcendental evaluation, done once."""
    return _SEED * np.exp(-0.5 * x * x)


def _table_numpy(x, seed, a, b, n_max):
    out = np.empty((x.shape[0], n_max), dtype=np.float64)
    out[:, 0] = seed
    prev = np.zeros_like(x)
    for k in range(n_max - 1):
        out[:, k + 1] = a[k] * x * out[:, k] - b[k] * prev
        prev = out[:, k]
    return out


def _table_loops(x, seed, a, b, n_max):
    m = x.shape[0]
    out = np.empty((m, n_max), dtype=np.float64)
    for i in range(m):
        xi = x[i]
        p_prev = 0.0
        p = seed[i]
        out[i, 0] = p
        for k in range(n_max - 1):
            p_next = a[k] * xi * p - b[k] * p_prev
            out[i, k + 1] = p_next
            p_prev = p
            p = p_next
    return out


def _order_numpy(n, x, seed, a, b):
    p = seed.copy()
    prev = np.zeros_like(x)
    for k in range(n):
        p, prev = a[k] * x * p - b[k] * prev, p
    return p


def _order_loops(n, x, seed, a, b):
    m = x.shape[0]
    out = np.empty(m, dtype=np.float64)
    for i in range(m):
        xi = x[i]
        p_prev = 0.0
        p = seed[i]
        for k in range(n):
            p_next = a[k] * xi * p - b[k] * p_prev
            p_prev = p
            p = p_next
        out[i] = p
    return out


if NUMBA_ENABLED:
    _table_impl = njit(cache=True)(_table_loops)
    _order_impl = njit(cache=True)(_order_loops)
else:
    _table_impl = _table_numpy
    _order_impl = _order_numpy


def hermite_table(x: np.ndarray, n_max: int) -> np.ndarray:
    """Evaluate psi_0 .. psi_{n_max-1} on the points x; shape (len(x), n_max)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    x = np.ascontiguousarray(x, dtype=np.float64)
    a, b = recurrence_coeffs(n_max)
    return _table_impl(x, seed_row(x), a, b, n_max)


def hermite_order(n: int, x: np.ndarray) -> np.ndarray:
    """Evaluate the single function psi_n on the points x."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.ascontiguousarray(x, dtype=np.float64)
    a, b = recurrence_coeffs(n + 1)
    return _order_impl(n, x, seed_row(x), a, b)


def hermite_order_scaled(n: int, x: np.ndarray) -> np.ndarray:
    """psi_n via a recurrence that carries a separate power-of-2 exponent.

    For |x| beyond ~37 the Gaussian seed underflows even though psi_n(x)
    itself may be O(1) (the recurrence climbs back up through the barrier).
    Renormalizing by exact powers of two at every step sidesteps that; the
    mantissa arithmetic is otherwise identical to the plain recurrence, so
    wherever the plain path stays normal the two agree bitwise.  numpy-only:
    it backs hermite_psi and the quadrature weights, not the hot table path.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.ascontiguousarray(x, dtype=np.float64)
    a, b = recurrence_coeffs(n + 1)
    half_sq = 0.5 * x * x
    plain = half_sq <= 690.0  # seed comfortably inside the normal range
    with np.errstate(under="ignore"):
        log2_seed = (-half_sq - 0.25 * np.log(np.pi)) / np.log(2.0)
        exponent = np.floor(log2_seed)
        exponent = np.where(np.isfinite(exponent), exponent, 0.0)
        p = np.where(plain, seed_row(x), np.exp2(log2_seed - exponent))
    e = np.where(plain, 0.0, exponent).astype(np.int64)
    p_prev = np.zeros_like(x)
    for k in range(n):
        p, p_prev = a[k] * x * p - b[k] * p_prev, p
        _, e1 = np.frexp(p)
        _, e2 = np.frexp(p_prev)
        shift = np.maximum(e1, e2)
        p = np.ldexp(p, -shift)
        p_prev = np.ldexp(p_prev, -shift)
        e = e + shift
    with np.errstate(under="ignore"):
        return np.ldexp(p, e)