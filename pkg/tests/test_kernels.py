"""The two kernel implementations must agree bitwise, not just closely."""

import os
import subprocess
import sys

import numpy as np
import pytest

from fourlab import _kernels


def grid_points(m):
    with np.errstate(all="ignore"):
        return np.polynomial.hermite.hermgauss(m)[0]


@pytest.mark.parametrize("m,n_max", [(8, 8), (64, 32), (256, 128), (257, 129)])
def test_table_paths_bitwise_identical(m, n_max):
    x = grid_points(m)
    seed = _kernels.seed_row(x)
    a, b = _kernels.recurrence_coeffs(n_max)
    ref = _kernels._table_numpy(x, seed, a, b, n_max)
    out = _kernels._table_impl(x, seed, a, b, n_max)
    assert np.array_equal(ref, out)


@pytest.mark.parametrize("m", [16, 256, 512])
def test_order_paths_bitwise_identical(m):
    x = grid_points(m)
    seed = _kernels.seed_row(x)
    a, b = _kernels.recurrence_coeffs(m)
    ref = _kernels._order_numpy(m - 1, x, seed, a, b)
    out = _kernels._order_impl(m - 1, x, seed, a, b)
    assert np.array_equal(ref, out)


def test_order_matches_last_table_column():
    x = np.linspace(-5, 5, 41)
    table = _kernels.hermite_table(x, 40)
    assert np.array_equal(_kernels.hermite_order(39, x), table[:, 39])


@pytest.mark.parametrize("m", [8, 64, 256, 704])
def test_scaled_recurrence_bitwise_in_normal_regime(m):
    # power-of-2 renormalization is exact, so while the plain path stays
    # inside the normal double range the two evaluators cannot differ
    x = grid_points(m)
    plain = _kernels.hermite_order(m - 1, x)
    scaled = _kernels.hermite_order_scaled(m - 1, x)
    assert np.array_equal(plain, scaled)


def test_scaled_recurrence_survives_seed_underflow():
    # at x = 50 the Gaussian seed is ~ exp(-1250), far below double range,
    # but psi_10000(50) is O(0.07): only the scaled path can climb back up
    x = np.array([50.0])
    assert _kernels.hermite_order(10000, x)[0] == 0.0
    val = _kernels.hermite_order_scaled(10000, x)[0]
    assert np.isfinite(val) and abs(val) > 0.01


def test_scaled_recurrence_true_far_tail_underflows_to_zero():
    assert _kernels.hermite_order_scaled(0, np.array([100.0]))[0] == 0.0
    assert _kernels.hermite_order_scaled(2, np.array([1e6]))[0] == 0.0


def test_recurrence_coeffs_values():
    a, b = _kernels.recurrence_coeffs(4)
    np.testing.assert_allclose(a, [np.sqrt(2.0), 1.0, np.sqrt(2.0 / 3.0)], rtol=0, atol=0)
    np.testing.assert_allclose(b, [0.0, np.sqrt(0.5), np.sqrt(2.0 / 3.0)], rtol=0, atol=0)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        _kernels.hermite_table(np.zeros(3), 0)
    with pytest.raises(ValueError):
        _kernels.hermite_order(-1, np.zeros(3))
    with pytest.raises(ValueError):
        _kernels.hermite_order_scaled(-1, np.zeros(3))


def test_env_flag_forces_numpy_path():
    code = (
        "import fourlab._kernels as k; import numpy as np; "
        "print(k.NUMBA_ENABLED); "
        "x = np.linspace(-4, 4, 17); "
        "print(repr(k.hermite_table(x, 12).sum()))"
    )
    env = dict(os.environ, FOURLAB_NO_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert res.returncode == 0, res.stderr
    flagged, total = res.stdout.split()
    assert flagged == "False"
    # and the fallback produces the exact same table as whatever runs here
    x = np.linspace(-4, 4, 17)
    assert total == repr(_kernels.hermite_table(x, 12).sum())
