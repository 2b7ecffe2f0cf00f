"""Serialization: deterministic JSON reports and 17-significant-digit CSV.

Files are written atomically (temp file in the target directory, then
rename), JSON keys are sorted, and every float in a CSV is rendered with
``%.17g`` so that a double survives the round trip bit for bit.  The only
non-deterministic field any writer produces is the optional ``generated_at``
timestamp inside JSON metadata; byte-level comparisons of repeated runs
should strip that one key.

Grid samples and kernels are exported *unfolded* (the plain function values
f(x_i), not sqrt(w_i) f(x_i)): external consumers should not need to know
about quadrature folding.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .basis import QuadratureGrid, gauss_hermite
from .errors import ConfigError, DimensionError
from .states import GridState


def fmt17(x: float) -> str:
    """A double as text, lossless under float() round-trip."""
    return format(float(x), ".17g")


def _atomic_write(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def write_json(obj, path):
    _atomic_write(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _write_rows(path, header, rows):
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write(path, buf.getvalue())


def write_operator_csv(op, path):
    """Sparse triplet export: row, col, re, im for each nonzero entry."""
    rows = []
    v = op.values
    nz = np.argwhere(v != 0)
    for i, j in nz:
        rows.append([int(i), int(j), fmt17(v[i, j].real), fmt17(v[i, j].imag)])
    _write_rows(path, ["row", "col", "re", "im"], rows)


def read_operator_csv(path, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=np.complex128)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            i, j = int(rec["row"]), int(rec["col"])
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionError(f"operator entry ({i}, {j}) outside dim {dim}")
            out[i, j] = float(rec["re"]) + 1j * float(rec["im"])
    return out


def write_coeffs_csv(coeffs: np.ndarray, path):
    rows = [[n, fmt17(c.real), fmt17(complex(c).imag)] for n, c in enumerate(np.asarray(coeffs))]
    _write_rows(path, ["n", "re", "im"], rows)


def read_coeffs_csv(path) -> np.ndarray:
    vals = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            vals.append((int(rec["n"]), float(rec["re"]) + 1j * float(rec["im"])))
    vals.sort()
    return np.array([v for _, v in vals], dtype=np.complex128)


def write_samples_csv(grid: QuadratureGrid, values: np.ndarray, path):
    """Unfolded complex samples on the grid: x, re, im."""
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != grid.nodes.shape:
        raise DimensionError("samples must match the grid length")
    rows = [
        [fmt17(x), fmt17(v.real), fmt17(v.imag)]
        for x, v in zip(grid.nodes, values)
    ]
    _write_rows(path, ["x", "re", "im"], rows)


def write_kernel_csv(grid: QuadratureGrid, kernel: np.ndarray, path):
    """Dense unfolded kernel as x, y, re, im rows (row-major in the grid)."""
    kernel = np.asarray(kernel, dtype=np.complex128)
    m = len(grid)
    if kernel.shape != (m, m):
        raise DimensionError(f"kernel shape {kernel.shape} does not match grid ({m}, {m})")
    rows = []
    for i in range(m):
        xi = fmt17(grid.nodes[i])
        for j in range(m):
            v = kernel[i, j]
            rows.append([xi, fmt17(grid.nodes[j]), fmt17(v.real), fmt17(v.imag)])
    _write_rows(path, ["x", "y", "re", "im"], rows)


def _sidecar(path) -> Path:
    return Path(path).with_suffix(".json")


def write_grid_state(state: GridState, path) -> Path:
    """CSV of x, rho, alpha plus a JSON sidecar with the non-tabular fields."""
    rows = [
        [fmt17(x), fmt17(r), fmt17(a)]
        for x, r, a in zip(state.grid.nodes, state.rho, state.alpha)
    ]
    _write_rows(path, ["x", "rho", "alpha"], rows)
    side = _sidecar(path)
    write_json(
        {
            "perspective": state.perspective,
            "dim": state.dim,
            "leakage": state.leakage,
        },
        side,
    )
    return side


def load_grid_state(path) -> GridState:
    """Rebuild a GridState from its CSV and sidecar.

    The quadrature grid is regenerated from the row count and checked
    against the stored nodes, since weights are deliberately not exported.
    """
    xs, rho, alpha = [], [], []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            xs.append(float(rec["x"]))
            rho.append(float(rec["rho"]))
            alpha.append(float(rec["alpha"]))
    side = _sidecar(path)
    if not side.exists():
        raise ConfigError(f"grid state sidecar {side} is missing")
    meta = read_json(side)
    grid = gauss_hermite(len(xs))
    if not np.allclose(grid.nodes, np.array(xs), rtol=0, atol=1e-12):
        raise ConfigError(f"nodes in {path} are not a Gauss-Hermite grid of order {len(xs)}")
    rho = np.array(rho)
    defined = rho > 1e-12
    return GridState(
        grid=grid,
        rho=rho,
        alpha=np.array(alpha),
        defined=defined,
        perspective=meta["perspective"],
        dim=int(meta["dim"]),
        leakage=float(meta.get("leakage", 0.0)),
    )
