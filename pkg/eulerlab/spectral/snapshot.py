"""
Text snapshot format:

    # dim=<n> N=<N> field=<name> t=<time>
    xi_1 ... xi_n re im

one line per retained mode, 17 significant digits.
"""

import os
import re
from typing import List, TextIO, Tuple

import numpy as np

from ..errors import ShapeMismatch
from .fields import ScalarField
from .grid import GridSpec, make_grid, mode_index, retained_modes

HEADER_PATTERN = re.compile(r"#\s*dim=(\d+)\s+N=(\d+)\s+field=(\S+)\s+t=(\S+)")


def fmt(value: float) -> str:
    return f"{value:.17g}"


def snapshot_lines(field: ScalarField, name: str, t: float) -> List[str]:
    grid = field.grid
    lines = [f"# dim={grid.dim} N={grid.N} field={name} t={fmt(t)}"]
    for xi in retained_modes(grid):
        c = field.coeffs[mode_index(grid, xi)]
        lines.append(" ".join(str(int(v)) for v in xi) + f" {fmt(c.real)} {fmt(c.imag)}")
    return lines


def write_snapshot(path: str, field: ScalarField, name: str, t: float) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(snapshot_lines(field, name, t)) + "\n")
    return path


def read_snapshot(path: str, dealias_fraction: float = 2.0 / 3.0) -> Tuple[ScalarField, str, float]:
    """
    Parse a snapshot file.

    Returns:
        (field, field name, time)
    """
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline()
        match = HEADER_PATTERN.match(header.strip())
        if not match:
            raise ShapeMismatch(f"bad snapshot header in {path}: {header.strip()!r}")
        dim, N, name, t = int(match.group(1)), int(match.group(2)), match.group(3), float(match.group(4))
        grid = make_grid(dim, N, dealias_fraction)
        coeffs = np.zeros(grid.shape, dtype=np.complex128)
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != dim + 2:
                raise ShapeMismatch(f"expected {dim + 2} columns in {path}, got {len(parts)}")
            xi = [int(v) for v in parts[:dim]]
            coeffs[mode_index(grid, xi)] = complex(float(parts[dim]), float(parts[dim + 1]))
    return ScalarField(grid, coeffs), name, t


def write_matrix(stream: TextIO, grid: GridSpec, matrix: np.ndarray, name: str, t: float):
    """Dense matrix in snapshot layout: 'row col re im' per entry."""
    stream.write(f"# dim={grid.dim} N={grid.N} field={name} t={fmt(t)}\n")
    rows, cols = matrix.shape
    for i in range(rows):
        for j in range(cols):
            stream.write(f"{i} {j} {fmt(matrix[i, j].real)} {fmt(matrix[i, j].imag)}\n")
