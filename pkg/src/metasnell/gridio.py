"""CSV schema for sampled grids: columns x1,x2,<name> on a full tensor grid."""

from __future__ import annotations

import numpy as np

from .errors import BadParams


def read_grid_csv(path, value_name: str = "u"):
    """Read a (x1, x2, value) CSV into sorted axis nodes and a value grid.

    The rows must cover a complete tensor grid; ordering is free.  Returns
    ``(x1_nodes, x2_nodes, values)`` with ``values[i, j]`` at
    ``(x1_nodes[i], x2_nodes[j])``.
    """
    with open(path) as fh:
        first = fh.readline()
    skip = 1 if any(c.isalpha() for c in first) else 0
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    if data.shape[1] != 3:
        raise BadParams(f"{path}: expected 3 columns (x1,x2,{value_name}), got {data.shape[1]}")
    x1 = np.unique(data[:, 0])
    x2 = np.unique(data[:, 1])
    if x1.size * x2.size != data.shape[0]:
        raise BadParams(f"{path}: rows do not form a complete {x1.size}x{x2.size} grid")
    values = np.full((x1.size, x2.size), np.nan)
    i = np.searchsorted(x1, data[:, 0])
    j = np.searchsorted(x2, data[:, 1])
    values[i, j] = data[:, 2]
    if np.isnan(values).any():
        raise BadParams(f"{path}: duplicate or missing grid nodes")
    return x1, x2, values


def write_grid_csv(path, x1, x2, values, value_name: str = "phi") -> None:
    """Write a value grid in the same (x1, x2, value) schema, row-major in x1."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape != (x1.size, x2.size):
        raise BadParams(f"values shape {values.shape} does not match axes "
                        f"({x1.size}, {x2.size})")
    with open(path, "w") as fh:
        fh.write(f"x1,x2,{value_name}\n")
        for i in range(x1.size):
            for j in range(x2.size):
                fh.write(f"{x1[i]:.17g},{x2[j]:.17g},{values[i, j]:.17g}\n")
