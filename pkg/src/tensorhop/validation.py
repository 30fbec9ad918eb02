"""Small input-validation helpers used across the package."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError


def as_float_matrix(x, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-d float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def check_symmetric(a, name: str = "matrix") -> np.ndarray:
    a = check_square(a, name)
    if not np.array_equal(a, a.T):
        raise ValueError(f"{name} must be symmetric")
    return a


def check_node_index(i: int, n: int, name: str = "node") -> None:
    if not 0 <= i < n:
        raise ValueError(f"{name} {i} out of range for {n} nodes")


def check_reduction_dim(d: int, n: int) -> None:
    if not 1 <= d <= n:
        raise DimensionError(f"reduction dimension d={d} must satisfy 1 <= d <= {n}")
