"""Sampled spherically symmetric radial functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid


@dataclass(frozen=True)
class RadialProfile:
    """Non-negative radial density n(r) on a strictly increasing grid.

    ``norm`` is the trapezoid estimate of the 3-d integral 4 pi int r^2 n dr.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("profile values must be non-negative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def norm(self) -> float:
        return float(trapezoid(4 * np.pi * self.grid**2 * self.values, self.grid))

    def enclosed(self) -> np.ndarray:
        """Cumulative 4 pi int_0^r s^2 n(s) ds on the grid."""
        return cumulative_trapezoid(4 * np.pi * self.grid**2 * self.values, self.grid, initial=0.0)

    def to_csv_rows(self):
        yield ("r", "value")
        for r, v in zip(self.grid, self.values):
            yield (repr(float(r)), repr(float(v)))


def shell_potential(r: np.ndarray, n: np.ndarray) -> np.ndarray:
    """U(r) = int n(r') / |r - r'| d^3r' for a spherically symmetric n.

    Uses U(r) = q(r)/r + 4 pi int_r^inf n(s) s ds, with q the enclosed
    integral, so the cost is linear in the grid size.
    """
    q = cumulative_trapezoid(4 * np.pi * r**2 * n, r, initial=0.0)
    outer = cumulative_trapezoid(4 * np.pi * r * n, r, initial=0.0)
    outer = outer[-1] - outer
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = np.where(r > 0, q / np.where(r > 0, r, 1.0), 0.0)
    return inner + outer
