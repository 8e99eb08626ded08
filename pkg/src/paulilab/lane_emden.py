"""Lane-Emden polytropes, used as the reference solutions for the limits of
the white-dwarf structure equation (index 3/2 and index 3)."""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp


class LaneEmdenSolution(NamedTuple):
    index: float
    xi1: float        # first zero of theta
    omega: float      # -xi1^2 theta'(xi1)
    solution: object


def _series(index: float, xi: float):
    # theta = 1 - xi^2/6 + n xi^4/120
    theta = 1.0 - xi**2 / 6.0 + index * xi**4 / 120.0
    dtheta = -xi / 3.0 + index * xi**3 / 30.0
    return theta, dtheta


@lru_cache(maxsize=16)
def lane_emden(index: float, xi_start: float = 1e-5, rtol: float = 1e-12) -> LaneEmdenSolution:
    """Integrate theta'' + (2/xi) theta' = -theta^n from the regular centre to theta = 0."""

    def rhs(xi, y):
        th, dth = y
        return [dth, -np.maximum(th, 0.0) ** index - 2.0 * dth / xi]

    def surface(xi, y):
        return y[0]

    surface.terminal = True
    surface.direction = -1
    sol = solve_ivp(rhs, (xi_start, 100.0), _series(index, xi_start), method="DOP853",
                    rtol=rtol, atol=1e-14, events=surface, dense_output=True)
    if not sol.t_events[0].size:
        raise RuntimeError(f"no surface for index {index} before xi = 100")
    xi1 = float(sol.t_events[0][0])
    dth = float(sol.y_events[0][0][1])
    return LaneEmdenSolution(index, xi1, -xi1 * xi1 * dth, sol)
