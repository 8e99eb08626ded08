"""Thomas-Fermi theory of the neutral atom.

The screening function solves phi'' = phi^(3/2) / sqrt(x) with phi(0) = 1
and phi -> 0, where r = b x and b = b0 Z^(-1/3) a0, b0 = (1/4)(9 pi^2/2)^(1/3).
The electron density is n(r) = Z / (4 pi b^3) (phi/x)^(3/2).

Energy from the initial slope
-----------------------------
Write T, V_ne, V_ee for the kinetic, nuclear and repulsion energies.

* Scaling n -> l^3 n(l x) at fixed N gives the virial theorem 2T + V_ne + V_ee = 0.
* Multiplying the Euler-Lagrange equation (5/3) c n^(2/3) = e^2 Z/r - e^2 int n'/|r-r'|
  (chemical potential 0 for the neutral atom) by n and integrating gives
  (5/3) T = -V_ne - 2 V_ee.

Together these give V_ee = -V_ne/7 and E = T + V_ne + V_ee = (3/7) V_ne.
Since int x^(-1/2) phi^(3/2) dx = int phi'' dx = -phi'(0),
V_ne = -e^2 Z int n/r = e^2 Z^2 phi'(0) / b, so

    E = (3/7) e^2 Z^2 phi'(0) / b = (6 / (7 b0)) phi'(0) Z^(7/3) Ry    (e^2 = 2 Ry a0).

:func:`tf_energy` returns this value and, as an independent check, the
same energy from direct quadrature of the three terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad, simpson, solve_ivp, trapezoid
from scipy.optimize import brentq

B0 = 0.25 * (4.5 * math.pi**2) ** (1.0 / 3.0)
KINETIC_COEFF = 0.6 * (3.0 * math.pi**2) ** (2.0 / 3.0)  # Ry a0^2
TAIL_EXPONENT = (math.sqrt(73.0) - 7.0) / 2.0
X_START = 1e-8


class BracketError(RuntimeError):
    def __init__(self, lo: float, hi: float, message: str = "slope bracket failed"):
        super().__init__(f"{message}: last bracket [{lo}, {hi}]")
        self.bracket = (lo, hi)


def _rhs(x, y):
    return [y[1], max(y[0], 0.0) ** 1.5 / math.sqrt(x)]


def series_start(slope: float, x: float) -> tuple[float, float]:
    """phi and phi' from the small-x expansion
    1 + s x + (4/3) x^(3/2) + (2/5) s x^(5/2) + x^3/3 + (3/70) s^2 x^(7/2)."""
    phi = (1 + slope * x + 4 / 3 * x**1.5 + 0.4 * slope * x**2.5 + x**3 / 3
           + 3 / 70 * slope**2 * x**3.5)
    dphi = (slope + 2 * x**0.5 + slope * x**1.5 + x**2 + 0.15 * slope**2 * x**2.5)
    return phi, dphi


def _crosses_zero(x, y):
    return y[0]


_crosses_zero.terminal = True


def _turns_up(x, y):
    return y[1]


_turns_up.terminal = True


def _integrate(slope: float, x_end: float, events=None, rtol=1e-13):
    return solve_ivp(_rhs, (X_START, x_end), series_start(slope, X_START), method="DOP853",
                     rtol=rtol, atol=1e-15, events=events, dense_output=True)


def classify_slope(slope: float, x_stop: float = 1e4) -> int:
    """-1 if phi reaches zero, +1 if phi turns upward, 0 if neither by x_stop."""
    sol = _integrate(slope, x_stop, events=[_crosses_zero, _turns_up])
    if sol.t_events[0].size:
        return -1
    if sol.t_events[1].size:
        return 1
    return 0


def tail(x, k: float):
    """Decaying solution family 144/x^3 (1 + k (144/x^3)^(l/3))^(-3/l), l = (sqrt 73 - 7)/2."""
    x = np.asarray(x, dtype=float)
    u = 144.0 / x**3
    return u * (1.0 + k * u ** (TAIL_EXPONENT / 3.0)) ** (-3.0 / TAIL_EXPONENT)


@dataclass(frozen=True)
class TFScreening:
    """Neutral-atom screening function.

    Numerical solution on (0, x_match], analytic tail beyond with ``tail_k``
    fitted so that phi is continuous at x_match.
    """

    x: np.ndarray
    phi: np.ndarray
    slope0: float
    x_match: float
    tail_k: float
    solution: object

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        small = x < X_START
        mid = (~small) & (x <= self.x_match)
        big = x > self.x_match
        if small.any():
            out[small] = series_start(self.slope0, x[small])[0]
        if mid.any():
            out[mid] = self.solution.sol(x[mid])[0]
        if big.any():
            out[big] = tail(x[big], self.tail_k)
        return out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x > self.x_match) or np.any(x < X_START):
            raise ValueError("derivative available on [X_START, x_match] only")
        return self.solution.sol(x)[1]


@lru_cache(maxsize=8)
def solve_screening(tolerance: float = 1e-12, x_max: float = 50.0) -> TFScreening:
    """Shoot on phi'(0) in [-2, -1], bisecting until the bracket is below ``tolerance``."""
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    lo, hi = -2.0, -1.0
    if classify_slope(lo) != -1 or classify_slope(hi) != 1:
        raise BracketError(lo, hi)
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        kind = classify_slope(mid)
        if kind == 0:
            raise BracketError(lo, hi, "slope neither crosses nor diverges")
        if kind < 0:
            lo = mid
        else:
            hi = mid
        if mid in (lo, hi) and hi - lo <= 4 * np.spacing(abs(mid)):
            break
    slope = 0.5 * (lo + hi)
    sol = _integrate(slope, x_max)
    phi_m = float(sol.sol(x_max)[0])
    k = brentq(lambda kk: float(tail(x_max, kk)) - phi_m, 1e-3, 1e3, xtol=1e-14)
    x = np.geomspace(X_START, x_max, 2000)
    return TFScreening(x=x, phi=sol.sol(x)[0], slope0=slope, x_match=x_max, tail_k=k, solution=sol)


def ode_residual(screening: TFScreening, x: np.ndarray) -> np.ndarray:
    """|phi'' - phi^(3/2)/sqrt(x)| / (phi^(3/2)/sqrt(x)) with phi'' by central differences."""
    x = np.asarray(x, dtype=float)
    h = 1e-4 * x
    d2 = (screening.derivative(x + h) - screening.derivative(x - h)) / (2 * h)
    f = screening(x) ** 1.5 / np.sqrt(x)
    return np.abs(d2 - f) / f


class TFEnergy(NamedTuple):
    energy: float  # Ry, slope relation
    direct: float  # Ry, quadrature of T + V_ne + V_ee
    kinetic: float
    nuclear: float
    repulsion: float
    slope0: float


def slope_energy_coefficient(slope0: float) -> float:
    """E / Z^(7/3) in Ry from the initial slope: 6 phi'(0) / (7 b0)."""
    return 6.0 * slope0 / (7.0 * B0)


@lru_cache(maxsize=4)
def _dimensionless_integrals(tolerance: float = 1e-12):
    """I_T = int x^-1/2 phi^5/2, I_N = int x^-1/2 phi^3/2, I_ee, and the total charge."""
    scr = solve_screening(tolerance)
    # t = sqrt(x) removes the x^-1/2 singularities on the solved range
    t = np.linspace(0.0, math.sqrt(scr.x_match), 40001)
    phi = scr(t * t)
    x_tail = np.geomspace(scr.x_match, 1e8, 4001)
    phi_tail = tail(x_tail, scr.tail_k)

    I_T = simpson(2 * phi**2.5, x=t) + quad(lambda x: x**-0.5 * tail(x, scr.tail_k) ** 2.5,
                                             scr.x_match, np.inf, limit=200)[0]
    I_N = simpson(2 * phi**1.5, x=t) + quad(lambda x: x**-0.5 * tail(x, scr.tail_k) ** 1.5,
                                             scr.x_match, np.inf, limit=200)[0]

    # repulsion via the enclosed-charge / outer-shell split of the potential
    dQa = 2 * t * t * phi**1.5
    dQb = np.sqrt(x_tail) * phi_tail**1.5
    Qa = cumulative_trapezoid(dQa, t, initial=0.0)
    Qb = Qa[-1] + cumulative_trapezoid(dQb, x_tail, initial=0.0)
    Ca = cumulative_trapezoid(2 * phi**1.5, t, initial=0.0)
    Cb = Ca[-1] + cumulative_trapezoid(phi_tail**1.5 / np.sqrt(x_tail), x_tail, initial=0.0)
    total = Cb[-1]
    ua = np.zeros_like(t)
    ua[1:] = Qa[1:] / (t[1:] ** 2)
    ua += total - Ca
    ub = Qb / x_tail + (total - Cb)
    I_ee = simpson(dQa * ua, x=t) + trapezoid(dQb * ub, x=x_tail)
    Q_total = Qb[-1]
    return I_T, I_N, I_ee, Q_total


def tf_energy(Z: float, tolerance: float = 1e-12) -> TFEnergy:
    """Thomas-Fermi energy of the neutral atom in Ry, with its three parts."""
    if Z < 1:
        raise ValueError("Z must be >= 1")
    scr = solve_screening(tolerance)
    I_T, I_N, I_ee, _ = _dimensionless_integrals(tolerance)
    z73 = Z ** (7.0 / 3.0)
    kinetic = KINETIC_COEFF * (4 * math.pi) ** (-2.0 / 3.0) / B0**2 * I_T * z73
    nuclear = -2.0 / B0 * I_N * z73
    repulsion = 1.0 / B0 * I_ee * z73
    return TFEnergy(
        energy=slope_energy_coefficient(scr.slope0) * z73,
        direct=kinetic + nuclear + repulsion,
        kinetic=kinetic,
        nuclear=nuclear,
        repulsion=repulsion,
        slope0=scr.slope0,
    )


def tf_length(Z: float) -> float:
    """b = b0 Z^(-1/3) in a0."""
    return B0 * Z ** (-1.0 / 3.0)


def tf_density(Z: float, r, tolerance: float = 1e-12):
    """Electron density in a0^-3: Z^2 / (4 pi b0^3) (phi(x)/x)^(3/2), x = r/b."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be > 0")
    scr = solve_screening(tolerance)
    x = r / tf_length(Z)
    return Z * Z / (4 * math.pi * B0**3) * (scr(x) / x) ** 1.5


def tf_charge(tolerance: float = 1e-12) -> float:
    """int n d^3r / Z from the solved screening function (1 for neutrality)."""
    return float(_dimensionless_integrals(tolerance)[3])
