"""Relativistic Thomas-Fermi (Chandrasekhar) theory of cold white dwarfs.

Natural units throughout: hbar = c = m_e = 1, so densities are in
(m_e c / hbar)^3, lengths in hbar/(m_e c), energies in m_e c^2 and the
coupling kappa = G (m_Z/Z)^2 / (hbar c) is a pure number (~1e-38).

The functional is

    E[n] = int eps(n) d^3x - (kappa/2) int int n(x) n(x') / |x - x'|,

with eps the kinetic energy density of a degenerate electron gas
(rest mass subtracted). Its Euler-Lagrange equation with the chemical
potential mu(n) = sqrt(1 + p_F^2) - 1 reads mu(n(r)) - kappa U(r) = const,
U the potential of n. Applying the Laplacian gives

    (1/r^2) d/dr (r^2 dmu/dr) = -4 pi kappa n(mu),   n(mu) = (mu (mu + 2))^(3/2) / (3 pi^2),

equivalent to hydrostatic equilibrium dP/dr = -kappa n m_enc / r^2 since
dP = n dmu. With r = L rho, L = sqrt(3 pi / (4 kappa)), the equation is
universal: mu'' + 2 mu'/rho = -(mu (mu + 2))^(3/2), and
N = (4 L^3 / 3 pi) omega with omega = -rho_1^2 mu'(rho_1) at the surface.
Hence kappa N^(2/3) = (3 pi/4)^(1/3) omega^(2/3) depends only on the
central density, and tends to a finite limit as that density grows.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, simpson, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.special import binom

from .constants import PhysicalConstants, codata
from .lane_emden import lane_emden
from .profiles import RadialProfile

QUOTED_TAU_C = 3.1
SERIES_THRESHOLD = 0.3
_K = np.arange(1, 25)  # 0.3^48 < 1e-25
_BINOM = binom(0.5, _K)
_PI2 = math.pi**2


class UnboundedProfile(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(f"{message}: {diagnostics}")
        self.diagnostics = diagnostics


# --- equation of state ----------------------------------------------------

def fermi_momentum(n):
    """p_F = (3 pi^2 n)^(1/3)."""
    return np.cbrt(3.0 * _PI2 * np.asarray(n, dtype=float))


def _check_density(n):
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise ValueError("density must be non-negative")
    return n


def _eps_of_x(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < SERIES_THRESHOLD
    xs = x[small]
    # sqrt(1+p^2) - 1 = sum_k binom(1/2, k) p^(2k), integrated against p^2
    powers = xs[..., None] ** (2 * _K + 3)
    out[small] = np.sum(_BINOM * powers / (2 * _K + 3), axis=-1) / _PI2
    xl = x[~small]
    root = np.sqrt(1.0 + xl * xl)
    out[~small] = ((xl * (2 * xl * xl + 1) * root - np.arcsinh(xl)) / 8.0 - xl**3 / 3.0) / _PI2
    return out


def _pressure_of_x(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < SERIES_THRESHOLD
    xs = x[small]
    powers = xs[..., None] ** (2 * _K + 3)
    out[small] = np.sum(_BINOM * powers * (2 * _K) / (3.0 * (2 * _K + 3)), axis=-1) / _PI2
    xl = x[~small]
    n = xl**3 / (3 * _PI2)
    mu = xl * xl / (np.sqrt(1.0 + xl * xl) + 1.0)
    out[~small] = n * mu - _eps_of_x(xl)
    return out


def energy_density(n):
    """eps(n) = (1/pi^2) int_0^pF [sqrt(p^2 + 1) - 1] p^2 dp (closed form; series for pF < 0.3)."""
    return _eps_of_x(fermi_momentum(_check_density(n)))


def pressure(n):
    """P = n eps'(n) - eps(n)."""
    return _pressure_of_x(fermi_momentum(_check_density(n)))


def eos_eval(n):
    """(eps, P) at number density n."""
    n = _check_density(n)
    x = fermi_momentum(n)
    eps, P = _eps_of_x(x), _pressure_of_x(x)
    if eps.ndim == 0:
        return float(eps), float(P)
    return eps, P


def chemical_potential(n):
    """mu = eps'(n) = sqrt(1 + pF^2) - 1."""
    x = fermi_momentum(_check_density(n))
    return x * x / (np.sqrt(1.0 + x * x) + 1.0)


def density_from_mu(mu):
    mu = np.maximum(np.asarray(mu, dtype=float), 0.0)
    return (mu * (mu + 2.0)) ** 1.5 / (3.0 * _PI2)


def nonrelativistic_energy_density(n):
    return 0.3 * (3 * _PI2) ** (2.0 / 3.0) * np.asarray(n, float) ** (5.0 / 3.0)


def ultrarelativistic_energy_density(n):
    return 0.75 * (3 * _PI2) ** (1.0 / 3.0) * np.asarray(n, float) ** (4.0 / 3.0)


@dataclass(frozen=True)
class DegenerateEOS:
    """EOS for a given mass per electron (kg); tabulates in SI units."""

    mass_per_electron: float
    constants: PhysicalConstants = field(default_factory=codata)

    @property
    def kappa(self) -> float:
        return self.constants.kappa_natural(self.mass_per_electron)

    def table(self, n_si: Sequence[float]):
        """Rows (n [m^-3], eps [J m^-3], P [Pa], mass density [kg m^-3])."""
        k = self.constants
        n_nat = k.si_density_to_natural(np.asarray(n_si, float))
        eps, P = eos_eval(n_nat)
        scale = k.mc2 / k.compton_length**3
        return np.column_stack([n_si, eps * scale, P * scale, np.asarray(n_si) * self.mass_per_electron])


# --- TF functional on a profile ---------------------------------------------

def _cumulative(y, x):
    return cumulative_simpson(y, x=x, initial=0.0)


def gravitational_potential(r, n):
    """U(r) = int n(x')/|x - x'| d^3x' via enclosed mass and outer shells."""
    r = np.asarray(r, float)
    n = np.asarray(n, float)
    q = _cumulative(4 * math.pi * r**2 * n, r)
    outer = _cumulative(4 * math.pi * r * n, r)
    outer = outer[-1] - outer
    inner = np.zeros_like(r)
    pos = r > 0
    inner[pos] = q[pos] / r[pos]
    return inner + outer


class TFEnergyParts(NamedTuple):
    total: float
    kinetic: float
    gravitational: float


def tf_energy_of_profile(profile: RadialProfile, kappa: float,
                         energy_density_fn: Optional[Callable] = None) -> TFEnergyParts:
    """E[n] = int eps(n) - (kappa/2) int int n n'/|x - x'| for a radial profile.

    The grid should start at r = 0 (or close to it) and cover the support.
    """
    eps_fn = energy_density_fn or energy_density
    r, n = profile.grid, profile.values
    kinetic = float(simpson(4 * math.pi * r**2 * eps_fn(n), x=r))
    U = gravitational_potential(r, n)
    grav = -0.5 * kappa * float(simpson(4 * math.pi * r**2 * n * U, x=r))
    return TFEnergyParts(kinetic + grav, kinetic, grav)


# --- structure ----------------------------------------------------------------


@dataclass(frozen=True)
class WDModel:
    """One white-dwarf configuration in natural units.

    ``mass_per_electron`` is in kg and only used for SI conversions.
    """

    central_density: float
    profile: RadialProfile
    N: float
    R: float
    E_TF: float
    kappa: float
    mass_per_electron: float
    mu_c: float
    xi1: float
    omega: float
    enclosed: np.ndarray = field(repr=False)
    solution: object = field(repr=False, default=None)

    @property
    def tau(self) -> float:
        return self.kappa * self.N ** (2.0 / 3.0)

    @property
    def mass_kg(self) -> float:
        return self.N * self.mass_per_electron

    @property
    def mass_solar(self) -> float:
        return codata().kg_to_solar(self.mass_kg)

    @property
    def radius_m(self) -> float:
        return self.R * codata().compton_length

    @property
    def E_TF_joule(self) -> float:
        return self.E_TF * codata().mc2

    @property
    def central_density_si(self) -> float:
        return codata().natural_density_to_si(self.central_density)


def mass_per_electron_from_kappa(kappa: float, constants: PhysicalConstants | None = None) -> float:
    k = constants or codata()
    return math.sqrt(kappa * k.hbar * k.c / k.G)


def kappa_from_ZA(ZA: float, constants: PhysicalConstants | None = None) -> float:
    k = constants or codata()
    return k.kappa_natural(k.m_N / ZA)


def _source(mu):
    mu = np.maximum(mu, 0.0)
    return (mu * (mu + 2.0)) ** 1.5


def solve_structure(n_c: float, kappa: float, mass_per_electron: float | None = None,
                    points: int = 4001, xi_max: float = 1e3) -> WDModel:
    """Integrate the structure equation outward from a regular centre to mu = 0.

    Internally theta = mu/mu_c and xi = rho/rho_s with rho_s^2 = mu_c / f(mu_c),
    f(mu) = (mu(mu+2))^(3/2), so every central density is integrated at unit scale.
    The surface is the event theta = 0, refined by Brent's method on the dense output.
    """
    if n_c <= 0 or kappa <= 0:
        raise ValueError("n_c and kappa must be > 0")
    if mass_per_electron is None:
        mass_per_electron = mass_per_electron_from_kappa(kappa)
    mu_c = float(chemical_potential(n_c))
    f_c = float(_source(mu_c))
    rho_s = math.sqrt(mu_c / f_c)
    L = math.sqrt(3.0 * math.pi / (4.0 * kappa))
    g1 = 3.0 * (mu_c + 1.0) / (mu_c + 2.0)  # d ln f / d ln mu at the centre

    def rhs(xi, y):
        th, w = y  # w = xi^2 dtheta/dxi
        return [w / (xi * xi), -xi * xi * _source(mu_c * th) / f_c]

    def surface(xi, y):
        return y[0]

    surface.terminal = True
    surface.direction = -1

    xi0 = 1e-4
    y0 = [1.0 - xi0**2 / 6.0 + g1 * xi0**4 / 120.0, -xi0**3 / 3.0 + g1 * xi0**5 / 30.0]
    sol = solve_ivp(rhs, (xi0, xi_max), y0, method="DOP853", rtol=1e-12, atol=1e-15,
                    events=surface, dense_output=True)
    if not sol.t_events[0].size:
        raise UnboundedProfile("unbounded profile", {
            "n_c": n_c, "kappa": kappa, "xi_reached": float(sol.t[-1]),
            "theta_end": float(sol.y[0, -1]), "status": sol.message,
        })
    # the event is located by root finding on the dense output
    xi1 = float(sol.t_events[0][0])
    w1 = float(sol.y_events[0][0][1])
    omega = -rho_s * mu_c * w1
    N = 4.0 * L**3 * omega / (3.0 * math.pi)
    R = xi1 * rho_s * L

    xi = np.concatenate([[0.0], np.linspace(xi0, xi1, points - 1)])
    theta = np.empty_like(xi)
    w = np.empty_like(xi)
    theta[0], w[0] = 1.0, 0.0
    theta[1:], w[1:] = sol.sol(xi[1:])
    theta[-1] = 0.0
    r = xi * rho_s * L
    n = density_from_mu(mu_c * theta)
    enclosed = -4.0 * L**3 * rho_s * mu_c * w / (3.0 * math.pi)
    profile = RadialProfile(r, n)
    energy = tf_energy_of_profile(profile, kappa).total
    return WDModel(central_density=n_c, profile=profile, N=N, R=R, E_TF=energy, kappa=kappa,
                   mass_per_electron=mass_per_electron, mu_c=mu_c, xi1=xi1 * rho_s, omega=omega,
                   enclosed=enclosed, solution=sol)


def hydrostatic_residual(model: WDModel) -> float:
    """max |dP/dr + kappa n m_enc / r^2| / (P_c / R), dP/dr from a spline of P(n(r))."""
    r, n = model.profile.grid, model.profile.values
    P = pressure(n)
    dP = CubicSpline(r, P)(r, 1)
    grav = np.zeros_like(r)
    grav[1:] = model.kappa * n[1:] * model.enclosed[1:] / r[1:] ** 2
    return float(np.max(np.abs(dP + grav)) / (P[0] / model.R))


def euler_lagrange_residual(model: WDModel) -> float:
    """max |mu(n) - kappa U - C| / mu_c on the support, U by quadrature of the profile."""
    r, n = model.profile.grid, model.profile.values
    mu = chemical_potential(n)
    U = gravitational_potential(r, n)
    total = mu - model.kappa * U
    # at the surface mu = 0, so C = -kappa N / R
    C = -model.kappa * model.N / model.R
    return float(np.max(np.abs(total - C)) / model.mu_c)


# --- trial profiles -------------------------------------------------------------

def uniform_ball(N: float, R: float, points: int = 4001) -> RadialProfile:
    r = np.linspace(0.0, R, points)
    return RadialProfile(r, np.full(points, 3.0 * N / (4.0 * math.pi * R**3)))


def gaussian_profile(N: float, width: float, points: int = 8001, extent: float = 8.0) -> RadialProfile:
    r = np.linspace(0.0, extent * width, points)
    n = N / (math.pi ** 1.5 * width**3) * np.exp(-(r / width) ** 2)
    return RadialProfile(r, n)


# --- mass-radius curve ----------------------------------------------------------


class CurvePoint(NamedTuple):
    n_c: float
    N: Optional[float]
    M_kg: Optional[float]
    M_solar: Optional[float]
    R_m: Optional[float]
    E_TF: Optional[float]   # joule
    error: Optional[str] = None


@dataclass
class MassRadiusCurve:
    kappa: float
    points: list
    limiting_N: Optional[float]
    mass_per_electron: float

    @property
    def limiting_mass_kg(self) -> Optional[float]:
        return None if self.limiting_N is None else self.limiting_N * self.mass_per_electron

    @property
    def limiting_mass_solar(self) -> Optional[float]:
        m = self.limiting_mass_kg
        return None if m is None else codata().kg_to_solar(m)

    @property
    def limiting_tau(self) -> Optional[float]:
        return None if self.limiting_N is None else self.kappa * self.limiting_N ** (2.0 / 3.0)

    @property
    def gaps(self) -> list:
        return [p for p in self.points if p.error is not None]

    def csv_rows(self):
        yield ("n_c", "N", "M_kg", "M_solar", "R_m", "E_TF")
        for p in self.points:
            if p.error is None:
                yield tuple(repr(float(v)) for v in (p.n_c, p.N, p.M_kg, p.M_solar, p.R_m, p.E_TF))
            else:
                yield (repr(float(p.n_c)), "", "", "", "", "")


def aitken_limit(values: Sequence[float]) -> float:
    """Aitken delta-squared extrapolation from the last three terms."""
    a, b, c = values[-3:]
    denom = (c - b) - (b - a)
    if denom == 0:
        return c
    return c - (c - b) ** 2 / denom


def _curve_point(args) -> CurvePoint:
    n_c, kappa, mpe = args
    k = codata()
    try:
        m = solve_structure(n_c, kappa, mpe)
    except (UnboundedProfile, ValueError) as exc:
        return CurvePoint(k.natural_density_to_si(n_c), None, None, None, None, None, str(exc))
    return CurvePoint(k.natural_density_to_si(n_c), m.N, m.mass_kg, m.mass_solar, m.radius_m,
                      m.E_TF_joule)


def mass_radius_curve(kappa: float, n_c_grid: Sequence[float], mass_per_electron: float | None = None,
                      workers: int | None = None) -> MassRadiusCurve:
    """Solve one structure per central density (natural units); extrapolate N as n_c -> inf.

    Points are independent; with ``workers`` > 1 they run in a process pool
    and are merged back in input order.
    """
    grid = np.asarray(n_c_grid, float)
    if grid.size < 3 or grid.max() / grid.min() < 1e6:
        raise ValueError("central-density grid must have >= 3 points spanning >= 6 decades")
    mpe = mass_per_electron or mass_per_electron_from_kappa(kappa)
    args = [(float(n), kappa, mpe) for n in np.sort(grid)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pts = list(pool.map(_curve_point, args))
    else:
        pts = [_curve_point(a) for a in args]
    good = [p.N for p in pts if p.error is None]
    limit = aitken_limit(good) if len(good) >= 3 else None
    return MassRadiusCurve(kappa, pts, limit, mpe)


def default_sweep(decades: tuple = (-6.0, 8.0), count: int = 57) -> np.ndarray:
    """Geometric n_c grid in natural units."""
    return np.logspace(decades[0], decades[1], count)


# --- criticality ------------------------------------------------------------------


class CriticalTau(NamedTuple):
    """Critical coupling in two labelled normalizations.

    ``tau_raw`` is kappa N^(2/3) with kappa and N exactly as in the functional
    above. ``tau_mass`` is kappa^(3/2) N = tau_raw^(3/2), the dimensionless
    Chandrasekhar mass coefficient M_c (m_Z/Z)^2 / (hbar c / G)^(3/2); the quoted
    value 3.1 agrees with this form. The comparison is reported, not enforced.
    """

    tau_raw: float
    tau_mass: float
    quoted_value: float
    ratio_raw: float
    ratio_mass: float
    xi1: float
    omega: float
    convention: str


def critical_tau() -> CriticalTau:
    """Critical kappa N^(2/3) from the index-3 Lane-Emden solution.

    In the ultrarelativistic limit mu'' + 2mu'/rho = -mu^3 is scale free, so
    N_crit = (4 L^3 / 3 pi) omega_3 for every central density and
    tau_c = (3 pi / 4)^(1/3) omega_3^(2/3).
    """
    le = lane_emden(3.0)
    tau = (3.0 * math.pi / 4.0) ** (1.0 / 3.0) * le.omega ** (2.0 / 3.0)
    mass_form = tau**1.5
    return CriticalTau(
        tau_raw=tau, tau_mass=mass_form, quoted_value=QUOTED_TAU_C,
        ratio_raw=tau / QUOTED_TAU_C, ratio_mass=mass_form / QUOTED_TAU_C,
        xi1=le.xi1, omega=le.omega,
        convention=("hbar = c = m_e = 1, two spin states, eps without rest mass, "
                    "kappa = G (m_Z/Z)^2 / (hbar c), gravity (kappa/2) int int n n'/|x-x'|; "
                    "the quoted 3.1 matches kappa^(3/2) N, not kappa N^(2/3)"),
    )


def critical_electron_number(kappa: float) -> float:
    return (critical_tau().tau_raw / kappa) ** 1.5
