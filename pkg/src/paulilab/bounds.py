"""Energy and size bounds for atoms and bulk Coulomb matter.

Energies are in rydberg (Ry), lengths in Bohr radii (a0). In these units
hbar^2/2m = 1 Ry a0^2 and e^2 = 2 Ry a0, so the hydrogen ground state is
-1 Ry. The many-body ground state itself is never computed; the
functions here evaluate the bounds that constrain it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .profiles import RadialProfile

SOBOLEV_CONSTANT = 3.0 * (math.pi / 2.0) ** (4.0 / 3.0)
IMPROVED_K1 = 9.57
SHELL_COEFFICIENT = 2.0 * 1.5 ** (1.0 / 3.0)
TF_ATOM_COEFFICIENT = 1.5375
LIEB_THIRRING_CONSTANT = 20.0
BOSON_LOWER_A = 0.2
DYSON_CONSTANT = 1e-6
E2_RY = 2.0  # e^2 in Ry a0


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(f"{message}: {diagnostics}")
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SystemSpec:
    """N electrons with k nuclei of charges Z_j; no wavefunction is held."""

    N: int
    nuclei: tuple = ((1, None),)
    statistics: str = "fermion"

    def __post_init__(self):
        nuclei = tuple(nuc if isinstance(nuc, tuple) else (nuc, None) for nuc in self.nuclei)
        object.__setattr__(self, "nuclei", nuclei)
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not nuclei or any(Z < 1 for Z, _ in nuclei):
            raise ValueError("need at least one nucleus, all Z_j >= 1")
        if self.statistics not in ("fermion", "boson"):
            raise ValueError("statistics must be 'fermion' or 'boson'")

    @property
    def charges(self) -> list[int]:
        return [Z for Z, _ in self.nuclei]

    @property
    def k(self) -> int:
        return len(self.nuclei)

    @property
    def Z_max(self) -> int:
        return max(self.charges)


@dataclass(frozen=True)
class EnergyBound:
    value: Optional[float]
    kind: str  # "lower" | "upper"
    asymptotic: bool = False
    units: str = "Ry"
    asserted: bool = True
    note: str = ""


# --- shell filling ----------------------------------------------------------


class LevelFilling(NamedTuple):
    n0: int
    occupancy: list[int]


def _filled_count(n: int) -> int:
    # 2 sum_{k<=n} k^2
    return n * (n + 1) * (2 * n + 1) // 3


def fill_levels(N: int) -> LevelFilling:
    """Fill hydrogenic levels of degeneracy 2n^2 with N electrons.

    n0 is the last completely filled level; a partial remainder, if any,
    is listed last as the occupancy of level n0+1.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n0 = int(round((1.5 * N) ** (1.0 / 3.0)))
    while _filled_count(n0) > N:
        n0 -= 1
    while _filled_count(n0 + 1) <= N:
        n0 += 1
    occupancy = [2 * n * n for n in range(1, n0 + 1)]
    rest = N - _filled_count(n0)
    if rest:
        occupancy.append(rest)
    return LevelFilling(n0, occupancy)


def unperturbed_energy(N: int, Z: float) -> float:
    """Exact ground state of the atom without electron repulsion, in Ry."""
    occ = fill_levels(N).occupancy
    return -Z * Z * sum(k / (n * n) for n, k in enumerate(occ, start=1))


class ShellBounds(NamedTuple):
    finite: EnergyBound
    asymptotic: EnergyBound


def shell_fill_lower_bound(N: int, Z: float) -> ShellBounds:
    """E_N >= -2(n0+1) Z^2 Ry exactly, and its large-N form -2(3/2)^(1/3) N^(1/3) Z^2."""
    if Z < 1:
        raise ValueError("Z must be >= 1")
    n0 = fill_levels(N).n0
    finite = EnergyBound(-2.0 * (n0 + 1) * Z * Z, "lower",
                         note="unperturbed shell filling, repulsion dropped")
    asym = EnergyBound(-SHELL_COEFFICIENT * N ** (1 / 3) * Z * Z, "lower", asymptotic=True,
                       note="up to (1 + O(N^-1/3))")
    return ShellBounds(finite, asym)


def shell_fill_upper_bound(N: int, Z: float) -> EnergyBound:
    """-2(3/2)^(1/3) (1 - N/2Z) N^(1/3) Z^2 Ry, valid for N <= 2Z."""
    if N < 1 or Z < 1:
        raise ValueError("N and Z must be >= 1")
    if N > 2 * Z:
        return EnergyBound(None, "upper", asymptotic=True, asserted=False,
                           note="bound not asserted for N > 2Z")
    value = -SHELL_COEFFICIENT * (1.0 - N / (2.0 * Z)) * N ** (1 / 3) * Z * Z
    return EnergyBound(value, "upper", asymptotic=True, note="Slater shell state, up to (1 + O(N^-1/3))")


class ShellBrackets(NamedTuple):
    N: np.ndarray
    n0: np.ndarray
    energy: np.ndarray  # exact unperturbed energy, Ry
    lower: np.ndarray   # -2 (n0 + 1) Z^2
    upper: np.ndarray   # -2 n0 Z^2


def shell_brackets(N_max: int, Z: float = 1.0) -> ShellBrackets:
    """Unperturbed energies and their shell brackets for every N = 1..N_max at once."""
    if N_max < 1 or Z < 1:
        raise ValueError("N_max and Z must be >= 1")
    N = np.arange(1, N_max + 1, dtype=np.int64)
    n0 = np.rint(np.cbrt(1.5 * N)).astype(np.int64)
    n0 = np.where(_filled_count(n0) > N, n0 - 1, n0)
    n0 = np.where(_filled_count(n0 + 1) <= N, n0 + 1, n0)
    rest = N - _filled_count(n0)
    z2 = Z * Z
    energy = -z2 * (2.0 * n0 + rest / (n0 + 1.0) ** 2)
    return ShellBrackets(N, n0, energy, -2.0 * (n0 + 1) * z2, -2.0 * n0 * z2)


def tf_reference_energy(Z: float) -> float:
    """Thomas-Fermi neutral-atom energy -1.5375 Z^(7/3) Ry (reference value)."""
    if Z < 1:
        raise ValueError("Z must be >= 1")
    return -TF_ATOM_COEFFICIENT * Z ** (7.0 / 3.0)


# --- atom size --------------------------------------------------------------


class AtomSizeBound(NamedTuple):
    radius: float  # a0
    radius_coefficient: float
    oscillator_coefficient: float
    omega: float
    sum_p2_upper: float
    sum_x2_lower: float
    asymptotic: bool = True


def oscillator_fill_energy(N: int) -> float:
    """Ground energy (omega = 1) of N fermions in a 3-d isotropic oscillator.

    Levels n + 3/2 with degeneracy (n+1)(n+2), counting spin.
    """
    total, left, n = 0.0, N, 0
    while left > 0:
        take = min(left, (n + 1) * (n + 2))
        total += take * (n + 1.5)
        left -= take
        n += 1
    return total


def atom_size_lower_bound(N: int) -> AtomSizeBound:
    """r >= 0.714 N^(-1/3) a0 for a neutral atom (Z = N), large N.

    Atomic units (hbar = m = e = 1) for the intermediate steps:

    * oscillator: (1/2) sum (p^2 + w^2 x^2) >= w N^(4/3) c, c = 3^(4/3)/4;
    * so <sum x^2> >= (2cN^(4/3) w - P)/w^2 for every w, with P = <sum p^2>,
      maximal at w = 2P/(2cN^(4/3)), giving (3N)^(8/3) / (16 P);
    * virial: P/2 = |E_N| <= (3/2)^(1/3) N^(7/3) hartree.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    c_osc = 3.0 ** (4.0 / 3.0) / 4.0
    P = 2.0 * 1.5 ** (1.0 / 3.0) * N ** (7.0 / 3.0)
    a = 2.0 * c_osc * N ** (4.0 / 3.0)
    omega = 2.0 * P / a
    x2 = (a * omega - P) / omega**2
    radius = math.sqrt(x2 / N)
    return AtomSizeBound(
        radius=radius,
        radius_coefficient=radius * N ** (1.0 / 3.0),
        oscillator_coefficient=c_osc,
        omega=omega,
        sum_p2_upper=P,
        sum_x2_lower=x2,
    )


# --- variational bounds on a radial grid -------------------------------------


@dataclass
class VariationalResult:
    value: float
    profile: RadialProfile
    iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


def log_grid(Z: float, r_min: float, r_max: float, points: int):
    """Log-spaced radii (in a0/Z) and trapezoid weights for 4 pi r^2 dr."""
    r = np.geomspace(r_min, r_max, points) / Z
    h = math.log(r_max / r_min) / (points - 1)
    w = 4.0 * math.pi * r**3 * h
    w[0] *= 0.5
    w[-1] *= 0.5
    return r, w


def minimize_density_functional(kinetic: str, K: float, Z: float, *, r_min: float = 1e-4,
                                r_max: float = 50.0, points: int = 400, tol: float = 1e-8,
                                max_iter: int = 50000) -> VariationalResult:
    """Minimize h(rho) = T(rho) - e^2 Z int rho/r over normalized rho >= 0.

    ``kinetic`` is "sobolev" (T = K ||rho||_3) or "holder" (T = K int rho^(5/3)).
    rho = sigma^2 keeps positivity; normalization is restored by rescaling
    after every step. Descent direction is the tangent gradient divided by
    the local Coulomb curvature e^2 Z / r + Z^2, step lengths are
    Barzilai-Borwein with non-monotone Armijo backtracking. Stops when the
    functional changes by less than ``tol`` (relative) over 20 iterations.
    """
    if Z <= 0:
        raise ValueError("Z must be > 0")
    if kinetic not in ("sobolev", "holder"):
        raise ValueError(f"unknown kinetic term {kinetic!r}")
    a = E2_RY * Z
    r, w = log_grid(Z, r_min, r_max, points)
    precond = a / r + Z * Z

    def energy(s):
        rho = s * s
        if kinetic == "sobolev":
            T = K * np.sum(w * rho**3) ** (1.0 / 3.0)
        else:
            T = K * np.sum(w * rho ** (5.0 / 3.0))
        return T - a * np.sum(w * rho / r)

    def gradient(s):
        # weighted-metric gradient, projected onto the tangent of sum w s^2 = 1
        rho = s * s
        if kinetic == "sobolev":
            dT = K * np.sum(w * rho**3) ** (-2.0 / 3.0) * 2.0 * s**5
        else:
            dT = K * (10.0 / 3.0) * np.abs(s) ** (4.0 / 3.0) * s
        g = dT - 2.0 * a * s / r
        return g - np.sum(w * g * s) * s

    def normalize(s):
        return s / math.sqrt(np.sum(w * s * s))

    s = normalize(np.exp(-Z * r))
    f = energy(s)
    g = gradient(s)
    step = 1e-2
    history = [f]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        d = g / precond
        slope = np.sum(w * g * d)
        ref = max(history[-8:])
        for _ in range(60):
            s_new = normalize(s - step * d)
            f_new = energy(s_new)
            if f_new <= ref - 1e-4 * step * slope:
                break
            step *= 0.5
        else:
            raise ConvergenceError("line search failed", {"iteration": it, "value": f, "step": step})
        g_new = gradient(s_new)
        ds, dg = s_new - s, g_new - g
        sy = np.sum(w * ds * dg)
        step = np.sum(w * ds * ds * precond) / sy if sy > 0 else 2.0 * step
        s, g, f = s_new, g_new, f_new
        history.append(f)
        if len(history) > 20 and abs(history[-21] - f) < tol * abs(f):
            converged = True
            break
    if not converged:
        raise ConvergenceError("minimizer did not converge", {
            "iterations": it, "value": f, "last_change": abs(history[-21] - f) if len(history) > 20 else None,
            "grad_norm": float(np.sqrt(np.sum(w * g * g))),
        })
    return VariationalResult(float(f), RadialProfile(r, s * s), it, converged, history)


def density_functional_value(kinetic: str, K: float, Z: float, profile: RadialProfile) -> float:
    """h(rho) for a profile on a log grid built by :func:`log_grid` (same weights)."""
    r = profile.grid
    h = math.log(r[1] / r[0])
    w = 4.0 * math.pi * r**3 * h
    w[0] *= 0.5
    w[-1] *= 0.5
    rho = profile.values
    if kinetic == "sobolev":
        T = K * np.sum(w * rho**3) ** (1.0 / 3.0)
    else:
        T = K * np.sum(w * rho ** (5.0 / 3.0))
    return float(T - E2_RY * Z * np.sum(w * rho / r))


class VariationalBound(NamedTuple):
    analytic: float
    numeric: float
    minimizer: Optional[RadialProfile]


def sobolev_hydrogen_bound(Z: float, **options) -> VariationalBound:
    """Lower bound on hydrogen-like energies from the Sobolev inequality.

    The exact infimum of K_s ||rho||_3 - e^2 Z int rho/r is -(4/3) Z^2 Ry,
    attained by rho proportional to (1/r - 1/R)^(1/2) inside R.
    """
    if Z == 0:
        return VariationalBound(0.0, 0.0, None)
    res = minimize_density_functional("sobolev", SOBOLEV_CONSTANT, Z, **options)
    return VariationalBound(-4.0 / 3.0 * Z * Z, res.value, res.profile)


def holder_analytic(Z: float, K1: float) -> float:
    """Closed-form minimum of K1 int rho^(5/3) - e^2 Z int rho/r.

    The minimizer is rho = [3 (e^2 Z/r - mu) / (5 K1)]^(3/2) for r < e^2 Z/mu.
    Normalization gives mu = (pi^2/4)^(2/3) (e^2 Z)^2 3/(5 K1); the virial
    relation 2T = -V with the Euler-Lagrange identity (5/3) T = -V - mu
    gives T = 3 mu and h_min = -3 mu.
    """
    mu = holder_chemical_potential(Z, K1)
    return -3.0 * mu


def holder_chemical_potential(Z: float, K1: float) -> float:
    a = E2_RY * Z
    return (math.pi**2 / 4.0) ** (2.0 / 3.0) * a * a * 3.0 / (5.0 * K1)


def holder_minimizer(Z: float, K1: float, r: np.ndarray) -> np.ndarray:
    mu = holder_chemical_potential(Z, K1)
    return (np.maximum(E2_RY * Z / r - mu, 0.0) * 3.0 / (5.0 * K1)) ** 1.5


class HolderBound(NamedTuple):
    analytic: float
    numeric: float
    sobolev: float
    minimizer: RadialProfile


def holder_bound(Z: float, K1: float = IMPROVED_K1, **options) -> HolderBound:
    """Bound from K1 int rho^(5/3); reported next to the Sobolev value -(4/3) Z^2.

    The 1/sqrt(r) weight of the Coulomb term against a rho ~ r^(-3/2) core
    needs the grid to start far below the Sobolev default.
    """
    if K1 <= 0:
        raise ValueError("K1 must be > 0")
    opts = {"r_min": 1e-14, "points": 800, "tol": 1e-12}
    opts.update(options)
    res = minimize_density_functional("holder", K1, Z, **opts)
    return HolderBound(holder_analytic(Z, K1), res.value, -4.0 / 3.0 * Z * Z, res.profile)


# --- reference bounds -------------------------------------------------------


def lieb_thirring_bound(spec: SystemSpec, constant: float = LIEB_THIRRING_CONSTANT) -> EnergyBound:
    """E >= -const (N + sum_j Z_j^(7/3)) Ry for fermionic electrons."""
    if spec.statistics != "fermion":
        raise ValueError("Lieb-Thirring bound needs fermions; use boson_bounds for bosons")
    value = -constant * (spec.N + sum(Z ** (7.0 / 3.0) for Z in spec.charges))
    return EnergyBound(value, "lower", note=f"rigorous, constant {constant:g}")


class BosonBounds(NamedTuple):
    upper: EnergyBound
    lower: EnergyBound


def boson_bounds(N: float, dyson_constant: float = DYSON_CONSTANT, A: float = BOSON_LOWER_A) -> BosonBounds:
    """-A N^(7/5) <= E(N, N) <= -c N^(7/5) Ry for charged bosons with k = N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    p = N ** 1.4
    return BosonBounds(
        upper=EnergyBound(-dyson_constant * p, "upper", asymptotic=True,
                          note="trial-function constant, display value only"),
        lower=EnergyBound(-A * p, "lower", asymptotic=True, note=f"A = {A:g} for N = k"),
    )
