"""Single-zone heuristic model of self-gravitating Coulomb matter.

The energy of N electrons with mean momentum p, N/Z nuclei of mass
m_Z = A m_N, and the exclusion bound p >= N^(1/3) hbar / R is

    E(p) = N p^2 / 2m - B p - C p,
    B = (1/2) (N/Z)^2 G m_Z^2 / (hbar N^(1/3)),   C = N e^2 Z^(2/3) / hbar.

Bosons only obey p >= hbar / R, which changes C to N^(4/3) Z^(2/3) e^2 / hbar.
The coefficients are order-of-magnitude model values; every result is
labelled "model".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .constants import PhysicalConstants, codata

M_R_COEFFICIENT = 2.8
DYNAMIC_NUCLEI_BOSON_EXPONENT = 7.0 / 5.0


@dataclass(frozen=True)
class HeuristicInput:
    N: float
    Z: float = 1.0
    A: float = 1.0
    include_gravity: bool = True
    statistics: str = "fermion"
    constants: PhysicalConstants = None

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", codata())
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not 1 <= self.Z <= self.A:
            raise ValueError("need 1 <= Z <= A")
        if self.statistics not in ("fermion", "boson"):
            raise ValueError("statistics must be 'fermion' or 'boson'")

    @property
    def m_Z(self) -> float:
        return self.A * self.constants.m_N


@dataclass(frozen=True)
class HeuristicResult:
    """p0 in units of m c, E0 in Ry, n0 in m^-3, rho0 in g/cm^3.

    ``E0`` is None when regime is "unbounded" (energy not bounded below).
    ``binding`` is E0 minus the rest energy N m c^2 (equal to E0 when
    the kinetic energy is non-relativistic).
    """

    p0: Optional[float]
    E0: Optional[float]
    n0: Optional[float]
    rho0: Optional[float]
    regime: str
    binding: Optional[float] = None
    label: str = "model"


def gravity_coefficient(N: float, Z: float, A: float, k: PhysicalConstants) -> float:
    """B = (1/2)(N/Z)^2 G m_Z^2 / (hbar N^(1/3)), in m/s (multiplies p)."""
    m_Z = A * k.m_N
    return 0.5 * (N / Z) ** 2 * k.G * m_Z**2 / (k.hbar * N ** (1.0 / 3.0))


def coulomb_coefficient(N: float, Z: float, k: PhysicalConstants, statistics: str = "fermion") -> float:
    """C = N e^2 Z^(2/3)/hbar (fermions) or N^(4/3) e^2 Z^(2/3)/hbar (bosons)."""
    power = 1.0 if statistics == "fermion" else 4.0 / 3.0
    return N**power * k.e2 * Z ** (2.0 / 3.0) / k.hbar


def _densities(p0_si: float, Z: float, A: float, k: PhysicalConstants):
    n0 = (p0_si / k.hbar) ** 3
    rho0 = n0 * (A / Z) * k.m_N * 1e-3  # kg/m^3 -> g/cm^3
    return n0, rho0


def minimize_nonrel(inp: HeuristicInput) -> HeuristicResult:
    """Minimize N p^2/2m - (B + C) p: p0 = m (B + C)/N, E0 = -N p0^2 / 2m."""
    k = inp.constants
    coeff = coulomb_coefficient(inp.N, inp.Z, k, inp.statistics)
    if inp.include_gravity:
        coeff += gravity_coefficient(inp.N, inp.Z, inp.A, k)
    p0 = k.m_e * coeff / inp.N
    E0 = -inp.N * p0**2 / (2 * k.m_e)
    n0, rho0 = _densities(p0, inp.Z, inp.A, k)
    E_ry = k.joule_to_ry(E0)
    return HeuristicResult(p0=p0 / (k.m_e * k.c), E0=E_ry, n0=n0, rho0=rho0,
                           regime="nonrelativistic", binding=E_ry)


def boson_scaling(N: float, Z: float = 1.0, constants: PhysicalConstants | None = None) -> float:
    """E0 ~ -N^(5/3) Z^(4/3) Ry for bosonic electrons around fixed nuclei."""
    inp = HeuristicInput(N=N, Z=Z, A=max(Z, 1.0), include_gravity=False, statistics="boson",
                         constants=constants)
    return minimize_nonrel(inp).E0


class CriticalNumbers(NamedTuple):
    N_c: float
    N_r: float            # quoted form: (Z/A)^3 (2 M_Pl / m_N)^(3/2)
    N_r_derived: float    # from p0 = m c: 2^(3/2) (Z/A)^3 (M_Pl/m_N)^3
    M_r_kg: float
    M_r_solar: float


def critical_numbers(Z: float = 1.0, A: float = 1.0, constants: PhysicalConstants | None = None) -> CriticalNumbers:
    """N_c (gravity ~ Coulomb), N_r (electrons turn relativistic), M_r (limiting mass).

    Setting p0 = m c in p0/mc = (1/2)(A/Z)^2 (m_N/M_Pl)^2 N^(2/3) gives
    N = 2^(3/2) (Z/A)^3 (M_Pl/m_N)^3, which is what M_r = (N_r/Z) m_Z
    ~ 2.8 (Z/A)^2 M_Pl^3/m_N^2 uses. The quoted closed form for N_r
    differs from this and is returned unchanged as ``N_r``.
    """
    k = constants or codata()
    if not 1 <= Z <= A:
        raise ValueError("need 1 <= Z <= A")
    ratio = k.MPl / k.m_N
    za = Z / A
    N_c = Z * za**3 * k.alpha**1.5 * ratio**3
    N_r = za**3 * (2.0 * ratio) ** 1.5
    N_r_derived = 2.0**1.5 * za**3 * ratio**3
    M_r = M_R_COEFFICIENT * za**2 * k.MPl**3 / k.m_N**2
    return CriticalNumbers(N_c, N_r, N_r_derived, M_r, k.kg_to_solar(M_r))


def relativistic_threshold(Z: float = 1.0, A: float = 1.0, constants: PhysicalConstants | None = None) -> float:
    """N at which the gravity coefficient B equals N c (minimum ceases to exist)."""
    k = constants or codata()
    # B / (N c) = (1/2) (A/Z)^2 (m_N/M_Pl)^2 N^(2/3)
    return (2.0 * (Z / A) ** 2 * (k.MPl / k.m_N) ** 2) ** 1.5


def relativistic_minimum(N: float, Z: float = 1.0, A: float = 1.0,
                         constants: PhysicalConstants | None = None,
                         cross_check: bool = True) -> HeuristicResult:
    """inf_p N sqrt(p^2 c^2 + m^2 c^4) - B p  (gravity only).

    With beta = B/(N c) < 1 the minimum is at p0 = m c beta / sqrt(1 - beta^2)
    and E0 = N m c^2 sqrt(1 - beta^2); for beta >= 1 the energy decreases
    without bound as p -> infinity. Golden-section search cross-checks the
    closed form when ``cross_check`` is set.
    """
    k = constants or codata()
    if N < 1:
        raise ValueError("N must be >= 1")
    B = gravity_coefficient(N, Z, A, k)
    beta = B / (N * k.c)
    if beta >= 1.0:
        return HeuristicResult(p0=None, E0=None, n0=None, rho0=None, regime="unbounded")
    gamma_inv = math.sqrt(1.0 - beta * beta)
    x0 = beta / gamma_inv
    E0 = N * k.mc2 * gamma_inv
    if cross_check:
        # in units of m c and N m c^2
        # near beta = 1 the minimum is flat, so compare energies rather than locations
        f = lambda x: math.hypot(x, 1.0) - beta * x
        x_gs = golden_section(f, 0.0, 10.0 * (x0 + 1.0))
        if f(x_gs) < f(x0) - 1e-12 * f(x0):
            raise RuntimeError(f"closed form p0={x0} is not the minimum (golden search {x_gs})")
    n0, rho0 = _densities(x0 * k.m_e * k.c, Z, A, k)
    binding = -N * k.mc2 * beta * beta / (1.0 + gamma_inv)
    regime = "relativistic" if x0 > 1.0 else "nonrelativistic"
    return HeuristicResult(p0=x0, E0=k.joule_to_ry(E0), n0=n0, rho0=rho0, regime=regime,
                           binding=k.joule_to_ry(binding))


def golden_section(f, a: float, b: float, tol: float = 1e-12) -> float:
    """Minimizer of a unimodal f on [a, b]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def loglog_slope(N_values, energies) -> float:
    """Least-squares slope of log|E| against log N."""
    return float(np.polyfit(np.log(np.asarray(N_values, float)),
                            np.log(np.abs(np.asarray(energies, float))), 1)[0])
