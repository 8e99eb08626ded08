"""Physical constants (CODATA 2018) and unit conversions.

Every physics module works internally in natural or atomic units; this
module owns all conversions to SI and astronomical units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

VERSION_TAG = "CODATA2018"


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable constant set, SI units unless noted.

    ``m_N`` is the unified atomic mass unit, used as the nucleon mass so
    that ``A * m_N`` is the nuclear mass of a species with mass number ``A``.
    """

    alpha: float = 7.2973525693e-3
    c: float = 299792458.0
    hbar: float = 1.054571817e-34
    G: float = 6.67430e-11
    m_e: float = 9.1093837015e-31
    m_N: float = 1.66053906660e-27
    m_p: float = 1.67262192369e-27
    eV: float = 1.602176634e-19
    Ry_eV: float = 13.605693122994
    a0: float = 5.29177210903e-11
    mu_B: float = 9.2740100783e-24
    M_sun: float = 1.98847e30
    M_jupiter: float = 1.89813e27
    tag: str = VERSION_TAG
    sources: dict = field(
        default_factory=lambda: {
            "alpha, c, hbar, G, m_e, m_N (=u), m_p, eV, Ry, a0, mu_B": "CODATA 2018 recommended values",
            "M_sun": "IAU 2015 nominal G*M_sun / CODATA 2018 G",
            "M_jupiter": "IAU 2015 nominal G*M_J / CODATA 2018 G",
        },
        compare=False,
        hash=False,
    )

    @property
    def Ry(self) -> float:
        """Rydberg energy in joule."""
        return self.Ry_eV * self.eV

    @property
    def MPl(self) -> float:
        """Planck mass sqrt(hbar c / G) in kg."""
        return math.sqrt(self.hbar * self.c / self.G)

    @property
    def e2(self) -> float:
        """Gaussian e^2 = alpha hbar c, in J m."""
        return self.alpha * self.hbar * self.c

    @property
    def compton_length(self) -> float:
        """Reduced Compton wavelength hbar/(m_e c) in m."""
        return self.hbar / (self.m_e * self.c)

    @property
    def mc2(self) -> float:
        return self.m_e * self.c**2

    # conversions -----------------------------------------------------

    def joule_to_ry(self, energy: float) -> float:
        return energy / self.Ry

    def kg_to_solar(self, mass: float) -> float:
        return mass / self.M_sun

    def natural_density_to_si(self, n: float) -> float:
        """Number density in units of (m_e c/hbar)^3 to m^-3."""
        return n / self.compton_length**3

    def si_density_to_natural(self, n: float) -> float:
        return n * self.compton_length**3

    def kappa_natural(self, mass_per_electron: float) -> float:
        """Dimensionless G (m_Z/Z)^2 / (hbar c) for a mass per electron in kg."""
        return self.G * mass_per_electron**2 / (self.hbar * self.c)

    def as_dict(self) -> dict:
        out = {
            k: getattr(self, k)
            for k in ("alpha", "c", "hbar", "G", "m_e", "m_N", "m_p", "eV",
                      "Ry_eV", "a0", "mu_B", "M_sun", "M_jupiter")
        }
        out["Ry_J"] = self.Ry
        out["MPl"] = self.MPl
        return out


def check_identities(k: PhysicalConstants) -> None:
    """Assert the derived-constant identities; raises AssertionError."""
    mpl = math.sqrt(k.hbar * k.c / k.G)
    assert abs(k.MPl / mpl - 1.0) < 1e-10, "Planck mass identity"
    ry = 0.5 * k.alpha**2 * k.m_e * k.c**2
    assert abs(k.Ry / ry - 1.0) < 1e-6, "Rydberg identity"
    a0 = k.hbar / (k.m_e * k.c * k.alpha)
    assert abs(k.a0 / a0 - 1.0) < 1e-6, "Bohr radius identity"


@lru_cache(maxsize=None)
def codata() -> PhysicalConstants:
    """The shared CODATA 2018 constant set."""
    k = PhysicalConstants()
    check_identities(k)
    return k
