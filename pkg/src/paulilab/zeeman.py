"""Exact multiplet arithmetic: Zeeman limits, g-factors, shell counting.

All quantum numbers are :class:`HalfInt` and every g-factor is a
:class:`fractions.Fraction`; no floating point enters the g-factor path.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple, Union

from .constants import codata

Number = Union[int, Fraction, str, "HalfInt"]


class UndefinedGFactor(ValueError):
    """Raised for J = 0, where the Lande formula divides by zero."""


class SumRuleError(RuntimeError):
    """Internal inconsistency in the sum-rule recursion (a bug, not bad input)."""


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Integer or half-integer, stored as twice its value."""

    twice: int

    @classmethod
    def of(cls, value: Number) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a quantum number")
        if isinstance(value, float):
            if not (2 * value).is_integer():
                raise ValueError(f"{value} is not a half-integer")
            return cls(int(2 * value))
        f = Fraction(value)
        if (2 * f).denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(2 * f))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other: Number) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other: Number) -> "HalfInt":
        return HalfInt.of(other) - self

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other: Number) -> bool:
        return self.twice < HalfInt.of(other).twice

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"HalfInt({self})"


def ladder(top: HalfInt, bottom: HalfInt) -> list[HalfInt]:
    """top, top-1, ..., bottom (inclusive)."""
    return [HalfInt(t) for t in range(top.twice, bottom.twice - 1, -2)]


@dataclass(frozen=True)
class TermMultiplet:
    L: HalfInt
    S: HalfInt

    def __post_init__(self):
        if not self.L.is_integer or self.L.twice < 0:
            raise ValueError(f"L must be a non-negative integer, got {self.L}")
        if self.S.twice < 0:
            raise ValueError(f"S must be non-negative, got {self.S}")

    @classmethod
    def of(cls, L: Number, S: Number) -> "TermMultiplet":
        return cls(HalfInt.of(L), HalfInt.of(S))

    @property
    def multiplicity(self) -> int:
        return self.S.twice + 1

    @property
    def J_values(self) -> list[HalfInt]:
        return ladder(self.L + self.S, abs(self.L - self.S))

    @property
    def label(self) -> str:
        letters = "SPDFGHIKLMNOQRTUV"
        Lv = int(self.L.value)
        letter = letters[Lv] if Lv < len(letters) else f"[L={Lv}]"
        return f"{self.multiplicity}{letter}"


@dataclass(frozen=True)
class ZeemanState:
    """Strong-field (Paschen-Back) state; energies in units of mu_0 B."""

    M_L: HalfInt
    M_S: HalfInt

    @property
    def M(self) -> HalfInt:
        return self.M_L + self.M_S

    @property
    def strong_field_slope(self) -> Fraction:
        return self.M_L.value + 2 * self.M_S.value


class _Undefined:
    """Marker for the J = 0 entry of a g map."""

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __str__(self) -> str:
        return "undefined (J=0)"


UNDEFINED = _Undefined()


def _check_member(m: TermMultiplet, J: HalfInt) -> None:
    if J not in m.J_values:
        raise ValueError(f"J={J} is not in the ladder of {m.label} (L={m.L}, S={m.S})")


def lande_g(L: Number, S: Number, J: Number) -> Fraction:
    """g = 3/2 + [S(S+1) - L(L+1)] / [2 J(J+1)], exactly."""
    m = TermMultiplet.of(L, S)
    J = HalfInt.of(J)
    _check_member(m, J)
    if J.twice == 0:
        raise UndefinedGFactor("g undefined at J=0")
    Lv, Sv, Jv = m.L.value, m.S.value, J.value
    return Fraction(3, 2) + (Sv * (Sv + 1) - Lv * (Lv + 1)) / (2 * Jv * (Jv + 1))


def strong_field_table(L: Number, S: Number) -> list[ZeemanState]:
    """All (2L+1)(2S+1) strong-field states, grouped by descending M."""
    m = TermMultiplet.of(L, S)
    states = [
        ZeemanState(ML, MS)
        for ML in ladder(m.L, -m.L)
        for MS in ladder(m.S, -m.S)
    ]
    states.sort(key=lambda s: (-s.M.twice, -s.M_S.twice))
    return states


def strong_field_sum(L: Number, S: Number, M: Number) -> tuple[int, Fraction]:
    """(number of states, sum of slopes M_L + 2 M_S) at fixed M."""
    M = HalfInt.of(M)
    group = [s for s in strong_field_table(L, S) if s.M == M]
    return len(group), sum((s.strong_field_slope for s in group), Fraction(0))


def g_from_sum_rule(L: Number, S: Number) -> dict:
    """Reconstruct every g(J) from strong-field slopes via the sum rule.

    At fixed M the weak-field sum ``sum_{J >= |M|} g(J) M`` equals the
    strong-field sum of ``M_L + 2 M_S``. Walking M downward from L+S, each
    step brings in exactly one new J (namely J = M), which the equation
    then fixes. The J = 0 entry, if present, maps to :data:`UNDEFINED`.
    """
    m = TermMultiplet.of(L, S)
    Js = m.J_values
    g: dict = {}
    for M in Js:
        unknown = [J for J in Js if J >= M and J not in g]
        if len(unknown) != 1:
            raise SumRuleError(f"step M={M} has {len(unknown)} unknowns")
        (J_new,) = unknown
        if M.twice == 0:
            g[J_new] = UNDEFINED
            break
        _, strong = strong_field_sum(m.L, m.S, M)
        known = sum((g[J] for J in Js if J > M), Fraction(0))
        g[J_new] = strong / M.value - known
    return g


def mean_g(L: Number, S: Number) -> Fraction:
    """Arithmetic mean of the 2S+1 Lande factors of a multiplet with L > S.

    The mean equals 1 because at any M != 0 with the full complement of
    2S+1 strong-field states the M_S values cancel. For L = S the only M
    with 2S+1 states is M = 0, which carries no information, and one J is
    0 with no g-factor, so the mean is not defined there.
    """
    m = TermMultiplet.of(L, S)
    if m.L <= m.S:
        raise ValueError("mean-g rule needs L > S (a nonzero M with 2S+1 states)")
    g = g_from_sum_rule(m.L, m.S)
    return sum(g.values(), Fraction(0)) / m.multiplicity


def weak_field_splitting(g: Fraction, J: Number) -> list[tuple[HalfInt, Fraction]]:
    """(M, Delta E / mu_0 B = M g) for M = J ... -J."""
    J = HalfInt.of(J)
    if J.twice < 0:
        raise ValueError("J must be non-negative")
    g = Fraction(g)
    return [(M, M.value * g) for M in ladder(J, -J)]


class Transition(str, enum.Enum):
    SIGMA = "sigma"
    PI = "pi"
    FORBIDDEN = "forbidden"


def allowed_transitions(upper: tuple[Number, Number], lower: tuple[Number, Number]) -> Transition:
    """Zeeman component for (J, M) -> (J', M') under dJ, dM in {0, +-1}, 0 -> 0 forbidden."""
    Ju, Mu = (HalfInt.of(x) for x in upper)
    Jl, Ml = (HalfInt.of(x) for x in lower)
    for J, M in ((Ju, Mu), (Jl, Ml)):
        if abs(M) > J or (J - M).twice % 2:
            raise ValueError(f"M={M} not valid for J={J}")
    dJ = (Ju - Jl).twice
    dM = (Mu - Ml).twice
    if abs(dJ) > 2 or dJ % 2 or (Ju.twice == 0 and Jl.twice == 0):
        return Transition.FORBIDDEN
    if abs(dM) == 2:
        return Transition.SIGMA
    if dM == 0:
        return Transition.PI
    return Transition.FORBIDDEN


def shell_capacity(ell: int) -> int:
    """2(2l+1) electrons in the subgroup with orbital quantum number l."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    return 2 * (2 * ell + 1)


def subshell_sizes(ell: int) -> dict[HalfInt, int]:
    """j = l +- 1/2 sublevels and their 2j+1 sizes (only j = 1/2 for l = 0)."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    js = [HalfInt(2 * ell + 1)]
    if ell > 0:
        js.append(HalfInt(2 * ell - 1))
    return {j: j.twice + 1 for j in js}


class ShellSizes(NamedTuple):
    sizes: list[int]
    cumulative: list[int]


def closed_shell_sizes(n_max: int) -> ShellSizes:
    """Shell sizes 2n^2 for n = 1..n_max and their running totals."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    sizes = [sum(shell_capacity(ell) for ell in range(n)) for n in range(1, n_max + 1)]
    cumulative = []
    total = 0
    for s in sizes:
        total += s
        cumulative.append(total)
    return ShellSizes(sizes, cumulative)


class RelativisticCorrection(NamedTuple):
    value: float
    branch: str  # "exact" (n = 1) or "approximate"


def relativistic_correction(Z: int, n: int = 1, alpha: float | None = None) -> RelativisticCorrection:
    """K-shell factor sqrt(1 - a^2 Z^2); 1 - a^2 Z^2 / 2n^2 for n > 1."""
    if alpha is None:
        alpha = codata().alpha
    if n < 1:
        raise ValueError("n must be >= 1")
    aZ = alpha * Z
    if aZ >= 1:
        raise ValueError(f"alpha*Z = {aZ} >= 1: correction factor undefined")
    if n == 1:
        return RelativisticCorrection(math.sqrt(1.0 - aZ * aZ), "exact")
    return RelativisticCorrection(1.0 - aZ * aZ / (2 * n * n), "approximate")
