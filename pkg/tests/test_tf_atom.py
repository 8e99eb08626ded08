import math

import numpy as np
import pytest

from oracles import TF_ENERGY_COEFFICIENT, TF_SLOPE_LITERATURE, TF_SLOPE_RK4_FROZEN, richardson_tf_slope
from paulilab import tf_atom


@pytest.fixture(scope="module")
def screening():
    return tf_atom.solve_screening()


def test_rk4_oracle_reproduces_frozen_slope():
    assert richardson_tf_slope() == pytest.approx(TF_SLOPE_RK4_FROZEN, abs=1e-9)


def test_slope_against_oracles(screening):
    assert screening.slope0 == pytest.approx(TF_SLOPE_RK4_FROZEN, abs=1e-9)
    assert screening.slope0 == pytest.approx(TF_SLOPE_LITERATURE, abs=1e-9)


@pytest.mark.parametrize("slope, fate", [(-1.7, -1), (-1.5, 1), (-1.588, 1), (-1.5882, -1)])
def test_classify(slope, fate):
    assert tf_atom.classify_slope(slope) == fate


def test_boundary_values(screening):
    assert float(screening(np.array(0.0))) == 1.0
    x = np.geomspace(1e-6, 1e4, 200)
    phi = screening(x)
    assert np.all(np.diff(phi) < 0)
    assert np.all(phi > 0)


def test_ode_residual(screening):
    x = np.geomspace(1e-3, 40.0, 60)
    assert np.max(tf_atom.ode_residual(screening, x)) < 1e-5


def test_tail_continuity(screening):
    xm = screening.x_match
    left = float(screening.solution.sol(xm)[0])
    right = float(tf_atom.tail(np.array(xm * (1 + 1e-12)), screening.tail_k))
    assert right == pytest.approx(left, rel=1e-9)


def test_far_tail_approaches_sommerfeld(screening):
    # phi x^3 / 144 -> 1 slowly: 0.94 at x = 1e3, 0.99 beyond 1e5
    r = float(screening(np.array(1000.0))) * 1000.0**3 / 144.0
    assert 0.93 < r < 0.95
    assert float(screening(np.array(1e6))) * 1e18 / 144.0 == pytest.approx(1.0, abs=2e-3)


def test_series_start_consistent():
    phi, dphi = tf_atom.series_start(-1.588, 1e-4)
    assert phi == pytest.approx(1 - 1.588e-4 + 4 / 3 * 1e-6, rel=1e-9)
    assert dphi == pytest.approx(-1.588 + 2e-2 - 1.588e-6, rel=1e-8)


def test_bracket_error_when_tolerance_bad():
    with pytest.raises(ValueError):
        tf_atom.solve_screening(tolerance=0.0)


class TestEnergy:
    def test_coefficient(self):
        e = tf_atom.tf_energy(1.0)
        assert e.energy == pytest.approx(-TF_ENERGY_COEFFICIENT, rel=1e-3)
        assert e.energy == pytest.approx(tf_atom.slope_energy_coefficient(TF_SLOPE_LITERATURE), rel=1e-10)

    def test_direct_equals_slope_relation(self):
        e = tf_atom.tf_energy(1.0)
        assert e.direct == pytest.approx(e.energy, rel=1e-6)

    def test_virial(self):
        e = tf_atom.tf_energy(1.0)
        potential = e.nuclear + e.repulsion
        assert potential / e.direct == pytest.approx(2.0, rel=1e-5)
        assert e.kinetic / -e.direct == pytest.approx(1.0, rel=1e-5)
        assert e.repulsion / e.nuclear == pytest.approx(-1 / 7, rel=1e-5)

    @pytest.mark.parametrize("Z", [1, 10, 79])
    def test_scaling(self, Z):
        assert tf_atom.tf_energy(Z).energy == pytest.approx(tf_atom.tf_energy(1).energy * Z ** (7 / 3), rel=1e-12)

    def test_charge_neutral(self):
        assert tf_atom.tf_charge() == pytest.approx(1.0, abs=1e-5)

    def test_density_normalised(self):
        Z = 10.0
        r = np.geomspace(1e-8, 1e4, 20001)
        n = tf_atom.tf_density(Z, r)
        from scipy.integrate import trapezoid
        assert trapezoid(4 * math.pi * r**2 * n, r) == pytest.approx(Z, rel=2e-3)

    def test_rejects_small_Z(self):
        with pytest.raises(ValueError):
            tf_atom.tf_energy(0.5)
