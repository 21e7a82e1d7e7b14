import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairmaxwell.bethe import (
    E_TG,
    BetheError,
    energy_density,
    ground_energy,
    inverse_compressibility,
    pressure_direct,
    pressure_maxwell,
    solve_lieb_equation,
)

# e(gamma) from oracles.lieb_liniger_at: Neumann iteration of the Lieb equation on
# an 8-panel, 48-point composite Gauss rule with secant inversion of gamma(lambda)
E_ORACLE = {1.0: 0.6391512852720748, 10.0: 2.310780380427117, 100.0: 3.1621812091201775}


@pytest.mark.parametrize("gamma, e", sorted(E_ORACLE.items()))
def test_energy_matches_independent_solver(gamma, e):
    assert math.isclose(energy_density(gamma), e, rel_tol=1e-12)


def test_oracle_is_reproducible():
    from oracles import lieb_liniger_at

    assert math.isclose(lieb_liniger_at(10.0), E_ORACLE[10.0], rel_tol=1e-13)


def test_strong_coupling_asymptote():
    g = 1e3
    asym = E_TG * (g / (g + 2)) ** 2
    assert abs(energy_density(g) / asym - 1) < 5e-3


def test_weak_coupling_mean_field():
    assert abs(energy_density(0.01) / 0.01 - 1) < 0.05


@settings(max_examples=15)
@given(st.floats(0.05, 200.0))
def test_solution_invariants(gamma):
    s = solve_lieb_equation(gamma)
    g = s.density_profile
    assert np.all(g > 0)
    assert np.allclose(g, g[::-1], rtol=1e-10)
    assert 0 < s.e <= E_TG
    assert 0 <= s.g2 <= 1
    # the cutoff reproduces the requested coupling: gamma = lam / int g
    assert math.isclose(s.lam / float(s.weights @ g), gamma, rel_tol=1e-12)


def test_energy_monotone_and_g2_decreasing():
    gam = np.geomspace(0.1, 100, 12)
    sols = [solve_lieb_equation(g) for g in gam]
    assert np.all(np.diff([s.e for s in sols]) > 0)
    assert np.all(np.diff([s.g2 for s in sols]) < 0)
    assert solve_lieb_equation(1e4).g2 < 1e-3


def test_node_convergence():
    assert abs(energy_density(5.0, 128) - energy_density(5.0, 512)) < 1e-12


def test_pressure_limits():
    n = 1.0
    assert math.isclose(pressure_direct(n, 1e4), E_TG * n**3, rel_tol=2e-3)
    mf = 0.5 * 0.01 * n**2  # c n^2 with c = gamma n / 2
    assert abs(pressure_direct(n, 0.01) / mf - 1) < 0.05


@pytest.mark.parametrize("gamma", [0.5, 3.0, 20.0])
def test_pressure_is_minus_energy_volume_derivative(gamma):
    N, c = 10.0, 2.0
    V = N * gamma / (2 * c)
    dV = 1e-4 * V
    fd = -(ground_energy(N, V + dV, c) - ground_energy(N, V - dV, c)) / (2 * dV)
    assert abs(fd / pressure_direct(N / V, gamma) - 1) < 2e-3


def test_pressure_density_scaling():
    assert math.isclose(pressure_direct(2.0, 4.0), 8 * pressure_direct(1.0, 4.0), rel_tol=1e-12)


def test_maxwell_pressure_anchor_and_agreement():
    gam = np.array([1.0, 3.0, 10.0, 40.0])
    res = pressure_maxwell(1.0, gam)
    assert res.y_anchor == E_TG and math.isinf(res.c0)
    direct = np.array([pressure_direct(1.0, g) for g in gam])
    assert np.all(np.abs(res.y / direct - 1) < 1e-2)
    assert np.all(res.y < E_TG) and np.all(res.y > 0)
    assert np.allclose(res.c_axis, gam / 2)


def test_maxwell_pressure_accepts_unsorted_axis():
    a = pressure_maxwell(1.0, [10.0, 2.0, 5.0])
    b = pressure_maxwell(1.0, [2.0, 5.0, 10.0])
    assert np.allclose(a.y, b.y)


def test_inverse_compressibility():
    assert math.isclose(inverse_compressibility(1.0, 1e4), math.pi**2, rel_tol=3e-3)
    gam = np.array([1.0, 5.0, 25.0])
    d = inverse_compressibility(1.0, gam)
    m = inverse_compressibility(1.0, gam, "maxwell")
    assert np.all(d > 0)
    assert np.all(np.abs(m.y / d - 1) < 0.02)
    with pytest.raises(ValueError):
        inverse_compressibility(1.0, 2.0, "guess")


@pytest.mark.parametrize(
    "call",
    [
        lambda: pressure_maxwell(1.0, [0.5, 2.0]),
        lambda: pressure_maxwell(1.0, [-1.0]),
        lambda: pressure_maxwell(1.0, []),
        lambda: solve_lieb_equation(1.0, nodes=32),
        lambda: solve_lieb_equation(0.0),
    ],
)
def test_invalid_inputs(call):
    with pytest.raises((BetheError, ValueError)):
        call()
