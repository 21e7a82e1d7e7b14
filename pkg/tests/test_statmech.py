import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import thermal, two_site_hubbard_levels
from pairmaxwell.hilbert import OperatorMatrix, Term, build_operator, make_basis
from pairmaxwell.models import ModelSpec, build_model, hamiltonian_at
from pairmaxwell.statmech import (
    SpectrumError,
    diagonalize,
    free_energy,
    hellmann_feynman_residual,
    magnetization_direct,
    solve_model,
    thermal_g2,
    thermo_at,
)


@given(st.floats(0.05, 20.0), st.floats(-5.0, 5.0))
def test_single_spin_free_energy(T, h):
    b = make_basis("spin_half", 1)
    H = build_operator(Term("sz", (0,), coefficient=h), b)
    st_ = thermo_at(diagonalize(H), T)
    assert math.isclose(st_.F, -T * math.log(2 * math.cosh(h / (2 * T))), rel_tol=1e-12, abs_tol=1e-12)


def test_single_spin_levels():
    H = build_operator(Term("sx", (0,)), make_basis("spin_half", 1))
    assert np.allclose(diagonalize(H).eigenvalues, [-0.5, 0.5])


def test_infinite_temperature_entropy():
    bundle = solve_model(ModelSpec("tfim", 4), -1.0)
    assert math.isclose(thermo_at(bundle, 1e6).S, 4 * math.log(2), rel_tol=1e-9)


def test_ground_manifold_entropy():
    # h_x = 0 leaves the two fully aligned states degenerate
    bundle = solve_model(ModelSpec("tfim", 4, h_x=0.0), -1.0)
    st_ = thermo_at(bundle, 0.0)
    assert math.isclose(st_.S, math.log(2))
    assert st_.C_V == 0.0


@pytest.mark.parametrize("T", [0.1, 0.7, 3.0, 25.0])
@pytest.mark.parametrize("c", [-2.0, 0.5, 4.0])
def test_two_site_hubbard_thermal_g2_closed_form(T, c):
    F_ref, g2_ref = thermal(*two_site_hubbard_levels(1.0, c), T)
    st_ = thermo_at(solve_model(ModelSpec("fermi_hubbard", 2, n_up=1, n_down=1), c), T)
    assert math.isclose(st_.F, F_ref, rel_tol=1e-12, abs_tol=1e-13)
    assert math.isclose(st_.G2, g2_ref, rel_tol=1e-11, abs_tol=1e-13)


@given(st.integers(2, 6), st.floats(-3, 3), st.floats(0.02, 10.0))
def test_thermodynamic_identities(L, c, T):
    spec = ModelSpec("tfim", L, h_x=0.9)
    bundle = solve_model(spec, c)
    s = thermo_at(bundle, T)
    assert s.S >= -1e-12 and s.C_V >= -1e-12
    assert math.isclose(s.F, s.U - T * s.S, rel_tol=1e-10, abs_tol=1e-10)
    assert s.S <= L * math.log(2) + 1e-12
    # S = -dF/dT, C = T dS/dT
    h = 1e-4 * T
    lo, hi = thermo_at(bundle, T - h), thermo_at(bundle, T + h)
    assert math.isclose(-(hi.F - lo.F) / (2 * h), s.S, rel_tol=1e-5, abs_tol=1e-7)
    assert math.isclose(T * (hi.S - lo.S) / (2 * h), s.C_V, rel_tol=1e-5, abs_tol=1e-6)


@given(st.integers(0, 2), st.floats(-3, 3), st.sampled_from([0.1, 1.0, 10.0]))
def test_hellmann_feynman_small_systems(which, c, T):
    spec = [
        ModelSpec("tfim", 4, h_x=1.0),
        ModelSpec("fermi_hubbard", 3, n_up=1, n_down=2),
        ModelSpec("bose_hubbard", 3, n_particles=2),
    ][which]
    assert hellmann_feynman_residual(spec, T, 1e-4, c=c) <= 1e-6


def test_hellmann_feynman_scaling():
    spec = ModelSpec("tfim", 8, h_x=1.0, c=-1.5)
    r3 = hellmann_feynman_residual(spec, 1.0, 1e-3)
    r4 = hellmann_feynman_residual(spec, 1.0, 1e-4)
    assert 80 <= r3 / r4 <= 120


def test_hellmann_feynman_at_zero_coupling_is_exact():
    # F is even in c for the spin chain, so the centred difference vanishes like G2 does
    assert hellmann_feynman_residual(ModelSpec("tfim", 6), 1.0, 1e-4, c=0.0) < 1e-12


def test_hellmann_feynman_atomic_limit():
    spec = ModelSpec("fermi_hubbard", 4, n_up=2, n_down=2, t=0.0, c=1.0)
    assert hellmann_feynman_residual(spec, 1.0, 1e-4) <= 1e-8


def test_magnetization_limits():
    free = solve_model(ModelSpec("tfim", 6, h_x=1.0), 0.0)
    mx, mz = magnetization_direct(free, 0.0)
    assert math.isclose(abs(mx), 0.5, rel_tol=1e-12) and abs(mz) < 1e-12
    classical = solve_model(ModelSpec("tfim", 6, h_x=0.0), -1.0)
    assert abs(magnetization_direct(classical, 0.0)[1]) < 1e-12
    hot = solve_model(ModelSpec("tfim", 6, h_x=1.0), -1.0)
    assert max(map(abs, magnetization_direct(hot, 1e8))) < 1e-8


def test_magnetization_needs_spin_observables():
    bundle = solve_model(ModelSpec("fermi_hubbard", 2, n_up=1, n_down=1), 1.0)
    with pytest.raises(ValueError):
        magnetization_direct(bundle, 1.0)


def test_lowest_states_agree_with_dense_at_low_temperature():
    spec = ModelSpec("tfim", 10, h_x=1.0, boundary="periodic")
    dense = thermo_at(solve_model(spec, -1.5), 0.05)
    low = thermo_at(solve_model(spec, -1.5, method="lowest", n_states=16), 0.05)
    assert math.isclose(dense.F, low.F, rel_tol=1e-12)
    assert math.isclose(dense.G2, low.G2, rel_tol=1e-9)


def test_truncated_spectrum_refuses_high_temperature():
    bundle = solve_model(ModelSpec("tfim", 10), -1.0, method="lowest", n_states=6)
    with pytest.raises(SpectrumError, match="truncated"):
        thermo_at(bundle, 5.0)


def test_non_hermitian_rejected():
    b = make_basis("spin_half", 2)
    good = build_operator(Term("sx", (0,)), b)
    bad = OperatorMatrix(b, good.matrix + 1e-6 * build_operator(Term("sz", (0,)), b).matrix @ good.matrix, "bad")
    with pytest.raises(SpectrumError, match="Hermitian"):
        diagonalize(bad)


def test_dimension_cap_and_foreign_observables():
    ops = build_model(ModelSpec("tfim", 6))
    with pytest.raises(SpectrumError, match="cap"):
        diagonalize(hamiltonian_at(ops, 1.0), max_dim=32)
    other = build_model(ModelSpec("tfim", 5))
    with pytest.raises(SpectrumError, match="different basis"):
        diagonalize(hamiltonian_at(ops, 1.0), [other.G2hat])
    with pytest.raises(ValueError):
        diagonalize(hamiltonian_at(ops, 1.0), method="magic")
    with pytest.raises(ValueError):
        thermo_at(diagonalize(hamiltonian_at(ops, 1.0)), -1.0)


def test_free_energy_precise_agrees():
    ops = build_model(ModelSpec("bose_hubbard", 3, n_particles=3))
    H = hamiltonian_at(ops, 2.0)
    assert math.isclose(float(free_energy(H, 0.5, precise=True)), free_energy(H, 0.5), rel_tol=1e-13)
    assert math.isclose(thermal_g2(ModelSpec("bose_hubbard", 3, n_particles=3), 0.5, 2.0),
                        thermo_at(diagonalize(H, [ops.G2hat]), 0.5).G2, rel_tol=1e-13)
