import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import tfim_dense
from pairmaxwell.hilbert import spin_flip_parity
from pairmaxwell.models import ModelError, ModelSpec, build_model, hamiltonian_at


def dense(ops, c, h_z=0.0):
    return hamiltonian_at(ops, c, h_z).toarray()


@given(st.integers(2, 6), st.floats(0.1, 2.0), st.floats(-3, 3), st.floats(-1, 1), st.booleans())
def test_tfim_matches_kronecker_build(L, h_x, c, h_z, periodic):
    spec = ModelSpec("tfim", L, h_x=h_x, boundary="periodic" if periodic else "open")
    H = dense(build_model(spec), c, h_z)
    ref = tfim_dense(L, h_x, c, h_z, periodic)
    assert np.allclose(np.linalg.eigvalsh(H), np.linalg.eigvalsh(ref), atol=1e-12)


@pytest.mark.parametrize(
    "spec",
    [
        ModelSpec("tfim", 5, h_x=0.7, boundary="periodic"),
        ModelSpec("fermi_hubbard", 4, n_up=2, n_down=1, t=1.3),
        ModelSpec("bose_hubbard", 4, n_particles=3),
        ModelSpec("bose_hubbard", 3, n_particles=4, bose_g2="standard"),
    ],
)
def test_hamiltonian_is_linear_in_c(spec):
    ops = build_model(spec)
    H0, H1, H3 = dense(ops, 0.0), dense(ops, 1.0), dense(ops, 3.0)
    assert np.allclose(H1 - H0, ops.G2hat.toarray())
    assert np.allclose(H3 - H0, 3 * ops.G2hat.toarray())
    assert ops.H0.hermiticity_error() < 1e-12 and ops.G2hat.hermiticity_error() < 1e-12


def test_two_site_ising_pair_operator():
    ops = build_model(ModelSpec("tfim", 2))
    assert np.allclose(np.linalg.eigvalsh(ops.G2hat.toarray()), [-0.25, -0.25, 0.25, 0.25])


def test_two_site_hubbard_double_occupancy_spectrum():
    ops = build_model(ModelSpec("fermi_hubbard", 2, n_up=1, n_down=1))
    assert np.allclose(np.sort(np.diag(ops.G2hat.toarray())), [0, 0, 1, 1])


def test_two_site_hubbard_ground_energy():
    t, c = 1.0, 4.0
    ops = build_model(ModelSpec("fermi_hubbard", 2, n_up=1, n_down=1, t=t))
    E0 = np.linalg.eigvalsh(dense(ops, c))[0]
    assert np.isclose(E0, (c - np.sqrt(c * c + 16 * t * t)) / 2, atol=1e-13)
    assert np.isclose(E0, -0.8284271247461903, atol=1e-12)


def test_single_site_bose_pair_operator():
    ops = build_model(ModelSpec("bose_hubbard", 1, n_particles=2))
    assert np.allclose(ops.G2hat.toarray(), [[4.0]])
    std = build_model(ModelSpec("bose_hubbard", 1, n_particles=2, bose_g2="standard"))
    assert np.allclose(std.G2hat.toarray(), [[1.0]])


@given(st.integers(1, 4), st.integers(0, 5))
def test_bose_conventions_differ_by_number(L, N):
    """sum n^2 = 2 sum n(n-1)/2 + N on every sector."""
    a = build_model(ModelSpec("bose_hubbard", L, n_particles=N)).G2hat.toarray()
    b = build_model(ModelSpec("bose_hubbard", L, n_particles=N, bose_g2="standard")).G2hat.toarray()
    assert np.allclose(a, 2 * b + N * np.eye(a.shape[0]))


@given(st.integers(2, 7), st.floats(0.1, 2.0), st.floats(-4, 4))
def test_tfim_commutes_with_spin_flip(L, h_x, c):
    ops = build_model(ModelSpec("tfim", L, h_x=h_x, boundary="periodic"))
    P = spin_flip_parity(ops.basis).toarray()
    H = dense(ops, c)
    assert np.allclose(H @ P, P @ H)


@given(st.integers(1, 8), st.sampled_from(["open", "periodic"]))
def test_bond_count(L, boundary):
    spec = ModelSpec("tfim", L, boundary=boundary)
    expect = L - 1 + (1 if boundary == "periodic" and L > 2 else 0)
    assert len(spec.bonds()) == expect
    G2 = build_model(spec).G2hat.toarray()
    # all spins up is an eigenstate with one quarter per bond
    assert np.isclose(G2[0, 0], expect / 4)


def test_hubbard_conserves_number_and_g2_diagonal():
    ops = build_model(ModelSpec("fermi_hubbard", 3, n_particles=3))
    H = dense(ops, 2.5)
    N = ops.observables["n_total"].toarray()
    assert np.allclose(N, 3 * np.eye(N.shape[0]))
    G2 = ops.G2hat.toarray()
    assert np.allclose(G2, np.diag(np.diag(G2)))
    assert np.allclose(np.diag(G2), np.round(np.diag(G2)))
    assert np.allclose(H @ G2 - G2 @ H, (ops.H0.toarray() @ G2 - G2 @ ops.H0.toarray()))


def test_spec_validation():
    with pytest.raises(ModelError):
        ModelSpec("heisenberg", 4)
    with pytest.raises(ModelError):
        ModelSpec("tfim", 0)
    with pytest.raises(ModelError):
        ModelSpec("fermi_hubbard", 4, n_up=1, n_down=1, h_z=0.1)
    with pytest.raises(ModelError):
        ModelSpec("bose_hubbard", 4)
    with pytest.raises(ModelError):
        ModelSpec("tfim", 4, boundary="twisted")
    with pytest.raises(ModelError):
        ModelSpec("bose_hubbard", 2, n_particles=1, bose_g2="other")


def test_dimension_cap():
    with pytest.raises(ModelError, match="cap"):
        build_model(ModelSpec("tfim", 13))
    assert build_model(ModelSpec("tfim", 13, max_dim=8192)).basis.dimension == 8192


def test_h_z_only_for_spin_chains():
    ops = build_model(ModelSpec("fermi_hubbard", 2, n_up=1, n_down=1))
    with pytest.raises(ModelError):
        hamiltonian_at(ops, 1.0, 0.5)


def test_round_trip_dict():
    spec = ModelSpec("fermi_hubbard", 4, n_up=2, n_down=2, t=0.5, boundary="periodic")
    assert ModelSpec(**spec.to_dict()) == spec
