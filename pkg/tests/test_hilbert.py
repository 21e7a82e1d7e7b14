import itertools
from math import comb

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from oracles import SX, SZ, site_op
from pairmaxwell.hilbert import (
    BasisError,
    Term,
    annihilator,
    build_operator,
    expected_dimension,
    make_basis,
    operator_sum,
    spin_flip_parity,
)


# ---------------------------------------------------------------- dimensions

@pytest.mark.parametrize(
    "kind, kw, dim",
    [
        ("spin_half", dict(sites=4), 16),
        ("fermion_spinful", dict(sites=4, n_up=2, n_down=2), 36),
        ("boson_cutoff", dict(sites=3, n_particles=3), 10),
    ],
)
def test_reference_dimensions(kind, kw, dim):
    sites = kw.pop("sites")
    assert make_basis(kind, sites, **kw).dimension == dim


@given(st.integers(1, 6), st.data())
def test_fermion_sector_dimension(L, data):
    nu = data.draw(st.integers(0, L))
    nd = data.draw(st.integers(0, L))
    assert make_basis("fermion_spinful", L, n_up=nu, n_down=nd).dimension == comb(L, nu) * comb(L, nd)


@given(st.integers(1, 5), st.integers(0, 6), st.integers(1, 4))
def test_boson_dimension_matches_enumeration(L, N, cutoff):
    brute = sum(1 for occ in itertools.product(range(cutoff + 1), repeat=L) if sum(occ) == N)
    if brute == 0:
        with pytest.raises(BasisError):
            make_basis("boson_cutoff", L, n_particles=N, cutoff=cutoff)
        return
    b = make_basis("boson_cutoff", L, n_particles=N, cutoff=cutoff)
    assert b.dimension == brute == expected_dimension("boson_cutoff", L, n_particles=N, cutoff=cutoff)
    occ = b.occupations()
    assert np.all(occ.sum(axis=1) == N) and occ.max() <= cutoff


@given(st.integers(1, 5), st.integers(0, 10))
def test_total_n_fermion_sector(L, N):
    if N > 2 * L:
        with pytest.raises(BasisError):
            make_basis("fermion_spinful", L, n_particles=N)
        return
    b = make_basis("fermion_spinful", L, n_particles=N)
    assert b.dimension == comb(2 * L, N)
    assert np.all(b.occupations().sum(axis=1) == N)


def test_enumeration_is_sorted_and_reproducible():
    a = make_basis("fermion_spinful", 4, n_up=2, n_down=1)
    b = make_basis("fermion_spinful", 4, n_up=2, n_down=1)
    assert np.array_equal(a.codes, b.codes)
    assert np.all(np.diff(a.codes) > 0)
    assert np.array_equal(a.index_of(a.codes), np.arange(a.dimension))
    assert a.index_of([0])[0] == -1


@pytest.mark.parametrize(
    "kind, kw",
    [
        ("fermion_spinful", dict(sites=2, n_up=3, n_down=0)),
        ("fermion_spinful", dict(sites=2, n_up=-1, n_down=0)),
        ("boson_cutoff", dict(sites=2, n_particles=5, cutoff=2)),
        ("nonsense", dict(sites=2)),
        ("spin_half", dict(sites=0)),
    ],
)
def test_invalid_sectors_rejected(kind, kw):
    sites = kw.pop("sites")
    with pytest.raises(BasisError):
        make_basis(kind, sites, **kw)


# ----------------------------------------------------------------- operators

def test_szsz_two_sites_is_diagonal():
    b = make_basis("spin_half", 2)
    m = build_operator(Term("szsz", (0, 1)), b).toarray()
    assert np.allclose(m, np.diag([0.25, -0.25, -0.25, 0.25]))


def test_single_spin_sx():
    b = make_basis("spin_half", 1)
    assert np.allclose(build_operator(Term("sx", (0,)), b).toarray(), [[0, 0.5], [0.5, 0]])


@given(st.integers(2, 5), st.data())
def test_spin_operators_match_kronecker_products(L, data):
    """Spectra of random spin Hamiltonians agree with an independent Kronecker-product build."""
    b = make_basis("spin_half", L)
    coeffs = data.draw(st.lists(st.floats(-2, 2), min_size=3 * L, max_size=3 * L))
    ours, ref = [], np.zeros((2**L, 2**L))
    for j in range(L):
        a, z, zz = coeffs[3 * j : 3 * j + 3]
        k = (j + 1) % L
        ours += [(a, build_operator(Term("sx", (j,)), b)), (z, build_operator(Term("sz", (j,)), b))]
        ref += a * site_op(SX, j, L) + z * site_op(SZ, j, L)
        if k != j:
            ours.append((zz, build_operator(Term("szsz", (j, k)), b)))
            ref += zz * site_op(SZ, j, L) @ site_op(SZ, k, L)
    H = operator_sum(ours, b, "H").toarray()
    assert np.allclose(np.linalg.eigvalsh(H), np.linalg.eigvalsh(ref), atol=1e-12)


def test_fermion_anticommutation():
    b = make_basis("fermion_spinful", 3)
    ops = [annihilator(b, j, s) for j in range(3) for s in ("up", "down")]
    eye = sp.identity(b.dimension)
    for i, ci in enumerate(ops):
        for j, cj in enumerate(ops):
            acomm = (ci @ cj.T + cj.T @ ci).toarray()
            assert np.allclose(acomm, eye.toarray() if i == j else 0.0)
            assert np.allclose((ci @ cj + cj @ ci).toarray(), 0.0)


@pytest.mark.parametrize("i, j, spin", [(0, 1, "up"), (0, 2, "down"), (2, 0, "up"), (1, 2, "down")])
def test_hop_equals_creation_annihilation_products(i, j, spin):
    b = make_basis("fermion_spinful", 3)
    ci, cj = annihilator(b, i, spin), annihilator(b, j, spin)
    ref = (ci.T @ cj + cj.T @ ci).toarray()
    assert np.allclose(build_operator(Term("hop", (i, j), spin=spin), b).toarray(), ref)


def test_double_occupancy_counts_pairs():
    b = make_basis("fermion_spinful", 3, n_up=2, n_down=2)
    occ = b.occupations()
    D = sum(build_operator(Term("double_occ", (j,)), b).toarray() for j in range(3))
    assert np.allclose(np.diag(D), (occ[:, :3] * occ[:, 3:]).sum(axis=1))
    assert np.allclose(D, np.diag(np.diag(D)))


def test_boson_hop_two_sites():
    b = make_basis("boson_cutoff", 2, n_particles=2)
    m = build_operator(Term("bhop", (0, 1)), b).toarray()
    assert np.allclose(np.linalg.eigvalsh(m), [-2.0, 0.0, 2.0])
    assert np.isclose(np.max(np.abs(m)), np.sqrt(2))


def test_boson_onsite_terms():
    b = make_basis("boson_cutoff", 2, n_particles=3)
    n = b.occupations()[:, 0]
    assert np.allclose(np.diag(build_operator(Term("n2", (0,)), b).toarray()), n**2)
    assert np.allclose(np.diag(build_operator(Term("pair", (0,)), b).toarray()), n * (n - 1) / 2)
    assert np.allclose(np.diag(build_operator(Term("number", (0,)), b).toarray()), n)


@given(st.integers(3, 4), st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_random_fermion_sums_are_hermitian_and_conserve_number(L, c):
    full = make_basis("fermion_spinful", L)
    terms = [
        Term("hop", (0, 1), "up", c[0]),
        Term("hop", (L - 1, 0), "down", c[1]),
        Term("double_occ", (L - 1,), None, c[2]),
        Term("number", (0,), "down", c[3]),
        Term("hop", (1, L - 1), "down", c[4]),
    ]
    H = operator_sum([(t.coefficient, build_operator(t, full)) for t in terms], full, "H")
    assert H.hermiticity_error() < 1e-12
    N = np.diag(full.occupations().sum(axis=1).astype(float))
    M = H.toarray()
    assert np.allclose(M @ N, N @ M)


def test_spin_flip_parity_squares_to_one():
    b = make_basis("spin_half", 4)
    P = spin_flip_parity(b)
    assert np.allclose((P @ P).toarray(), np.eye(16))
    X = site_op(2 * SX, 0, 4)
    for j in range(1, 4):
        X = X @ site_op(2 * SX, j, 4)
    assert np.allclose(P.toarray(), X)


def test_term_basis_mismatch_rejected():
    with pytest.raises(ValueError):
        build_operator(Term("hop", (0, 1), "up"), make_basis("spin_half", 2))
    with pytest.raises(ValueError):
        build_operator(Term("sx", (0,)), make_basis("boson_cutoff", 2, n_particles=1))
    with pytest.raises(ValueError):
        build_operator(Term("sx", (5,)), make_basis("spin_half", 2))


def test_operator_sum_rejects_foreign_basis():
    a = make_basis("spin_half", 2)
    b = make_basis("spin_half", 3)
    with pytest.raises(ValueError):
        operator_sum([(1.0, build_operator(Term("sx", (0,)), b))], a, "bad")
