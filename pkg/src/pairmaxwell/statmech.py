"""Canonical statistical mechanics from exact spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse.linalg as spla

from .hilbert import HERMITIAN_TOL, BasisDescriptor, OperatorMatrix
from .models import DEFAULT_MAX_DIM, ModelSpec, build_model, hamiltonian_at

# relative Boltzmann weight below which a truncated spectrum is accepted
TRUNCATION_WEIGHT = 1e-13
DEGENERACY_TOL = 1e-9


class SpectrumError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectrumBundle:
    basis: BasisDescriptor
    eigenvalues: np.ndarray
    expectations: dict = field(default_factory=dict)
    complete: bool = True
    vectors: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


@dataclass(frozen=True)
class ThermoState:
    T: float
    log_Z: float
    F: float
    U: float
    S: float
    C_V: float
    G2: Optional[float] = None
    m_x: Optional[float] = None
    m_z: Optional[float] = None
    observables: dict = field(default_factory=dict)

    @property
    def Z(self) -> float:
        return math.exp(self.log_Z) if self.log_Z < 700 else math.inf


def diagonalize(
    H: OperatorMatrix,
    observables: Sequence[OperatorMatrix] = (),
    *,
    method: str = "dense",
    n_states: Optional[int] = None,
    max_dim: int = DEFAULT_MAX_DIM,
    keep_vectors: bool = False,
) -> SpectrumBundle:
    """Eigen-decompose ``H`` and record <k|O|k> for every observable.

    ``method="dense"`` gives the full spectrum.  ``method="lowest"`` runs
    Lanczos for the ``n_states`` lowest states; such a bundle is only usable
    at temperatures where the omitted states carry negligible weight, which
    :func:`thermo_at` checks.
    """
    dim = H.matrix.shape[0]
    if dim > max_dim:
        raise SpectrumError(f"dimension {dim} exceeds safety cap {max_dim}")
    err = H.hermiticity_error()
    if err >= HERMITIAN_TOL:
        raise SpectrumError(f"{H.label}: Hamiltonian is not Hermitian (max|H-H^T| = {err:.3e})")
    for op in observables:
        if not op.basis.same_as(H.basis):
            raise SpectrumError(f"observable {op.label!r} lives on a different basis than {H.label!r}")

    complete = True
    if method == "dense" or (method == "lowest" and (n_states is None or n_states >= dim - 1)):
        try:
            w, v = np.linalg.eigh(H.matrix.toarray())
        except np.linalg.LinAlgError as exc:
            raise SpectrumError(
                f"eigh failed on {H.label} (dim={dim}, |H|_max={abs(H.matrix).max():.3e}, "
                f"hermiticity={err:.2e}): {exc}"
            ) from exc
    elif method == "lowest":
        k = int(n_states)
        try:
            w, v = spla.eigsh(H.matrix, k=k, which="SA", tol=0, v0=np.ones(dim) / math.sqrt(dim))
        except spla.ArpackError as exc:
            raise SpectrumError(f"Lanczos failed on {H.label} (dim={dim}, k={k}): {exc}") from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        complete = False
    else:
        raise ValueError(f"method must be 'dense' or 'lowest', got {method!r}")

    expectations = {op.label: np.einsum("ik,ik->k", v, op.matrix @ v) for op in observables}
    return SpectrumBundle(H.basis, w, expectations, complete, v if keep_vectors else None)


def _weights(E: np.ndarray, T: float):
    E0 = E[0]
    if T == 0.0:
        tol = DEGENERACY_TOL * max(1.0, abs(E0))
        g = int(np.count_nonzero(E - E0 <= tol))
        w = np.zeros_like(E)
        w[:g] = 1.0 / g
        return w, math.log(g), g
    x = -(E - E0) / T
    log_z_shift = float(np.logaddexp.reduce(x))
    w = np.exp(x - log_z_shift)
    return w, log_z_shift, None


def thermo_at(bundle: SpectrumBundle, T: float) -> ThermoState:
    """Thermal state at temperature ``T`` (T = 0 averages the ground manifold)."""
    if T < 0:
        raise ValueError(f"temperature must be >= 0, got {T}")
    E = bundle.eigenvalues
    w, log_z_shift, g = _weights(E, float(T))
    if not bundle.complete and T > 0 and w[-1] > TRUNCATION_WEIGHT:
        raise SpectrumError(
            f"truncated spectrum ({E.size} states) is not converged at T={T}: "
            f"top state weight {w[-1]:.2e}; request more states or use method='dense'"
        )
    E0 = float(E[0])
    U = float(w @ E)
    if T == 0.0:
        F, S, C, log_Z = E0, log_z_shift, 0.0, math.inf
    else:
        F = E0 - T * log_z_shift
        S = log_z_shift + (U - E0) / T
        # scale before squaring: T**2 underflows for T below ~1e-154
        C = float(w @ ((E - U) / T) ** 2)
        log_Z = log_z_shift - E0 / T
    obs = {label: float(w @ vals) for label, vals in bundle.expectations.items()}
    L = bundle.basis.sites
    m_x = obs["sx_total"] / L if "sx_total" in obs else None
    m_z = obs["sz_total"] / L if "sz_total" in obs else None
    return ThermoState(float(T), log_Z, F, U, S, C, obs.get("G2"), m_x, m_z, obs)


def magnetization_direct(bundle: SpectrumBundle, T: float):
    """Per-site thermal (<sum_j S^x_j>/L, <sum_j S^z_j>/L)."""
    missing = [k for k in ("sx_total", "sz_total") if k not in bundle.expectations]
    if missing:
        raise ValueError(f"bundle lacks observables {missing}; diagonalize a spin model with them")
    st = thermo_at(bundle, T)
    return st.m_x, st.m_z


def solve_model(
    spec: ModelSpec,
    c: Optional[float] = None,
    h_z: Optional[float] = None,
    *,
    method: str = "dense",
    n_states: Optional[int] = None,
    ops=None,
) -> SpectrumBundle:
    """Diagonalize ``spec`` at coupling ``c`` with G2 and the model observables attached."""
    ops = ops if ops is not None else build_model(spec)
    c = spec.c if c is None else c
    h_z = spec.h_z if h_z is None else h_z
    H = hamiltonian_at(ops, c, h_z)
    observables = [ops.G2hat] + list(ops.observables.values())
    return diagonalize(H, observables, method=method, n_states=n_states, max_dim=spec.max_dim)


# --------------------------------------------------------------------------
# Hellmann-Feynman check

def _refined_spectrum(H: OperatorMatrix, shift=None, observable: Optional[OperatorMatrix] = None):
    """Eigenvalues accurate to ~1e-18 |H|: float64 eigh, then Rayleigh quotients in long double.

    ``shift`` is an optional ``(coefficient, OperatorMatrix)`` added to ``H`` in
    long double, so that a tiny coupling offset is not rounded into float64.
    Returns (eigenvalues, <k|observable|k> or None), both long double.
    """
    Hl = H.matrix.astype(np.longdouble)
    if shift is not None:
        coef, op = shift
        Hl = Hl + np.longdouble(coef) * op.matrix.astype(np.longdouble)
    w, v = np.linalg.eigh(Hl.astype(float).toarray())
    vl = v.astype(np.longdouble)
    den = np.einsum("ik,ik->k", vl, vl)
    E = np.einsum("ik,ik->k", vl, Hl @ vl) / den
    diag = None
    if observable is not None:
        diag = np.einsum("ik,ik->k", vl, observable.matrix.astype(np.longdouble) @ vl) / den
    order = np.argsort(E)
    return E[order], (diag[order] if diag is not None else None)


def _refined_eigenvalues(H: OperatorMatrix, shift=None) -> np.ndarray:
    return _refined_spectrum(H, shift)[0]


def free_energy(H: OperatorMatrix, T: float, precise: bool = False, shift=None):
    """Helmholtz free energy ``-T ln Tr exp(-H/T)``.

    ``precise=True`` evaluates eigenvalues and the log-sum in 80-bit long double
    (returned as ``np.longdouble``), needed when finite differences in c go
    below ~1e-3.
    """
    if not precise:
        if shift is not None:
            H = OperatorMatrix(H.basis, H.matrix + shift[0] * shift[1].matrix, H.label)
        E = np.linalg.eigvalsh(H.matrix.toarray())
        if T == 0:
            return float(E[0])
        return float(E[0] - T * np.logaddexp.reduce(-(E - E[0]) / T))
    E = _refined_eigenvalues(H, shift)
    if T == 0:
        return E[0]
    x = -(E - E[0]) / np.longdouble(T)
    s = np.sum(np.exp(x))
    return E[0] - np.longdouble(T) * np.log(s)


def thermal_g2(spec: ModelSpec, T: float, c: Optional[float] = None) -> float:
    return thermo_at(solve_model(spec, c), T).G2


def hellmann_feynman_residual(spec: ModelSpec, T: float, dc: float, c: Optional[float] = None) -> float:
    """``|[F(c+dc) - F(c-dc)] / (2 dc) - G2(c)|`` at the coupling ``spec.c``.

    The two free energies are evaluated in long double with ``dc`` added
    exactly, so the residual shows the O(dc^2) truncation down to dc ~ 1e-5.
    """
    if dc <= 0:
        raise ValueError("dc must be positive")
    c = spec.c if c is None else c
    ops = build_model(spec)
    H = hamiltonian_at(ops, c, spec.h_z)
    Fp = free_energy(H, T, precise=True, shift=(dc, ops.G2hat))
    Fm = free_energy(H, T, precise=True, shift=(-dc, ops.G2hat))
    E, g = _refined_spectrum(H, observable=ops.G2hat)
    if T == 0:
        tol = DEGENERACY_TOL * max(1.0, abs(float(E[0])))
        ground = (E - E[0]) <= tol
        g2 = np.mean(g[ground])
    else:
        w = np.exp(-(E - E[0]) / np.longdouble(T))
        g2 = np.sum(w * g) / np.sum(w)
    return float(abs((Fp - Fm) / (2 * np.longdouble(dc)) - g2))
