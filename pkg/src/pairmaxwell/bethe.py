"""Lieb-Liniger ground state from the Lieb integral equation (hbar = m = 1).

With quasi-momenta rescaled to [-1, 1] the equation reads

    g(x) - (1/2pi) int_{-1}^{1} 2 lam g(y) / (lam^2 + (x - y)^2) dy = 1/2pi,

and fixes gamma = lam / int g, e(gamma) = (gamma/lam)^3 int x^2 g.  The ground
energy of N bosons on length V is E0 = N n^2 e(gamma) / 2 with n = N/V and
gamma = 2c/n.  The Hellmann-Feynman theorem gives the local pair correlation
g2 = e'(gamma) and the integrated correlation G2 = V n^2 e'(gamma).

Pressure and inverse compressibility, at fixed N and c (gamma grows with V):

    P          = n^3 (e - gamma e' / 2)
    1 / kappa  = n^3 (3 e - 2 gamma e' + gamma^2 e'' / 2)

The Maxwell route integrates the V-derivatives of G2 over c, anchored at the
Tonks-Girardeau point c = infinity.  In u = 1/gamma,

    P(u)       = pi^2 n^3 / 3 + (n^3 / 2) int_0^u f(u') du',  f = gamma^3 e'' - gamma^2 e'
    1/kappa(u) = pi^2 n^3     - (n^3 / 2) int_0^u h(u') du',  h = gamma^2 (2 e' - 2 gamma e'' + gamma^2 e''')

with the u -> 0 limits f = -4 pi^2 and h = 16 pi^2 from e = (pi^2/3)(1 - 4u + 12u^2 + ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import toms748

from .maxwell import MaxwellResult, cumulative_from_anchor, fd_weights

DEFAULT_NODES = 256
E_TG = math.pi**2 / 3
# stencil for e', e'', e''' : gamma * (1 + k * STEP), k = -3..3
STENCIL_STEP = 2e-3
STENCIL = np.arange(-3, 4)


class BetheError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class BetheSolution:
    gamma: float
    lam: float
    nodes: np.ndarray
    weights: np.ndarray
    density_profile: np.ndarray
    e: float
    de_dgamma: float

    @property
    def g2(self) -> float:
        return self.de_dgamma


@lru_cache(maxsize=8)
def _quadrature(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    return x, w, (x[:, None] - x[None, :]) ** 2


def _density(lam: float, nodes: int) -> np.ndarray:
    x, w, d2 = _quadrature(nodes)
    kernel = (lam / math.pi) * w[None, :] / (lam**2 + d2)
    return np.linalg.solve(np.eye(nodes) - kernel, np.full(nodes, 1.0 / (2 * math.pi)))


def _gamma_of_lambda(lam: float, nodes: int) -> float:
    _, w, _ = _quadrature(nodes)
    return lam / float(w @ _density(lam, nodes))


@lru_cache(maxsize=65536)
def _solve(gamma: float, nodes: int):
    if not gamma > 0:
        raise BetheError(f"gamma must be positive, got {gamma}")
    guess = gamma / math.pi + 0.5 * math.sqrt(gamma)

    def resid(lam):
        return math.log(_gamma_of_lambda(lam, nodes) / gamma)

    lo, hi = guess / 1.5, guess * 1.5
    for _ in range(100):
        if resid(lo) <= 0:
            break
        lo /= 1.5
    for _ in range(100):
        if resid(hi) >= 0:
            break
        hi *= 1.5
    try:
        lam, info = toms748(
            resid, lo, hi, xtol=1e-16 * guess, rtol=4 * np.finfo(float).eps, maxiter=200, full_output=True
        )
    except (RuntimeError, ValueError) as exc:
        raise BetheError(f"cutoff search failed for gamma={gamma}: {exc}") from exc
    if not info.converged:
        raise BetheError(f"cutoff search did not converge for gamma={gamma}; last residual {resid(lam):.3e}")
    x, w, _ = _quadrature(nodes)
    g = _density(lam, nodes)
    norm = float(w @ g)
    # (gamma/lam)^3 with gamma = lam/norm at the converged cutoff
    e = float(w @ (x**2 * g)) / norm**3
    return lam, e, g


def energy_density(gamma: float, nodes: int = DEFAULT_NODES) -> float:
    """Dimensionless ground-state energy e(gamma)."""
    return _solve(float(gamma), int(nodes))[1]


def solve_lieb_equation(gamma: float, nodes: int = DEFAULT_NODES) -> BetheSolution:
    """Solve the Lieb equation at coupling ``gamma``; e' by central difference, step 1e-4 gamma."""
    if nodes < 64:
        raise BetheError(f"need at least 64 nodes, got {nodes}")
    gamma = float(gamma)
    lam, e, g = _solve(gamma, nodes)
    d = 1e-4 * gamma
    de = (energy_density(gamma + d, nodes) - energy_density(gamma - d, nodes)) / (2 * d)
    x, w, _ = _quadrature(nodes)
    return BetheSolution(gamma, lam, x, w, g, e, de)


def energy_derivatives(gamma: float, nodes: int = DEFAULT_NODES):
    """(e, e', e'', e''') at ``gamma`` from a seven-point stencil of relative step 2e-3."""
    gamma = float(gamma)
    pts = gamma * (1 + STENCIL_STEP * STENCIL)
    vals = np.array([energy_density(p, nodes) for p in pts])
    out = [vals[3]]
    for k in (1, 2, 3):
        out.append(float(fd_weights(gamma, pts, k) @ vals))
    return tuple(out)


# --------------------------------------------------------------------------
# direct route

def pressure_direct(n: float, gamma: float, nodes: int = DEFAULT_NODES) -> float:
    """P = -dE0/dV at fixed N and c."""
    sol = solve_lieb_equation(gamma, nodes)
    return n**3 * (sol.e - 0.5 * gamma * sol.de_dgamma)


def _inverse_compressibility_direct(n: float, gamma: float, nodes: int) -> float:
    e, e1, e2, _ = energy_derivatives(gamma, nodes)
    return n**3 * (3 * e - 2 * gamma * e1 + 0.5 * gamma**2 * e2)


# --------------------------------------------------------------------------
# Maxwell route

def _pressure_integrand(u: float, nodes: int) -> float:
    if u == 0.0:
        return -4 * math.pi**2
    g = 1.0 / u
    _, e1, e2, _ = energy_derivatives(g, nodes)
    return g**3 * e2 - g**2 * e1


def _compressibility_integrand(u: float, nodes: int) -> float:
    if u == 0.0:
        return 16 * math.pi**2
    g = 1.0 / u
    _, e1, e2, e3 = energy_derivatives(g, nodes)
    return g**2 * (2 * e1 - 2 * g * e2 + g**2 * e3)


def _u_grid(targets: np.ndarray, max_step: float) -> np.ndarray:
    """Union of 0, the target u values and uniform subdivisions no wider than ``max_step``."""
    knots = np.unique(np.concatenate([[0.0], targets]))
    pieces = [knots[:1]]
    for a, b in zip(knots[:-1], knots[1:]):
        m = max(1, int(math.ceil((b - a) / max_step)))
        pieces.append(a + (b - a) * np.arange(1, m) / m)
        pieces.append([b])
    return np.concatenate(pieces)


def _maxwell_tg(kind, n, gamma_axis, nodes, max_step, integrand, anchor, sign):
    gam = np.asarray(gamma_axis, dtype=float)
    if gam.ndim != 1 or gam.size == 0 or np.any(gam <= 0):
        raise BetheError("gamma axis must be a nonempty sequence of positive values")
    if np.any(gam < 1.0):
        raise BetheError("the Tonks-Girardeau anchored route is restricted to gamma >= 1")
    order = np.argsort(gam)
    gam_sorted = gam[order]
    targets = np.sort(1.0 / gam_sorted)
    u = _u_grid(targets, max_step)
    f = np.array([integrand(float(ui), nodes) for ui in u])
    integral, err = cumulative_from_anchor(u, f, 0)
    idx = np.searchsorted(u, targets)[::-1]
    if not np.array_equal(u[idx], 1.0 / gam_sorted):
        raise BetheError("internal: target u values lost from the integration grid")
    y = anchor + sign * 0.5 * n**3 * integral[idx]
    e = 0.5 * n**3 * err[idx]
    return MaxwellResult(
        kind,
        0.5 * n * gam_sorted,
        y,
        math.inf,
        anchor,
        "Tonks-Girardeau limit (c0 = infinity, u = 1/gamma = 0)",
        e,
        x_name="V",
        x_axis=None,
        integrand=f[idx],
    )


def pressure_maxwell(n: float, gamma_axis: Sequence[float], nodes: int = DEFAULT_NODES, max_step: float = 0.02) -> MaxwellResult:
    """P(gamma) from -dG2/dV integrated down from the Tonks-Girardeau anchor.

    The result's ``c_axis`` is c = gamma n / 2 in increasing order.
    """
    return _maxwell_tg("pressure", n, gamma_axis, nodes, max_step, _pressure_integrand, E_TG * n**3, +1.0)


def inverse_compressibility(n: float, gamma, route: str = "direct", nodes: int = DEFAULT_NODES, max_step: float = 0.02):
    """1/kappa_T = V d^2E0/dV^2: ``direct`` from e(gamma), ``maxwell`` from V d^2G2/dV^2.

    ``gamma`` may be a scalar or a sequence.  The Maxwell route returns a
    :class:`MaxwellResult` (sorted by gamma); the direct route returns floats.
    """
    if route == "direct":
        if np.ndim(gamma) == 0:
            return _inverse_compressibility_direct(n, float(gamma), nodes)
        return np.array([_inverse_compressibility_direct(n, float(g), nodes) for g in gamma])
    if route == "maxwell":
        return _maxwell_tg(
            "inverse_compressibility",
            n,
            np.atleast_1d(gamma),
            nodes,
            max_step,
            _compressibility_integrand,
            math.pi**2 * n**3,
            -1.0,
        )
    raise ValueError(f"route must be 'direct' or 'maxwell', got {route!r}")


def ground_energy(N: float, V: float, c: float, nodes: int = DEFAULT_NODES) -> float:
    """E0 = N n^2 e(gamma) / 2 for N bosons on length V."""
    n = N / V
    return 0.5 * N * n**2 * energy_density(2 * c / n, nodes)
