"""Closed-form reference physics.

Transverse-field Ising chain
----------------------------
For ``H = h_x sum_j S^x_j + c sum_j S^z_j S^z_{j+1}`` with spin-1/2 operators
(ferromagnetic for c < 0), the Jordan-Wigner quasiparticle energies are
``h_x * Lambda_k`` with

    Lambda_k = sqrt(1 + (c/2h_x)^2 + (c/h_x) cos k),

the ground energy per site is ``e0 = -(h_x/2pi) int_0^pi Lambda_k dk``, and the
critical point sits at ``|c| = 2 h_x``.  Everything below is per site in the
thermodynamic limit and follows from e0:

    G2   = de0/dc = -(1/4pi) int (cos k + c/2h_x) / Lambda_k dk
    m_x  = -de0/dh_x = (1/2pi) int (1 + (c/2h_x) cos k) / Lambda_k dk

Lattice comparisons use ``lam = |c| / (2 h_x)``, which is 1 at the critical
point.  The closed-form m_z and critical log-derivative are written in
``ratio = |c| / h_x`` instead; see :class:`TfimPoint`.

:func:`tfim_lambda_k` also offers the ``(c/h_x)^2`` variant of the dispersion
(``normalization="printed"``), which never closes the gap and is kept only for
comparison.

Yang-Gaudin gas
---------------
Units hbar = m = k_B = 1; gamma = 2c/n, tau = 2T/n^2, so gamma/sqrt(2 tau) = c/sqrt(T).
G2 = V n^2 g2 / 4 for the interaction c int psi_up^+ psi_dn^+ psi_dn psi_up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .maxwell import MaxwellResult, reconstruct_from_derivative

QUAD_TOL = 1e-12
BETA_ISING = 0.125


# --------------------------------------------------------------------------
# transverse-field Ising


@dataclass(frozen=True)
class TfimPoint:
    c: float
    h_x: float = 1.0

    def __post_init__(self):
        if not self.h_x > 0:
            raise ValueError(f"h_x must be positive, got {self.h_x}")

    @property
    def ratio(self) -> float:
        """|c| / h_x as it enters the printed critical formulas."""
        return abs(self.c) / self.h_x

    @property
    def lam(self) -> float:
        """Distance-to-criticality ratio |c| / (2 h_x); equals 1 at the critical point."""
        return abs(self.c) / (2 * self.h_x)

    @classmethod
    def from_lam(cls, lam: float, h_x: float = 1.0, ferromagnetic: bool = True) -> "TfimPoint":
        c = 2 * h_x * lam
        return cls(-c if ferromagnetic else c, h_x)


def tfim_lambda_k(p: TfimPoint, k, normalization: str = "printed"):
    """Quasiparticle energy ratio Lambda_k, clamped at zero.

    ``normalization="spin_half"`` is the dispersion of the model above;
    ``"printed"`` replaces (c/2h_x)^2 by (c/h_x)^2.
    """
    r = p.c / p.h_x
    if normalization == "printed":
        arg = 1 + r**2 + r * np.cos(k)
    elif normalization == "spin_half":
        arg = 1 + 0.25 * r**2 + r * np.cos(k)
    else:
        raise ValueError("normalization must be 'printed' or 'spin_half'")
    return np.sqrt(np.maximum(arg, 0.0))


def _quiet_quad(f, a, b, **kw):
    # full_output keeps quadpack diagnostics out of the warning stream; near the
    # critical point the requested 1e-12 is not always reachable
    out = integrate.quad(f, a, b, full_output=1, **kw)
    return out[0], out[1]


def _kquad(f):
    """int_0^pi f(k) dk; the split at pi/2 separates the two possible soft edges."""
    return _quiet_quad(f, 0.0, math.pi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400, points=[math.pi / 2])


def _lam(r, k):
    return math.sqrt(max(1 + 0.25 * r * r + r * math.cos(k), 0.0))


def _ratio(num, L):
    return num / L if L > 0 else 0.0


def tfim_g2_exact(p: TfimPoint) -> float:
    """Ground-state <S^z_j S^z_{j+1}> per bond in the infinite chain."""
    r = p.c / p.h_x
    if r == 0.0:
        return 0.0
    val, _ = _kquad(lambda k: _ratio(math.cos(k) + 0.5 * r, _lam(r, k)))
    return -val / (4 * math.pi)


def tfim_g2_printed(p: TfimPoint) -> float:
    """The two-integral form (1/4pi) int cos k / Lambda + (c/8 h_x pi) int 1/Lambda with the
    spin-1/2 dispersion.  It equals :func:`tfim_g2_exact` at coupling -c."""
    r = p.c / p.h_x
    a, _ = _kquad(lambda k: math.cos(k) / _lam(r, k))
    b, _ = _kquad(lambda k: 1.0 / _lam(r, k))
    return a / (4 * math.pi) + r * b / (8 * math.pi)


def tfim_dg2_dhx(p: TfimPoint) -> float:
    """dG2/dh_x per site at fixed c.

    Differentiating G2 under the integral gives
    -(1/4pi) int dLambda^{-1}/dh_x (cos k + c/2h_x) dk + (c / 8 pi h_x^2) int Lambda^{-1} dk
    with dLambda^{-1}/dh_x = r (r/2 + cos k) / (2 h_x Lambda^3), r = c/h_x.  Using
    Lambda^2 - (r/2 + cos k)^2 = sin^2 k the two terms merge into

        (r / 8 pi h_x) int_0^pi sin^2 k / Lambda^3 dk,

    which stays integrable up to the critical point, where it diverges
    logarithmically.
    """
    h = p.h_x
    r = p.c / h
    if r == 0.0:
        return 0.0
    if abs(r) == 2.0:
        return math.copysign(math.inf, r)

    def integrand(k):
        L = _lam(r, k)
        return math.sin(k) ** 2 / L**3 if L > 0 else 0.0

    val, _ = _kquad(integrand)
    return r * val / (8 * math.pi * h)


def tfim_mx_exact(p: TfimPoint) -> float:
    """Transverse magnetization m_x = -<S^x> per site from -de0/dh_x."""
    r = p.c / p.h_x
    val, _ = _kquad(lambda k: _ratio(1 + 0.5 * r * math.cos(k), _lam(r, k)))
    return val / (2 * math.pi)


def tfim_mx_maxwell(h_x: float, c_axis: Sequence[float]) -> MaxwellResult:
    """m_x(c) = m_x(0) - int_0^c dG2/dh_x dc' with m_x(0) = 1/2.

    ``c_axis`` must contain 0; the integral between consecutive points uses
    adaptive quadrature and ``err_est`` accumulates its error bounds.
    """
    c = np.asarray(c_axis, dtype=float)
    if c.ndim != 1 or c.size == 0 or np.any(np.diff(c) <= 0):
        raise ValueError("c_axis must be strictly increasing")
    hits = np.flatnonzero(c == 0.0)
    if hits.size == 0:
        raise ValueError("c_axis must contain the anchor c0 = 0")
    i0 = int(hits[0])
    f = lambda cc: tfim_dg2_dhx(TfimPoint(cc, h_x))
    crit = [-2 * h_x, 2 * h_x]
    y = np.empty_like(c)
    err = np.zeros_like(c)
    y[i0] = 0.5
    for direction in (1, -1):
        i, acc, acc_err = i0, 0.0, 0.0
        while 0 <= i + direction < c.size:
            a, b = c[i], c[i + direction]
            lo, hi = min(a, b), max(a, b)
            pts = [x for x in crit if lo < x < hi]
            val, e = _quiet_quad(f, a, b, epsabs=1e-11, epsrel=1e-11, limit=200, points=pts or None)
            acc += val
            acc_err += e
            i += direction
            y[i] = 0.5 - acc
            err[i] = acc_err
    dg = np.array([f(cc) for cc in c])
    return MaxwellResult(
        "magnetization",
        c,
        y,
        0.0,
        0.5,
        "free spins at c = 0: m_x = -<S^x> = 1/2",
        err,
        x_name="h_x",
        x_axis=np.array([h_x]),
        integrand=dg,
        volume=1.0,
    )


def tfim_mz_exact(p: TfimPoint, normalization: str = "printed") -> float:
    """Spontaneous longitudinal magnetization.

    ``"printed"``: (1 - (|c|/h_x)^-2)^(1/8) for |c| > h_x, else 0, saturating at 1.
    ``"spin_half"``: (1/2)(1 - lam^-2)^(1/8) with lam = |c|/(2 h_x), the order
    parameter of the model above, saturating at 1/2.
    """
    if normalization == "printed":
        rho = p.ratio
        return (1.0 - rho**-2) ** BETA_ISING if rho > 1 else 0.0
    if normalization == "spin_half":
        lam = p.lam
        return 0.5 * (1.0 - lam**-2) ** BETA_ISING if lam > 1 else 0.0
    raise ValueError("normalization must be 'printed' or 'spin_half'")


def critical_log_derivative(ratio, beta: float = BETA_ISING):
    """ln(-dG2/dh) = -3 ln(rho) - ln 4 + (beta - 1) ln(1 - rho^-2), rho > 1.

    It is ln(d m_z / d rho) for m_z = (1 - rho^-2)^beta at beta = 1/8, where
    ln(2 beta) = -ln 4.
    """
    rho = np.asarray(ratio, dtype=float)
    if np.any(rho <= 1):
        raise ValueError("the critical log-derivative needs ratio > 1")
    return -3 * np.log(rho) - math.log(4) + (beta - 1) * np.log1p(-(rho**-2))


def tfim_dg2_dhz_exact(p: TfimPoint) -> float:
    """dG2/dh_z in the ordered phase at h_x = 1 units: -exp(critical_log_derivative) / h_x."""
    return -math.exp(float(critical_log_derivative(p.ratio))) / p.h_x


def critical_exponent_fit(
    h_x: float = 1.0,
    ratio_axis: Optional[Sequence[float]] = None,
    values: Optional[Sequence[float]] = None,
    beta: float = BETA_ISING,
):
    """Fit beta from ln(-dG2/dh) = (beta - 1) ln(ratio - 1) + const.

    ``ratio_axis`` defaults to 20 points with ratio - 1 log-spaced on
    [1e-8, 5e-2].  ``values`` are -dG2/dh at those ratios; by default they are
    the exact log-derivative above.  Returns (beta, diagnostics).
    """
    rho = default_critical_axis() if ratio_axis is None else np.asarray(ratio_axis, dtype=float)
    if np.any(rho <= 1):
        raise ValueError("ratio axis must lie strictly above 1")
    x = np.log(rho - 1)
    if np.ptp(x) == 0:
        raise ValueError("degenerate regression: all abscissae are equal")
    if values is None:
        y = critical_log_derivative(rho, beta) - math.log(h_x)
    else:
        v = np.asarray(values, dtype=float)
        if np.any(v <= 0):
            raise ValueError("-dG2/dh must be positive to take the logarithm")
        y = np.log(v)
    fit = np.polynomial.polynomial.polyfit(x, y, 1)
    resid = y - np.polynomial.polynomial.polyval(x, fit)
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) @ (y - y.mean())))
    slope = float(fit[1])
    diag = {"slope": slope, "intercept": float(fit[0]), "r2": r2, "points": int(rho.size),
            "ratio_min": float(rho.min()), "ratio_max": float(rho.max())}
    return slope + 1.0, diag


def default_critical_axis(lo: float = 1e-8, hi: float = 0.05, points: int = 20) -> np.ndarray:
    return 1.0 + np.geomspace(lo, hi, points)


# --------------------------------------------------------------------------
# Yang-Gaudin


@dataclass(frozen=True)
class YangGaudinPoint:
    gamma: float
    tau: float
    polarization: float = 0.0
    n: float = 1.0
    N: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if abs(self.polarization) > 1:
            raise ValueError(f"|polarization| must be <= 1, got {self.polarization}")
        if not self.n > 0 or not self.N > 0:
            raise ValueError("density and particle number must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")

    @property
    def c(self) -> float:
        return 0.5 * self.gamma * self.n

    @property
    def T(self) -> float:
        return 0.5 * self.tau * self.n**2

    @property
    def length(self) -> float:
        return self.N / self.n

    @property
    def high_temperature(self) -> bool:
        """Validity flag for the expansion: tau >= 10 gamma^2."""
        return self.tau >= 10 * self.gamma**2

    def with_c(self, c: float) -> "YangGaudinPoint":
        return YangGaudinPoint(2 * c / self.n, self.tau, self.polarization, self.n, self.N)

    @classmethod
    def from_physical(cls, c: float, T: float, n: float = 1.0, polarization: float = 0.0, N: float = 1.0):
        return cls(2 * c / n, 2 * T / n**2, polarization, n, N)


def yg_g2(p: YangGaudinPoint) -> float:
    """High-temperature g2_updown(0) = (1 - P^2)(1 - sqrt(pi) x erfcx(x)), x = gamma / sqrt(2 tau)."""
    x = p.gamma / math.sqrt(2 * p.tau)
    return (1 - p.polarization**2) * (1 - math.sqrt(math.pi) * x * special.erfcx(x))


def yg_G2(p: YangGaudinPoint) -> float:
    """Integrated pair correlation V n^2 g2 / 4."""
    return p.length * p.n**2 * yg_g2(p) / 4


def yg_contact(p: YangGaudinPoint) -> float:
    """Tan contact C = c^2 n^2 g2 / 4."""
    if p.c == 0:
        raise ValueError("the contact relation is degenerate at c = 0")
    return p.c**2 * p.n**2 * yg_g2(p) / 4


def _fd_integral(nu: float, log_z: float) -> float:
    """Complete Fermi-Dirac integral f_nu(z) = -Li_nu(-z) for nu in {1/2, 3/2}."""
    # t = s^2: f_1/2 = (2/sqrt(pi)) int expit(ln z - s^2) ds, f_3/2 = (4/sqrt(pi)) int s^2 expit(...) ds
    power = 0 if nu == 0.5 else 2
    pref = 2 / math.sqrt(math.pi) if nu == 0.5 else 4 / math.sqrt(math.pi)
    g = lambda s: s**power * special.expit(log_z - s * s)
    return pref * _edge_quad(g, log_z)


def _edge_quad(g, log_z: float) -> float:
    """int_0^inf g(s) ds for integrands that change over ~1/edge around the Fermi edge s = sqrt(ln z)."""
    edge = math.sqrt(max(log_z, 0.0))
    w = min(edge, 40.0 / max(edge, 1.0))
    knots = sorted({0.0, max(edge - w, 0.0), edge, edge + w, edge + 40.0})
    return sum(
        _quiet_quad(g, a, b, epsabs=0, epsrel=1e-13, limit=200)[0] for a, b in zip(knots[:-1], knots[1:]) if b > a
    )


def fermi_fugacity(n_sigma: float, T: float) -> float:
    """ln z of a 1D spinless ideal Fermi gas at density n_sigma, temperature T."""
    lam = math.sqrt(2 * math.pi / T)
    target = n_sigma * lam
    f = lambda lz: math.log(_fd_integral(0.5, lz) / target)
    lo = math.log(target) - 5
    hi = max(1.0, (math.pi / 4) * target**2) + 10
    try:
        return optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise RuntimeError(f"fugacity solve failed for n={n_sigma}, T={T}: {exc}") from exc


def ideal_fermi_entropy(T: float, n: float, polarization: float = 0.0, length: float = 1.0) -> float:
    """Entropy of a two-component 1D ideal Fermi gas, n_sigma = n (1 +- P) / 2.

    Per component S/V = (3/2) f_3/2(z) / lambda - n_sigma ln z with thermal
    wavelength lambda = sqrt(2 pi / T).  That difference cancels badly in the
    degenerate regime, so it is evaluated as the occupation entropy
    S/V = (sqrt(2T)/pi) int_0^inf sigma(ln z - s^2) ds with
    sigma(x) = ln(1 + e^x) - x expit(x) >= 0.
    """
    if not T > 0 or not n > 0:
        raise ValueError("T and n must be positive")
    s = 0.0
    for n_sigma in (0.5 * n * (1 + polarization), 0.5 * n * (1 - polarization)):
        if n_sigma <= 0:
            continue
        s += math.sqrt(2 * T) / math.pi * _occupation_entropy(fermi_fugacity(n_sigma, T))
    return s * length


def _occupation_entropy(log_z: float) -> float:
    def sigma(s):
        a = abs(log_z - s * s)
        return math.log1p(math.exp(-a)) + a * special.expit(-a)

    return _edge_quad(sigma, log_z)


def yg_entropy_correction(p: YangGaudinPoint, convention: str = "derived") -> float:
    """Leading high-temperature interaction correction S - S_IFG.

    ``derived``: -N n (1 - P^2) sqrt(pi) c^2 / (16 T^{3/2}), the leading term of
    the entropy relation applied to g2 above.  ``printed``: the same with
    sqrt(pi / (2 T^3)), smaller by sqrt(2).
    """
    pref = math.sqrt(math.pi) / p.T**1.5
    if convention == "printed":
        pref /= math.sqrt(2)
    elif convention != "derived":
        raise ValueError("convention must be 'derived' or 'printed'")
    return -p.N * p.n * (1 - p.polarization**2) * pref * p.c**2 / 16


def yg_dG2_dT(p: YangGaudinPoint, rel_step: float = 1e-4) -> float:
    """dG2/dT at fixed c, n, P by central difference."""
    T = p.T
    dT = rel_step * T
    up = YangGaudinPoint.from_physical(p.c, T + dT, p.n, p.polarization, p.N)
    dn = YangGaudinPoint.from_physical(p.c, T - dT, p.n, p.polarization, p.N)
    return (yg_G2(up) - yg_G2(dn)) / (2 * dT)


def yg_entropy_maxwell(p: YangGaudinPoint, points: int = 41) -> MaxwellResult:
    """S(c') for c' in [0, c] from S_IFG - int_0^c' dG2/dT dc''."""
    if points < 3 or points % 2 == 0:
        raise ValueError("points must be an odd integer >= 3")
    c_axis = np.linspace(0.0, p.c, points) if p.c > 0 else np.array([0.0])
    d = np.array([yg_dG2_dT(p.with_c(cc)) for cc in c_axis])
    s0 = ideal_fermi_entropy(p.T, p.n, p.polarization, p.length)
    if c_axis.size == 1:
        return MaxwellResult("entropy", c_axis, np.array([s0]), 0.0, s0, "ideal Fermi gas", np.zeros(1))
    return reconstruct_from_derivative("entropy", c_axis, d, 0.0, s0, anchor_source="ideal Fermi gas at c = 0")


def yg_entropy(p: YangGaudinPoint, route: str = "closed_form", convention: str = "derived", points: int = 41) -> float:
    """Total entropy S = S_IFG + interaction part by either route."""
    if route == "closed_form":
        return ideal_fermi_entropy(p.T, p.n, p.polarization, p.length) + yg_entropy_correction(p, convention)
    if route == "maxwell_numeric":
        return float(yg_entropy_maxwell(p, points).y[-1])
    raise ValueError("route must be 'closed_form' or 'maxwell_numeric'")


# --------------------------------------------------------------------------
# mean field


def meanfield_pressure(c: float, n: float) -> float:
    if c < 0:
        raise ValueError("mean-field pressure is defined for c >= 0")
    return c * n**2


def meanfield_pressure_maxwell(c_axis: Sequence[float], n: float) -> MaxwellResult:
    """Pressure from G2 = V n^2 (so dG2/dV = -n^2 at fixed N), anchored at P(0) = 0."""
    c = np.asarray(c_axis, dtype=float)
    return reconstruct_from_derivative(
        "pressure", c, np.full(c.size, -(n**2)), 0.0, 0.0, anchor_source="non-interacting gas, P(0) = 0"
    )
