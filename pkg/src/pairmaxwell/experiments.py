"""Table builders shared by the command line, the scripts and the acceptance tests.

Each builder returns a :class:`Table`: named float columns plus a metadata
dict of scalars that summarize the comparison (maximum deviations, fitted
exponents and so on).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import analytic, bethe
from .maxwell import (
    KINDS,
    G2Grid,
    GridError,
    MaxwellResult,
    discrete_difference,
    dg2_dhz_limit,
    reconstruct,
    sweep_g2,
)
from .models import ModelSpec, build_model

# absolute floor for deviation / err_est ratios (err_est vanishes at the anchor)
ERR_FLOOR = 1e-12

SYMBOLS = {
    "pressure": "P",
    "entropy": "S",
    "chemical_potential": "mu",
    "heat_capacity": "C_V",
    "inverse_compressibility": "kappa_inv",
}


@dataclass
class Table:
    columns: list
    rows: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.size == 0:
            self.rows = self.rows.reshape(0, len(self.columns))
        if self.rows.shape[1] != len(self.columns):
            raise ValueError(f"{self.rows.shape[1]} values per row for {len(self.columns)} columns")

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def symbol(kind: str, x_name: Optional[str] = None) -> str:
    if kind == "magnetization":
        return "m_x" if x_name == "h_x" else "m_z"
    return SYMBOLS[kind]


# --------------------------------------------------------------------------
# lattice sweeps


def add_noise(grid: G2Grid, sigma: float, seed: int) -> G2Grid:
    """Gaussian noise of width ``sigma`` on every G2 value, from a seeded generator."""
    if sigma == 0:
        return grid
    if sigma < 0:
        raise ValueError("noise sigma must be >= 0")
    rng = np.random.default_rng(seed)
    return grid.with_values(grid.values + rng.normal(0.0, sigma, grid.values.shape))


def direct_values(kind: str, grid: G2Grid, scheme: str = "central") -> np.ndarray:
    """The kind's observable from the direct thermodynamics stored on the grid."""
    if kind not in KINDS:
        raise GridError(f"unknown kind {kind!r}")
    d = grid.direct
    if kind == "entropy":
        return d["S"]
    if kind == "heat_capacity":
        return d["C_V"]
    if kind == "magnetization":
        # raw <S>/L is stored; the Maxwell convention is m = -<S>/L
        return -d["m_x"] if grid.x_name == "h_x" else -d["m_z"]
    F = d["F"].T
    if kind == "chemical_potential":
        return discrete_difference(grid.x_axis, F, 1, scheme).T
    if kind == "pressure":
        return -discrete_difference(grid.x_axis, F, 1, scheme).T
    return (grid.x_axis[:, None] * discrete_difference(grid.x_axis, F, 2)).T


def lattice_reconstruction(
    kind: str,
    grid: G2Grid,
    c0: float,
    anchor="direct",
    *,
    scheme: str = "central",
    smoothing: Optional[tuple] = None,
    x_values: Optional[Sequence[float]] = None,
):
    """Maxwell route against the direct route on a swept grid.

    ``anchor="direct"`` takes Y(c0) from the direct column at c0.  Returns
    (Table, MaxwellResult).  The table holds one row per (c, X) with columns
    c, X, Y_maxwell, Y_direct, err_est, abs_diff.
    """
    direct = direct_values(kind, grid, scheme)
    i0 = int(np.argmin(np.abs(grid.c_axis - c0)))
    if anchor == "direct":
        anchor_val, source = direct[i0], "direct route at c0"
    else:
        anchor_val, source = float(anchor), "user"
    res = reconstruct(kind, grid, c0, anchor_val, scheme=scheme, smoothing=smoothing, anchor_source=source)
    cols = range(grid.x_axis.size) if x_values is None else [grid.x_index(x) for x in x_values]
    rows = []
    for j in cols:
        for i, c in enumerate(grid.c_axis):
            y, yd, e = res.y[i, j], direct[i, j], res.err_est[i, j]
            rows.append((c, grid.x_axis[j], y, yd, e, abs(y - yd)))
    s = symbol(kind, grid.x_name)
    table = Table(["c", grid.x_name, f"{s}_maxwell", f"{s}_direct", "err_est", "abs_diff"], rows)
    diff = table.column("abs_diff")
    err = table.column("err_est")
    # the anchor row carries no quadrature error; a user anchor may differ from the direct value there
    off = table.column("c") != res.c0
    table.meta.update(
        kind=kind,
        c0=float(res.c0),
        anchor_source=source,
        max_abs_diff=float(diff.max()),
        max_err_est=float(err.max()),
        max_diff_over_err=float(np.max(diff[off] / np.maximum(err[off], ERR_FLOOR))) if off.any() else 0.0,
    )
    return table, res


def chemical_potential_table(spec: ModelSpec, c_axis, n_axis, *, T: float = 0.0, threads: int = 1, gap_at: Optional[int] = None):
    """mu(c, N) by both routes with forward unit differences in N.

    The last N of ``n_axis`` only supplies F(N+1); rows cover the others.  When
    ``gap_at`` is given the metadata also reports the gap
    mu(N) - mu(N-1) at N = gap_at and the largest c, from each route.
    """
    grid = sweep_g2(spec, c_axis, "N", n_axis, T=T, threads=threads)
    table, res = lattice_reconstruction("chemical_potential", grid, 0.0, scheme="forward", x_values=grid.x_axis[:-1])
    if gap_at is not None:
        j = grid.x_index(gap_at)
        mu_d = direct_values("chemical_potential", grid, "forward")
        table.meta["gap_direct"] = float(mu_d[-1, j] - mu_d[-1, j - 1])
        table.meta["gap_maxwell"] = float(res.y[-1, j] - res.y[-1, j - 1])
        table.meta["gap_err_est"] = float(res.err_est[-1, j] + res.err_est[-1, j - 1])
    table.meta.update(family=spec.family, sites=spec.sites, T=T)
    return table


def heat_capacity_table(spec: ModelSpec, c_target: float, *, points: int = 41, T_axis=None, window=(0.1, 3.0)):
    """C_V at c_target from -T int d^2G2/dT^2 dc' anchored at c = 0, against the energy variance."""
    T_axis = np.round(np.arange(0.04, 3.3 + 1e-9, 0.02), 10) if T_axis is None else np.asarray(T_axis, float)
    c_axis = np.linspace(c_target, 0.0, points) if c_target < 0 else np.linspace(0.0, c_target, points)
    grid = sweep_g2(spec, c_axis, "T", T_axis)
    i0 = int(np.flatnonzero(grid.c_axis == 0.0)[0])
    it = int(np.argmin(np.abs(grid.c_axis - c_target)))
    res = reconstruct("heat_capacity", grid, 0.0, grid.direct["C_V"][i0], anchor_source="energy variance at c = 0")
    cm, cd, err = res.y[it], grid.direct["C_V"][it], res.err_est[it]
    keep = (T_axis >= window[0] - 1e-12) & (T_axis <= window[1] + 1e-12)
    rel = np.abs(cm - cd) / np.abs(cd)
    T_peak = float(T_axis[keep][np.argmax(cd[keep])])
    near = np.abs(T_axis - T_peak) < 0.25 * T_peak
    rows = np.column_stack([T_axis, cm, cd, err, rel, near.astype(float)])[keep]
    table = Table(["T", "C_V_maxwell", "C_V_direct", "err_est", "rel_diff", "near_peak"], rows)
    table.meta.update(
        c=float(grid.c_axis[it]),
        T_peak=T_peak,
        max_rel_away=float(rel[keep & ~near].max()),
        max_rel_near=float(rel[keep & near].max()),
    )
    return table


# --------------------------------------------------------------------------
# transverse-field Ising


def tfim_magnetization_table(sites: int = 12, *, h_x: float = 1.0, T: float = 0.02, c_axis=None,
                             boundary: str = "periodic", dh: float = 0.01, n_states: int = 16, threads: int = 1):
    """m_x(c) from three routes: exact-integral Maxwell, ED Maxwell and ED direct."""
    c_axis = np.linspace(-4.0, 0.0, 41) if c_axis is None else np.asarray(c_axis, float)
    spec = ModelSpec("tfim", sites, h_x=h_x, boundary=boundary)
    hx_axis = h_x + dh * np.arange(-2, 3)
    grid = sweep_g2(spec, c_axis, "h_x", hx_axis, T=T, method="lowest", n_states=n_states, threads=threads)
    table, _ = lattice_reconstruction("magnetization", grid, 0.0, 0.5, x_values=[h_x])
    exact = analytic.tfim_mx_maxwell(h_x, c_axis)
    ed_m, ed_d = table.column("m_x_maxwell"), table.column("m_x_direct")
    rows = np.column_stack([c_axis, np.abs(c_axis) / (2 * h_x), exact.y, ed_m, ed_d, table.column("err_est")])
    out = Table(["c", "lam", "m_x_exact_maxwell", "m_x_ed_maxwell", "m_x_ed_direct", "err_est"], rows)
    out.meta.update(
        sites=sites,
        T=T,
        boundary=boundary,
        max_exact_vs_direct=float(np.max(np.abs(exact.y - ed_d))),
        max_ed_maxwell_vs_direct=float(np.max(np.abs(ed_m - ed_d))),
    )
    return out


def lambda_anomaly_table(sites: int = 12, *, h_x: float = 1.0, lam_axis=None, T: float = 0.0,
                         rel_delta: float = 1e-2, boundary: str = "periodic", n_states: int = 8):
    """Per-site dG2/dh_z at h_z -> 0+ across the transition (ED)."""
    lam_axis = np.round(np.arange(0.5, 2.0 + 1e-9, 0.05), 10) if lam_axis is None else np.asarray(lam_axis, float)
    spec = ModelSpec("tfim", sites, h_x=h_x, boundary=boundary)
    ops = build_model(spec)
    vals = np.array(
        [dg2_dhz_limit(spec, -2 * h_x * lam, T=T, rel_delta=rel_delta, n_states=n_states, ops=ops) for lam in lam_axis]
    ) / sites
    i = int(np.argmax(np.abs(vals)))
    t = Table(["lam", "c", "dG2_dhz_per_site"], np.column_stack([lam_axis, -2 * h_x * lam_axis, vals]))
    t.meta.update(sites=sites, T=T, boundary=boundary, rel_delta=rel_delta, peak_lam=float(lam_axis[i]))
    return t


def mz_identity_table(ratio_axis=None, h_x: float = 1.0, rel_step: float = 1e-4):
    """d m_z/d ratio by finite difference of the printed formula against exp(critical_log_derivative)."""
    # ratio - 1 log-spaced on [1e-6, 1]: the identity is tested up to the critical point
    rho = 1.0 + np.geomspace(1e-6, 1.0, 40) if ratio_axis is None else np.asarray(ratio_axis, float)
    fd = []
    for r in rho:
        d = rel_step * (r - 1.0)
        up = analytic.tfim_mz_exact(analytic.TfimPoint(-(r + d) * h_x, h_x))
        dn = analytic.tfim_mz_exact(analytic.TfimPoint(-(r - d) * h_x, h_x))
        fd.append((up - dn) / (2 * d))
    fd = np.array(fd)
    ident = np.exp(analytic.critical_log_derivative(rho))
    rel = np.abs(fd - ident) / ident
    mz = [analytic.tfim_mz_exact(analytic.TfimPoint(-r * h_x, h_x)) for r in rho]
    t = Table(["ratio", "m_z_printed", "dmz_dratio_fd", "exp_log_derivative", "rel_diff"],
              np.column_stack([rho, mz, fd, ident, rel]))
    t.meta["max_rel_diff"] = float(rel.max())
    return t


def tfim_exact_table(h_x: float = 1.0, c_axis=None):
    """Exact T = 0 per-site quantities on a c axis that must contain 0."""
    c_axis = np.linspace(-4.0, 0.0, 81) if c_axis is None else np.asarray(c_axis, float)
    mx = analytic.tfim_mx_maxwell(h_x, c_axis)
    rows = []
    for i, c in enumerate(c_axis):
        p = analytic.TfimPoint(float(c), h_x)
        rows.append(
            (
                c,
                p.lam,
                analytic.tfim_g2_exact(p),
                analytic.tfim_dg2_dhx(p),
                analytic.tfim_mx_exact(p),
                mx.y[i],
                mx.err_est[i],
                analytic.tfim_mz_exact(p, "printed"),
                analytic.tfim_mz_exact(p, "spin_half"),
            )
        )
    cols = ["c", "lam", "G2", "dG2_dhx", "m_x_exact", "m_x_maxwell", "err_est", "m_z_printed", "m_z_spin_half"]
    t = Table(cols, rows)
    t.meta["max_mx_route_diff"] = float(np.max(np.abs(t.column("m_x_exact") - t.column("m_x_maxwell"))))
    return t


def critical_fit_table(h_x: float = 1.0, lo: float = 1e-8, hi: float = 0.05, points: int = 20):
    rho = analytic.default_critical_axis(lo, hi, points)
    beta, diag = analytic.critical_exponent_fit(h_x, rho)
    y = analytic.critical_log_derivative(rho) - math.log(h_x)
    t = Table(["ratio", "log_ratio_minus_1", "log_minus_dG2_dh"], np.column_stack([rho, np.log(rho - 1), y]))
    t.meta.update(beta=beta, **diag)
    return t


# --------------------------------------------------------------------------
# continuum gases


def bethe_table(n: float = 1.0, gamma_axis=None, nodes: int = bethe.DEFAULT_NODES, max_step: float = 0.02):
    """Lieb-Liniger columns; the Maxwell columns are NaN below gamma = 1."""
    gam = np.geomspace(1.0, 100.0, 50) if gamma_axis is None else np.asarray(gamma_axis, float)
    strong = gam[gam >= 1.0]
    p_m = {}
    k_m = {}
    if strong.size:
        pr = bethe.pressure_maxwell(n, strong, nodes, max_step)
        kr = bethe.inverse_compressibility(n, strong, "maxwell", nodes, max_step)
        for c, p, k in zip(pr.c_axis, pr.y, kr.y):
            p_m[round(2 * c / n, 12)] = p
            k_m[round(2 * c / n, 12)] = k
    rows = []
    for g in gam:
        sol = bethe.solve_lieb_equation(g, nodes)
        key = round(float(g), 12)
        rows.append(
            (
                g,
                sol.e,
                sol.de_dgamma,
                bethe.pressure_direct(n, g, nodes),
                p_m.get(key, math.nan),
                bethe.inverse_compressibility(n, g, "direct", nodes),
                k_m.get(key, math.nan),
            )
        )
    cols = ["gamma", "e", "de_dgamma", "P_direct", "P_maxwell", "kappa_inv_direct", "kappa_inv_maxwell"]
    t = Table(cols, rows)
    ok = ~np.isnan(t.column("P_maxwell"))
    if ok.any():
        t.meta["max_rel_P"] = float(np.max(np.abs(t.column("P_maxwell") / t.column("P_direct") - 1)[ok]))
        t.meta["max_rel_kappa_inv"] = float(
            np.max(np.abs(t.column("kappa_inv_maxwell") / t.column("kappa_inv_direct") - 1)[ok])
        )
    t.meta["n"] = n
    return t


def yang_gaudin_table(gamma_axis=None, tau_axis=None, polarization: float = 0.0, n: float = 1.0, points: int = 41):
    """Entropy of the high-temperature Yang-Gaudin gas (per particle, N = 1) by both routes."""
    gam = np.array([0.05, 0.1, 0.2]) if gamma_axis is None else np.asarray(gamma_axis, float)
    tau = np.array([50.0, 100.0]) if tau_axis is None else np.asarray(tau_axis, float)
    rows = []
    for t_ in tau:
        for g in gam:
            p = analytic.YangGaudinPoint(float(g), float(t_), polarization, n)
            s_ifg = analytic.ideal_fermi_entropy(p.T, p.n, p.polarization, p.length)
            s_cf = analytic.yg_entropy(p, "closed_form")
            s_mx = analytic.yg_entropy(p, "maxwell_numeric", points=points)
            rows.append(
                (g, t_, analytic.yg_g2(p), analytic.yg_contact(p) if g > 0 else 0.0, s_ifg, s_cf, s_mx,
                 s_cf - s_ifg, s_mx - s_ifg, analytic.yg_entropy_correction(p, "printed"), float(p.high_temperature))
            )
    cols = ["gamma", "tau", "g2", "contact", "S_ifg", "S_closed_form", "S_maxwell",
            "dS_closed_form", "dS_maxwell", "dS_printed", "high_temperature"]
    t = Table(cols, rows)
    t.meta["max_rel_S"] = float(np.max(np.abs(t.column("S_maxwell") / t.column("S_closed_form") - 1)))
    dc = t.column("dS_closed_form")
    nz = dc != 0
    if nz.any():
        t.meta["max_rel_correction"] = float(np.max(np.abs(t.column("dS_maxwell")[nz] / dc[nz] - 1)))
    t.meta["polarization"] = polarization
    return t
