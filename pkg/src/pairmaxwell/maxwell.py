"""Generalized Maxwell relations on tabulated pair correlations.

Every relation has the integral form

    Y(c) = Y(c0) + sign * pref(X) * integral_{c0}^{c} d^k G2 / dX^k  dc'

with (axis, k, sign, pref) per kind:

=======================  =====  =  ====  ===========
kind                     axis   k  sign  pref
=======================  =====  =  ====  ===========
pressure                 V      1  -1    1
entropy                  T      1  -1    1
chemical_potential       N      1  +1    1
magnetization            h_*    1  -1    1 / V
heat_capacity            T      2  -1    T
inverse_compressibility  V      2  +1    V
=======================  =====  =  ====  ===========

Magnetization is per site with m = -(1/V) dF/dh, so a field coupling as
``+h sum_j S_j`` gives m = -<S_j>.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.signal import savgol_filter

from .models import ModelSpec, build_model
from .statmech import solve_model, thermo_at

CONTINUOUS_AXES = ("T", "h_x", "h_z")
DISCRETE_AXES = ("N", "V")
AXES = CONTINUOUS_AXES + DISCRETE_AXES
DIRECT_FIELDS = ("F", "U", "S", "C_V", "m_x", "m_z")
MAX_GRID_POINTS = 200_000


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class KindRule:
    axes: tuple
    order: int
    sign: float
    prefactor: str  # "one", "x" or "inv_volume"


KINDS = {
    "pressure": KindRule(("V",), 1, -1.0, "one"),
    "entropy": KindRule(("T",), 1, -1.0, "one"),
    "chemical_potential": KindRule(("N",), 1, +1.0, "one"),
    "magnetization": KindRule(("h_x", "h_z"), 1, -1.0, "inv_volume"),
    "heat_capacity": KindRule(("T",), 2, -1.0, "x"),
    "inverse_compressibility": KindRule(("V",), 2, +1.0, "x"),
}


def _strictly_increasing(name, a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise GridError(f"axis {name!r} must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(a)):
        raise GridError(f"axis {name!r} has non-finite entries")
    if a.size > 1 and np.any(np.diff(a) <= 0):
        raise GridError(f"axis {name!r} must be strictly increasing")
    return a


@dataclass(frozen=True, eq=False)
class G2Grid:
    """G2 over (c, X).  ``values[i, j]`` is taken at ``c_axis[i]`` and ``x_axis[j]``.

    ``direct`` optionally holds the thermodynamics computed at the same points
    (F, U, S, C_V and magnetizations), which the cross-route checks use.
    ``derivative`` records which X-derivative the table holds (0 for G2 itself).
    """

    c_axis: np.ndarray
    x_name: str
    x_axis: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)
    direct: dict = field(default_factory=dict)
    derivative: int = 0

    def __post_init__(self):
        c = _strictly_increasing("c", self.c_axis)
        if self.x_name not in AXES:
            raise GridError(f"x axis name must be one of {AXES}, got {self.x_name!r}")
        x = _strictly_increasing(self.x_name, self.x_axis)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (c.size, x.size):
            raise GridError(f"values shape {v.shape} does not match axes ({c.size}, {x.size})")
        if not np.all(np.isfinite(v)):
            bad = np.argwhere(~np.isfinite(v))[0]
            raise GridError(f"non-finite value at c={c[bad[0]]}, {self.x_name}={x[bad[1]]}")
        object.__setattr__(self, "c_axis", c)
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape

    def column(self, x: float) -> np.ndarray:
        return self.values[:, self.x_index(x)]

    def x_index(self, x: float) -> int:
        j = np.flatnonzero(np.isclose(self.x_axis, x, rtol=0, atol=1e-12 * max(1.0, abs(x))))
        if j.size == 0:
            raise GridError(f"{self.x_name}={x} is not on the grid")
        return int(j[0])

    def with_values(self, values, derivative=None, direct=None) -> "G2Grid":
        return G2Grid(
            self.c_axis,
            self.x_name,
            self.x_axis,
            values,
            dict(self.metadata),
            self.direct if direct is None else direct,
            self.derivative if derivative is None else derivative,
        )

    def to_dict(self) -> dict:
        return {
            "c_axis": self.c_axis.tolist(),
            "x_name": self.x_name,
            "x_axis": self.x_axis.tolist(),
            "values": self.values.tolist(),
            "derivative": self.derivative,
            "metadata": self.metadata,
            "direct": {k: np.asarray(v).tolist() for k, v in self.direct.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "G2Grid":
        return cls(
            np.array(d["c_axis"], float),
            d["x_name"],
            np.array(d["x_axis"], float),
            np.array(d["values"], float),
            dict(d.get("metadata", {})),
            {k: np.array(v, float) for k, v in d.get("direct", {}).items()},
            int(d.get("derivative", 0)),
        )


@dataclass(frozen=True, eq=False)
class MaxwellResult:
    """Reconstructed Y(c).  ``y`` and ``err_est`` have shape (len(c_axis),) or
    (len(c_axis), len(x_axis)) when the relation was applied column by column."""

    kind: str
    c_axis: np.ndarray
    y: np.ndarray
    c0: float
    y_anchor: Union[float, np.ndarray]
    anchor_source: str
    err_est: np.ndarray
    x_name: Optional[str] = None
    x_axis: Optional[np.ndarray] = None
    integrand: Optional[np.ndarray] = None
    volume: Optional[float] = None

    def at_x(self, x: float) -> np.ndarray:
        if self.y.ndim == 1:
            return self.y
        j = int(np.argmin(np.abs(self.x_axis - x)))
        if not np.isclose(self.x_axis[j], x, rtol=0, atol=1e-12 * max(1.0, abs(x))):
            raise GridError(f"{self.x_name}={x} is not on the result grid")
        return self.y[:, j]

    def err_at_x(self, x: float) -> np.ndarray:
        if self.err_est.ndim == 1:
            return self.err_est
        j = int(np.argmin(np.abs(self.x_axis - x)))
        return self.err_est[:, j]

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "c0": self.c0,
            "anchor_source": self.anchor_source,
            "y_anchor": np.asarray(self.y_anchor).tolist(),
            "c_axis": self.c_axis.tolist(),
            "y": self.y.tolist(),
            "err_est": self.err_est.tolist(),
        }
        if self.x_name is not None:
            out["x_name"] = self.x_name
            out["x_axis"] = np.asarray(self.x_axis).tolist()
        return out


# --------------------------------------------------------------------------
# sweeps

def _spec_at(template: ModelSpec, name: str, x: float) -> ModelSpec:
    if name in ("T",):
        return template
    if name in ("h_x", "h_z"):
        return template.with_(**{name: float(x)})
    if abs(x - round(x)) > 1e-12:
        raise GridError(f"discrete axis {name!r} needs integer values, got {x}")
    x = int(round(x))
    if name == "V":
        return template.with_(sites=x)
    if template.family == "fermi_hubbard":
        return template.with_(n_particles=x, n_up=None, n_down=None)
    return template.with_(n_particles=x)


def sweep_g2(
    template: ModelSpec,
    c_axis: Sequence[float],
    x_name: str,
    x_axis: Sequence[float],
    *,
    T: float = 0.0,
    threads: int = 1,
    method: str = "dense",
    n_states: Optional[int] = None,
) -> G2Grid:
    """Thermal G2 on the (c, X) grid, plus direct thermodynamics at the same points.

    For ``x_name="T"`` the spectrum at each c is reused for all temperatures;
    otherwise ``T`` fixes the temperature.  Along ``N`` the Fermi-Hubbard
    sector is the total-N sector (summed over magnetization).  Work is split
    into independent (c, X) tasks and reassembled in grid order, so the result
    does not depend on ``threads``.
    """
    c = _strictly_increasing("c", c_axis)
    if x_name not in AXES:
        raise GridError(f"x axis must be one of {AXES}, got {x_name!r}")
    x = _strictly_increasing(x_name, x_axis)
    if c.size * x.size > MAX_GRID_POINTS:
        raise GridError(f"grid of {c.size}x{x.size} points exceeds budget {MAX_GRID_POINTS}")
    if T < 0:
        raise GridError("temperature must be >= 0")
    if x_name == "T" and np.any(x < 0):
        raise GridError("temperature axis must be >= 0")

    x_points = [None] if x_name == "T" else list(x)
    ops_cache = {}
    for xv in x_points:
        spec = template if xv is None else _spec_at(template, x_name, xv)
        ops_cache[xv] = (spec, build_model(spec))

    def task(args):
        i, xv = args
        spec, ops = ops_cache[xv]
        try:
            bundle = solve_model(spec, c[i], ops=ops, method=method, n_states=n_states)
            temps = x if xv is None else [T]
            return [thermo_at(bundle, float(t)) for t in temps]
        except Exception as exc:  # surface the failing coordinates
            where = f"c={c[i]}" + ("" if xv is None else f", {x_name}={xv}")
            raise GridError(f"G2 evaluation failed at {where}: {exc}") from exc

    tasks = list(itertools.product(range(c.size), x_points))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(task, tasks))
    else:
        results = [task(t) for t in tasks]

    values = np.empty((c.size, x.size))
    direct = {k: np.full((c.size, x.size), np.nan) for k in DIRECT_FIELDS}
    for (i, xv), states in zip(tasks, results):
        cols = range(x.size) if xv is None else [x_points.index(xv)]
        for j, st in zip(cols, states):
            values[i, j] = st.G2
            for k in DIRECT_FIELDS:
                v = getattr(st, k)
                if v is not None:
                    direct[k][i, j] = v
    direct = {k: v for k, v in direct.items() if not np.all(np.isnan(v))}
    meta = {"model": template.to_dict(), "T": None if x_name == "T" else float(T), "method": method}
    return G2Grid(c, x_name, x, values, meta, direct)


# --------------------------------------------------------------------------
# differentiation

def fd_weights(x0: float, nodes: Sequence[float], order: int) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at ``x0`` (Fornberg 1988)."""
    z = np.asarray(nodes, dtype=float)
    n = z.size - 1
    if order > n:
        raise ValueError(f"{z.size} nodes cannot resolve derivative order {order}")
    c = np.zeros((n + 1, order + 1))
    c1, c4 = 1.0, z[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n + 1):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, z[i] - x0
        for j in range(i):
            c3 = z[i] - z[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def derivative_1d(x: np.ndarray, y: np.ndarray, order: int) -> np.ndarray:
    """Second-order accurate derivative along axis 0 of ``y`` on a (possibly uneven) grid ``x``.

    Centred three-point stencils inside; one-sided stencils at the ends
    (three points for the first derivative, four for the second).
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = x.size
    need = 3 if order == 1 else 5
    if n < need:
        raise GridError(f"order-{order} derivative needs at least {need} points, got {n}")
    out = np.empty_like(y)
    edge = 3 if order == 1 else 4
    for i in range(n):
        if 0 < i < n - 1:
            idx = np.arange(i - 1, i + 2)
        elif i == 0:
            idx = np.arange(0, edge)
        else:
            idx = np.arange(n - edge, n)
        w = fd_weights(x[i], x[idx], order)
        out[i] = np.tensordot(w, y[idx], axes=(0, 0))
    return out


def derivative_error_1d(x: np.ndarray, y: np.ndarray, order: int) -> np.ndarray:
    """Embedded error estimate for :func:`derivative_1d`: its value minus the
    derivative from the five nearest nodes (zeros when the axis is too short)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = x.size
    if n < 5:
        return np.zeros_like(y)
    base = derivative_1d(x, y, order)
    wide = np.empty_like(y)
    for i in range(n):
        lo = min(max(i - 2, 0), n - 5)
        idx = np.arange(lo, lo + 5)
        wide[i] = np.tensordot(fd_weights(x[i], x[idx], order), y[idx], axes=(0, 0))
    return np.abs(base - wide)


def discrete_difference(x: np.ndarray, y: np.ndarray, order: int, scheme: str = "central") -> np.ndarray:
    """Unit differences along an integer axis (axis 0 of ``y``).

    ``central`` uses [y(N+1) - y(N-1)]/2 where both neighbours exist and a
    one-sided difference at the ends; ``forward`` uses y(N+1) - y(N) (backward
    at the last point); ``backward`` the mirror image.  Order 2 is the
    three-point second difference, shifted inwards at the ends.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = x.size
    if n < 2 or (order == 2 and n < 3):
        raise GridError(f"order-{order} discrete difference needs more than {n} points")
    if np.any(np.abs(np.diff(x) - 1.0) > 1e-12):
        raise GridError("discrete axes must be consecutive integers")
    out = np.empty_like(y)
    if order == 2:
        for i in range(n):
            k = min(max(i, 1), n - 2)
            out[i] = y[k + 1] - 2 * y[k] + y[k - 1]
        return out
    fwd = np.diff(y, axis=0)
    if scheme == "forward":
        out[:-1] = fwd
        out[-1] = fwd[-1]
    elif scheme == "backward":
        out[1:] = fwd
        out[0] = fwd[0]
    elif scheme == "central":
        out[1:-1] = 0.5 * (fwd[1:] + fwd[:-1])
        out[0] = fwd[0]
        out[-1] = fwd[-1]
    else:
        raise ValueError(f"scheme must be central, forward or backward, got {scheme!r}")
    return out


def differentiate(grid: G2Grid, axis_name: Optional[str] = None, order: int = 1, scheme: str = "central") -> G2Grid:
    """X-derivative of a G2 table, same axes.  ``scheme`` only affects discrete axes."""
    axis_name = grid.x_name if axis_name is None else axis_name
    if axis_name != grid.x_name:
        raise GridError(f"grid has x axis {grid.x_name!r}, cannot differentiate along {axis_name!r}")
    if order not in (1, 2):
        raise GridError("order must be 1 or 2")
    vt = grid.values.T
    if axis_name in DISCRETE_AXES:
        d = discrete_difference(grid.x_axis, vt, order, scheme)
    else:
        d = derivative_1d(grid.x_axis, vt, order)
    return grid.with_values(d.T, derivative=grid.derivative + order)


def savgol(series: Sequence[float], window: int, poly_order: int) -> np.ndarray:
    """Savitzky-Golay smoothing; the ends use the polynomial fitted to the edge window."""
    y = np.asarray(series, dtype=float)
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be a positive odd integer, got {window}")
    if poly_order < 0 or poly_order >= window:
        raise ValueError(f"poly_order must satisfy 0 <= poly_order < window, got {poly_order}")
    if window > y.size:
        raise ValueError(f"window {window} is longer than the series ({y.size})")
    return savgol_filter(y, window, poly_order, mode="interp")


def smooth_grid(grid: G2Grid, window: int, poly_order: int, axis_name: Optional[str] = None) -> G2Grid:
    """Apply :func:`savgol` along X (default) or c."""
    axis_name = grid.x_name if axis_name is None else axis_name
    if axis_name == "c":
        v = np.column_stack([savgol(col, window, poly_order) for col in grid.values.T])
    elif axis_name == grid.x_name:
        v = np.vstack([savgol(row, window, poly_order) for row in grid.values])
    else:
        raise GridError(f"cannot smooth along {axis_name!r}")
    return grid.with_values(v)


# --------------------------------------------------------------------------
# quadrature

def _cumulative_one_side(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Cumulative integral from x[0] along axis 0; Simpson, trapezoid for two points."""
    if x.size == 1:
        return np.zeros_like(f)
    if x.size == 2:
        return np.concatenate([np.zeros_like(f[:1]), 0.5 * (x[1] - x[0]) * (f[:1] + f[1:])])
    if x[1] < x[0]:
        return -cumulative_simpson(f, x=-x, axis=0, initial=0)
    return cumulative_simpson(f, x=x, axis=0, initial=0)


def _one_side_error(x: np.ndarray, f: np.ndarray, fine: np.ndarray) -> np.ndarray:
    n = x.size
    err = np.zeros_like(fine)
    if n == 1:
        return err
    if n == 2:
        # no coarser grid: difference of the two one-point rules
        err[1] = 0.5 * abs(x[1] - x[0]) * np.abs(f[1] - f[0])
        return err
    ci = np.arange(0, n, 2)
    coarse = _cumulative_one_side(x[ci], f[ci])
    # panel-wise Richardson terms, summed outwards so the bound grows with |c - c0|
    local = np.abs(np.diff(fine[ci] - coarse, axis=0)) / 15.0
    err[ci[1:]] = np.cumsum(local, axis=0)
    for i in range(1, n, 2):
        outer = err[i + 1] if i + 1 < n else err[i - 1]
        err[i] = np.maximum(outer, err[i - 1]) + _odd_interval_error(x, f, fine, i)
    return err


def _odd_interval_error(x, f, fine, i):
    """|Simpson sub-interval - cubic-through-4-nodes| over [x[i-1], x[i]].

    The cumulative value at an odd node carries an uncancelled local O(h^4)
    term; the cubic rule brackets it.
    """
    n = x.size
    if n < 4:
        trap = 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1])
        return np.abs(fine[i] - fine[i - 1] - trap)
    lo = min(max(i - 2, 0), n - 4)
    idx = np.arange(lo, lo + 4)
    scale = x[i] - x[i - 1]
    t = (x[idx] - x[i - 1]) / scale
    coef = np.polynomial.polynomial.polyfit(t, f[idx], 3)
    powers = 1.0 / np.arange(1, 5)
    cubic = scale * np.tensordot(powers, coef, axes=(0, 0))
    return np.abs(fine[i] - fine[i - 1] - cubic)


def _interval_references(c: np.ndarray, f: np.ndarray, deg: int = 5) -> np.ndarray:
    """Integral over every [c[j], c[j+1]] of the interpolant of degree <= ``deg``
    through the nearest nodes of the whole grid (both sides of any anchor)."""
    n = c.size
    m = min(deg + 1, n)
    mom = 1.0 / np.arange(1, m + 1)
    out = np.empty((n - 1,) + f.shape[1:])
    for j in range(n - 1):
        lo = min(max(j - (m - 2) // 2, 0), n - m)
        idx = np.arange(lo, lo + m)
        h = c[j + 1] - c[j]
        V = np.vander((c[idx] - c[j]) / h, m, increasing=True)
        w = np.linalg.solve(V.T, mom) * h
        out[j] = np.tensordot(w, f[idx], axes=(0, 0))
    return out


def _bracket_one_side(I: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Accumulated |Simpson panel - reference| outwards from I[0]; odd nodes add
    their last half-panel."""
    err = np.zeros_like(I)
    dI = np.diff(I, axis=0)
    acc = np.zeros_like(I[0])
    for p in range(0, I.shape[0] - 1, 2):
        err[p + 1] = acc + np.abs(dI[p] - R[p])
        if p + 2 < I.shape[0]:
            acc = acc + np.abs(dI[p] + dI[p + 1] - R[p] - R[p + 1])
            err[p + 2] = acc
    return err


def cumulative_from_anchor(c: np.ndarray, f: np.ndarray, i0: int):
    """Integral of ``f`` from ``c[i0]`` to every ``c[i]`` and an error estimate.

    Two estimates are combined by taking the larger.  The Richardson one
    compares the grid with its every-other-node subgrid counted from the
    anchor and accumulates |d(I_h - I_2h)| / 15 per coarse panel.  The
    bracket one accumulates, panel by panel, the distance between Simpson
    and a degree-5 local interpolant on the full grid; it stays honest next
    to the anchor, where a single Richardson term can vanish by accident.
    Both are floored by the rounding error of the sum.
    """
    c = np.asarray(c, float)
    f = np.asarray(f, float)
    out = np.zeros_like(f)
    err = np.zeros_like(f)
    right = slice(i0, None)
    xr, fr = c[right], f[right]
    Ir = _cumulative_one_side(xr, fr)
    out[right] = Ir
    err[right] = _one_side_error(xr, fr, Ir)
    xl, fl = c[: i0 + 1][::-1], f[: i0 + 1][::-1]
    Il = _cumulative_one_side(xl, fl)
    out[: i0 + 1] = Il[::-1]
    err[: i0 + 1] = _one_side_error(xl, fl, Il)[::-1]
    out[i0] = 0.0
    err[i0] = 0.0

    if c.size > 2:
        R = _interval_references(c, f)
        bracket = np.zeros_like(err)
        bracket[i0:] = _bracket_one_side(out[i0:], R[i0:])
        # integrals taken towards smaller c carry the opposite sign
        bracket[: i0 + 1] = _bracket_one_side(out[: i0 + 1][::-1], -R[:i0][::-1])[::-1]
        err = np.maximum(err, bracket)

    if c.size > 1:
        dc = np.abs(np.diff(c)).reshape((-1,) + (1,) * (f.ndim - 1))
        inc = 0.5 * dc * (np.abs(f[1:]) + np.abs(f[:-1]))
        mass = np.zeros_like(f)
        mass[i0 + 1 :] = np.cumsum(inc[i0:], axis=0)
        mass[:i0] = np.cumsum(inc[:i0][::-1], axis=0)[::-1]
        err = np.maximum(err, 64 * np.finfo(float).eps * mass)
    return out, err


def _abs_cumulative(c, e, i0):
    """Trapezoid integral of a nonnegative function outwards from c[i0]."""
    out = np.zeros_like(e)
    if c.size > 1:
        dc = np.abs(np.diff(c)).reshape((-1,) + (1,) * (e.ndim - 1))
        inc = 0.5 * dc * (e[1:] + e[:-1])
        out[i0 + 1 :] = np.cumsum(inc[i0:], axis=0)
        out[:i0] = np.cumsum(inc[:i0][::-1], axis=0)[::-1]
    return out


def _anchor_index(c: np.ndarray, c0: float) -> int:
    i = np.flatnonzero(np.isclose(c, c0, rtol=0, atol=1e-12 * max(1.0, abs(c0))))
    if i.size == 0:
        raise GridError(f"anchor c0={c0} is not a point of the c axis")
    return int(i[0])


def _prefactor(rule: KindRule, x_axis, volume):
    if rule.prefactor == "one":
        return 1.0
    if rule.prefactor == "x":
        return np.asarray(x_axis, float)
    if volume is None:
        raise GridError("magnetization needs the system size (volume) to normalize per site")
    return 1.0 / float(volume)


def reconstruct_from_derivative(
    kind: str,
    c_axis: Sequence[float],
    dg2: np.ndarray,
    c0: float,
    anchor,
    *,
    x_name: Optional[str] = None,
    x_axis: Optional[Sequence[float]] = None,
    volume: Optional[float] = None,
    anchor_source: str = "user",
    dg2_err: Optional[np.ndarray] = None,
) -> MaxwellResult:
    """Integrate a precomputed X-derivative of G2 over c for the given kind.

    ``dg2`` has shape (len(c),) or (len(c), len(x_axis)); the prefactor of
    heat capacity and inverse compressibility uses ``x_axis`` (T or V), or
    a scalar ``x_axis`` value for 1-D input.  ``dg2_err`` (same shape as
    ``dg2``) is an uncertainty of the integrand; its integrated magnitude is
    added to the quadrature estimate.
    """
    if kind not in KINDS:
        raise GridError(f"unknown kind {kind!r}; expected one of {sorted(KINDS)}")
    rule = KINDS[kind]
    c = _strictly_increasing("c", c_axis)
    d = np.asarray(dg2, float)
    if d.shape[0] != c.size:
        raise GridError(f"integrand has {d.shape[0]} rows for {c.size} c points")
    i0 = _anchor_index(c, c0)
    pref = _prefactor(rule, x_axis, volume)
    if rule.prefactor == "x" and np.ndim(pref) == 1 and d.ndim == 1:
        raise GridError("1-D integrand needs a scalar x_axis for the prefactor")
    integral, err = cumulative_from_anchor(c, d, i0)
    if dg2_err is not None:
        e = np.abs(np.asarray(dg2_err, float))
        if e.shape != d.shape:
            raise GridError("dg2_err must have the shape of dg2")
        err = err + _abs_cumulative(c, e, i0)
    anchor_arr = np.broadcast_to(np.asarray(anchor, float), d.shape[1:]) if d.ndim > 1 else float(anchor)
    y = anchor_arr + rule.sign * pref * integral
    y[i0] = anchor_arr
    err = np.abs(pref) * err
    return MaxwellResult(
        kind,
        c,
        y,
        float(c[i0]),
        anchor_arr if d.ndim > 1 else float(anchor_arr),
        anchor_source,
        err,
        x_name,
        None if x_axis is None else np.atleast_1d(np.asarray(x_axis, float)),
        d,
        None if volume is None else float(volume),
    )


def reconstruct(
    kind: str,
    grid: G2Grid,
    c0: float,
    anchor,
    *,
    scheme: Optional[str] = None,
    volume: Optional[float] = None,
    smoothing: Optional[tuple] = None,
    anchor_source: str = "user",
) -> MaxwellResult:
    """Y(c) from a G2 grid via the Maxwell relation of ``kind`` (see module table).

    ``anchor`` is Y(c0), a scalar or one value per X column.  ``scheme``
    chooses the discrete-axis difference (default central); ``smoothing``
    ``(window, poly_order)`` applies Savitzky-Golay along X before
    differentiating.  For magnetization the per-site volume defaults to the
    grid's model size.  On continuous axes with five or more points the
    error estimate also carries the finite-difference error of the
    X-derivative.
    """
    if kind not in KINDS:
        raise GridError(f"unknown kind {kind!r}; expected one of {sorted(KINDS)}")
    rule = KINDS[kind]
    if grid.x_name not in rule.axes:
        raise GridError(f"{kind} needs an X axis in {rule.axes}, grid has {grid.x_name!r}")
    if grid.derivative != 0:
        raise GridError("reconstruct expects a G2 grid, not a derivative table")
    if smoothing is not None:
        grid = smooth_grid(grid, *smoothing)
    d = differentiate(grid, grid.x_name, rule.order, scheme or "central")
    d_err = None
    if grid.x_name in CONTINUOUS_AXES:
        d_err = derivative_error_1d(grid.x_axis, grid.values.T, rule.order).T
    if volume is None and rule.prefactor == "inv_volume":
        volume = grid.metadata.get("model", {}).get("sites")
    return reconstruct_from_derivative(
        kind,
        grid.c_axis,
        d.values,
        c0,
        anchor,
        x_name=grid.x_name,
        x_axis=grid.x_axis,
        volume=volume,
        anchor_source=anchor_source,
        dg2_err=d_err,
    )


def reanchor(result: MaxwellResult, c1: float) -> MaxwellResult:
    """Re-integrate the stored integrand from a new anchor c1 using the result's own value there."""
    i1 = _anchor_index(result.c_axis, c1)
    x = result.x_axis
    if x is not None and result.integrand.ndim == 1:
        x = float(x[0])
    return reconstruct_from_derivative(
        result.kind,
        result.c_axis,
        result.integrand,
        c1,
        result.y[i1],
        x_name=result.x_name,
        x_axis=x,
        volume=result.volume,
        anchor_source=f"reanchored from c0={result.c0}",
    )


def dg2_dhz_limit(
    template: ModelSpec,
    c: float,
    *,
    T: float = 0.0,
    rel_delta: float = 1e-2,
    method: str = "lowest",
    n_states: Optional[int] = 8,
    ops=None,
) -> float:
    """Symmetry-broken dG2/dh_z at h_z -> 0+ for the transverse-field Ising chain.

    G2 is even in h_z on a finite chain, so the centred derivative vanishes.
    The ordered-phase response is the one-sided limit from h_z > 0: with
    D(d) = [G2(d) - G2(0)] / d, return the Richardson combination
    2 D(delta) - D(2 delta), delta = rel_delta * |c|.  By the Z2 symmetry the
    points -delta, -2 delta carry the same values and add nothing.
    """
    if template.family != "tfim":
        raise GridError("the longitudinal field exists only for the tfim family")
    if c == 0:
        return 0.0
    ops = ops if ops is not None else build_model(template.with_(h_z=0.0))
    delta = rel_delta * abs(c)

    def g2(hz):
        return thermo_at(solve_model(template, c, hz, ops=ops, method=method, n_states=n_states), T).G2

    g0, g1, g2_ = g2(0.0), g2(delta), g2(2 * delta)
    d1 = (g1 - g0) / delta
    d2 = (g2_ - g0) / (2 * delta)
    return 2 * d1 - d2
