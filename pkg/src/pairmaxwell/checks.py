"""Cross-module invariant suite run by ``pairmaxwell check``.

Each check is a small, self-contained computation returning
``(passed, detail)``.  :func:`run_suite` executes them in registration order
and never lets one failure stop the others.
"""

from __future__ import annotations

import itertools
import math
import time
import traceback
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

MODULES = ("hilbert", "models", "statmech", "maxwell", "bethe", "analytic", "cli")


@dataclass(frozen=True)
class CheckResult:
    name: str
    module: str
    passed: bool
    detail: str
    seconds: float


_REGISTRY: list = []


def check(module: str, name: str):
    def deco(fn: Callable[[], tuple]):
        _REGISTRY.append((module, name, fn))
        return fn

    return deco


def registered(modules: Optional[Iterable[str]] = None):
    wanted = set(MODULES if modules is None else modules)
    return [(m, n, f) for m, n, f in _REGISTRY if m in wanted]


def run_suite(modules: Optional[Iterable[str]] = None, report: Optional[Callable[[CheckResult], None]] = None):
    out = []
    for module, name, fn in registered(modules):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"raised {type(exc).__name__}: {exc} | {traceback.format_exc(limit=2).splitlines()[-1]}"
        res = CheckResult(f"{module}.{name}", module, bool(ok), detail, time.perf_counter() - t0)
        out.append(res)
        if report is not None:
            report(res)
    return out


def _commutator_norm(a, b) -> float:
    d = (a @ b - b @ a).tocoo()
    return float(np.max(np.abs(d.data))) if d.nnz else 0.0


# --------------------------------------------------------------------------
# hilbert


@check("hilbert", "sector_dimensions")
def _dims():
    from .hilbert import expected_dimension, make_basis

    cases = [("spin_half", L, {}) for L in range(1, 7)]
    cases += [("fermion_spinful", L, dict(n_up=u, n_down=d)) for L in range(1, 5) for u in range(L + 1) for d in range(L + 1)]
    cases += [("fermion_spinful", L, dict(n_particles=n)) for L in range(1, 4) for n in range(2 * L + 1)]
    cases += [("boson_cutoff", L, dict(n_particles=n, cutoff=k)) for L in range(1, 5) for n in range(6) for k in range(1, 4) if n <= L * k]
    bad = []
    for kind, L, kw in cases:
        b = make_basis(kind, L, **kw)
        want = expected_dimension(kind, L, **kw)
        if kind == "boson_cutoff":
            brute = sum(1 for occ in itertools.product(range(kw["cutoff"] + 1), repeat=L) if sum(occ) == kw["n_particles"])
            want = brute if brute == want else -1
        if b.dimension != want:
            bad.append((kind, L, kw, b.dimension, want))
    return not bad, f"{len(cases)} sectors" + (f"; mismatches {bad[:3]}" if bad else "")


@check("hilbert", "hermitian_operators")
def _hermitian():
    from .hilbert import HERMITIAN_TOL, Term, build_operator, make_basis

    worst = 0.0
    spin = make_basis("spin_half", 4)
    ferm = make_basis("fermion_spinful", 3, n_particles=3)
    bos = make_basis("boson_cutoff", 3, n_particles=3)
    terms = [(Term("sx", (1,)), spin), (Term("sz", (2,)), spin), (Term("szsz", (0, 3)), spin)]
    terms += [(Term("hop", (0, 2), spin=s), ferm) for s in ("up", "down")]
    terms += [(Term("double_occ", (1,)), ferm), (Term("number", (2,), spin="up"), ferm)]
    terms += [(Term("bhop", (0, 1)), bos), (Term("n2", (2,)), bos), (Term("pair", (0,)), bos)]
    for t, b in terms:
        op = build_operator(t, b)
        if op.shape != (b.dimension, b.dimension):
            return False, f"{t.kind}: shape {op.shape} for dimension {b.dimension}"
        worst = max(worst, op.hermiticity_error())
    return worst < HERMITIAN_TOL, f"max|A - A^T| = {worst:.1e} over {len(terms)} terms"


@check("hilbert", "number_conservation")
def _number():
    from .hilbert import Term, build_operator, make_basis, operator_sum

    worst = 0.0
    fb = make_basis("fermion_spinful", 3)
    n_tot = operator_sum([(1.0, build_operator(Term("number", (j,), spin=s), fb)) for j in range(3) for s in ("up", "down")], fb, "N")
    H = operator_sum([(-1.0, build_operator(Term("hop", (j, j + 1), spin=s), fb)) for j in range(2) for s in ("up", "down")]
                     + [(2.0, build_operator(Term("double_occ", (j,)), fb)) for j in range(3)], fb, "H")
    worst = max(worst, _commutator_norm(n_tot.matrix, H.matrix))
    bb = make_basis("boson_cutoff", 3, cutoff=2)
    n_b = operator_sum([(1.0, build_operator(Term("number", (j,)), bb)) for j in range(3)], bb, "N")
    Hb = operator_sum([(-1.0, build_operator(Term("bhop", (j, j + 1)), bb)) for j in range(2)]
                      + [(1.0, build_operator(Term("n2", (j,)), bb)) for j in range(3)], bb, "H")
    worst = max(worst, _commutator_norm(n_b.matrix, Hb.matrix))
    return worst < 1e-12, f"max|[N, H]| = {worst:.1e}"


@check("hilbert", "fermion_anticommutation")
def _anticomm():
    import scipy.sparse as sp

    from .hilbert import annihilator, make_basis

    worst = 0.0
    for L in (1, 2, 3):
        b = make_basis("fermion_spinful", L)
        ops = [annihilator(b, j, s) for j in range(L) for s in ("up", "down")]
        eye = sp.identity(b.dimension, format="csr")
        for (i, a), (j, c) in itertools.product(enumerate(ops), repeat=2):
            ac = (a @ c.T + c.T @ a - (eye if i == j else 0 * eye)).toarray()
            aa = (a @ c + c @ a).toarray()
            worst = max(worst, np.abs(ac).max(), np.abs(aa).max())
    return worst < 1e-12, f"max deviation from canonical relations {worst:.1e} on 1..3 sites"


@check("hilbert", "reproducible_enumeration")
def _repro():
    from .hilbert import make_basis

    a = make_basis("fermion_spinful", 4, n_up=2, n_down=1).codes
    b = make_basis("fermion_spinful", 4, n_up=2, n_down=1).codes
    c = make_basis("boson_cutoff", 4, n_particles=4, cutoff=2).codes
    ok = a.tobytes() == b.tobytes() and np.all(np.diff(a) > 0) and np.all(np.diff(c) > 0)
    return ok, "codes byte-identical and strictly sorted"


# --------------------------------------------------------------------------
# models


def _small_specs():
    from .models import ModelSpec

    return [
        ModelSpec("tfim", 5, h_x=0.7, c=-1.3),
        ModelSpec("tfim", 4, h_x=1.1, h_z=0.3, c=0.8, boundary="periodic"),
        ModelSpec("fermi_hubbard", 3, t=1.0, c=2.5, n_up=2, n_down=1),
        ModelSpec("fermi_hubbard", 4, t=0.8, c=-1.0, n_particles=4, boundary="periodic"),
        ModelSpec("bose_hubbard", 3, t=1.0, c=0.9, n_particles=3),
        ModelSpec("bose_hubbard", 3, t=1.0, c=0.9, n_particles=3, bose_g2="standard", boson_cutoff=2),
    ]


@check("models", "hamiltonian_linear_in_c")
def _linear():
    from .models import build_model, hamiltonian_at

    worst = 0.0
    for spec in _small_specs():
        ops = build_model(spec)
        h1 = hamiltonian_at(ops, 0.37, spec.h_z).matrix
        h2 = hamiltonian_at(ops, -1.21, spec.h_z).matrix
        dHdc = (h1 - h2) / (0.37 + 1.21)
        worst = max(worst, float(np.abs((dHdc - ops.G2hat.matrix).toarray()).max()))
        worst = max(worst, hamiltonian_at(ops, spec.c, spec.h_z).hermiticity_error())
    return worst < 1e-12, f"max|dH/dc - G2hat| and hermiticity {worst:.1e}"


@check("models", "tfim_z2_symmetry")
def _z2():
    from .hilbert import spin_flip_parity
    from .models import ModelSpec, build_model, hamiltonian_at

    worst = 0.0
    for bc in ("open", "periodic"):
        ops = build_model(ModelSpec("tfim", 6, h_x=0.9, boundary=bc))
        P = spin_flip_parity(ops.basis)
        worst = max(worst, _commutator_norm(P, hamiltonian_at(ops, -1.7).matrix))
    broken = _commutator_norm(P, hamiltonian_at(ops, -1.7, 0.2).matrix)
    return worst < 1e-12 and broken > 1e-3, f"|[P, H]| = {worst:.1e} at h_z = 0, {broken:.2f} at h_z = 0.2"


@check("models", "bond_count")
def _bonds():
    from .models import ModelSpec, build_model

    ok = True
    for L in (2, 3, 5, 8):
        for bc, nb in (("open", L - 1), ("periodic", L if L > 2 else 1)):
            g = build_model(ModelSpec("tfim", L, boundary=bc)).G2hat.matrix.diagonal()
            # fully polarized state: every bond contributes 1/4
            ok &= abs(g[0] - nb / 4) < 1e-14
    return ok, "G2hat on the polarized state counts L-1 (open) or L (periodic) bonds"


@check("models", "hubbard_g2_diagonal_integer")
def _fh_g2():
    import scipy.sparse as sp

    from .models import ModelSpec, build_model

    ops = build_model(ModelSpec("fermi_hubbard", 4, n_up=2, n_down=2))
    G = ops.G2hat.matrix
    off = abs(G - sp.diags(G.diagonal())).max()
    d = G.diagonal()
    ok = off == 0 and np.all(d >= 0) and np.allclose(d, np.round(d))
    return ok, f"off-diagonal {off}, eigenvalues {sorted(set(int(v) for v in d))}"


@check("models", "sector_conservation")
def _sectors():
    from .hilbert import Term, build_operator, operator_sum
    from .models import ModelSpec, build_model, hamiltonian_at

    worst = 0.0
    for spec in (ModelSpec("fermi_hubbard", 3, n_particles=3), ModelSpec("bose_hubbard", 3, n_particles=3)):
        ops = build_model(spec)
        H = hamiltonian_at(ops, 1.3).matrix
        # the n_total observable is constant within the sector
        n = ops.observables["n_total"].matrix.diagonal()
        worst = max(worst, float(np.abs(n - spec.n_particles).max()))
        if spec.family == "fermi_hubbard":
            nup = operator_sum([(1.0, build_operator(Term("number", (j,), spin="up"), ops.basis)) for j in range(3)], ops.basis, "Nup")
            worst = max(worst, _commutator_norm(nup.matrix, H))
    return worst < 1e-12, f"sector violation {worst:.1e}"


# --------------------------------------------------------------------------
# statmech


@check("statmech", "thermodynamic_identities")
def _thermo_ids():
    from .models import ModelSpec
    from .statmech import solve_model, thermo_at

    worst_s = worst_c = worst_v = 0.0
    fails = []
    for spec in _small_specs():
        b = solve_model(spec)
        if np.any(np.diff(b.eigenvalues) < 0) or b.eigenvalues.size != b.basis.dimension:
            fails.append(f"{spec.family}: spectrum not sorted/complete")
        for T in (0.1, 1.0, 10.0):
            st = thermo_at(b, T)
            worst_s = max(worst_s, abs(st.S - (st.U - st.F) / T) / max(1.0, abs(st.S)))
            if st.S < -1e-12 or st.C_V < -1e-12:
                fails.append(f"{spec.family} T={T}: S={st.S:.3e}, C_V={st.C_V:.3e}")
            h = 1e-3 * T
            Fp, Fm = thermo_at(b, T + h).F, thermo_at(b, T - h).F
            Sp, Sm = thermo_at(b, T + h).S, thermo_at(b, T - h).S
            worst_c = max(
                worst_c,
                abs(-(Fp - Fm) / (2 * h) - st.S) / max(1.0, st.S),
                abs(T * (Sp - Sm) / (2 * h) - st.C_V) / max(1.0, st.C_V),
            )
            # wider step for the second difference, whose rounding grows as 1/h^2
            h2 = 1e-2 * T
            F2p, F2m = thermo_at(b, T + h2).F, thermo_at(b, T - h2).F
            worst_v = max(worst_v, abs(-T * (F2p - 2 * st.F + F2m) / h2**2 - st.C_V) / max(1.0, st.C_V))
    ok = worst_s < 1e-10 and worst_c < 1e-5 and worst_v < 1e-3 and not fails
    detail = f"S=(U-F)/T rel {worst_s:.1e}; S=-dF/dT and C_V=T dS/dT {worst_c:.1e}; C_V=-T d2F/dT2 {worst_v:.1e}"
    return ok, detail + (f"; {fails}" if fails else "")


@check("statmech", "infinite_temperature_entropy")
def _t_inf():
    from .models import ModelSpec
    from .statmech import solve_model, thermo_at

    st = thermo_at(solve_model(ModelSpec("tfim", 4, c=-1.0)), 1e6)
    dev = abs(st.S - 4 * math.log(2))
    return dev < 1e-6 and abs(st.m_x) < 1e-6, f"|S - 4 ln 2| = {dev:.1e} at T = 1e6"


@check("statmech", "ground_manifold_entropy")
def _t0():
    from .models import ModelSpec
    from .statmech import solve_model, thermo_at

    st = thermo_at(solve_model(ModelSpec("tfim", 4, h_x=0.0, c=-1.0)), 0.0)
    return abs(st.S - math.log(2)) < 1e-12 and abs(st.m_z) < 1e-12, f"S = {st.S:.6f} (ln 2 expected), m_z = {st.m_z:.1e}"


@check("statmech", "hellmann_feynman_scaling")
def _hf():
    from .models import ModelSpec
    from .statmech import hellmann_feynman_residual

    # sizes and couplings where |F| keeps the long-double rounding of F(c +- dc)
    # well below the dc^2 term at T = 10
    specs = [
        ModelSpec("tfim", 8, h_x=1.0, c=-1.5),
        ModelSpec("fermi_hubbard", 6, n_up=2, n_down=2, c=4.0),
        ModelSpec("bose_hubbard", 5, n_particles=5, c=1.0),
    ]
    lines, ok = [], True
    for spec in specs:
        for T in (0.1, 1.0, 10.0):
            r3 = hellmann_feynman_residual(spec, T, 1e-3)
            r4 = hellmann_feynman_residual(spec, T, 1e-4)
            ratio = r3 / r4
            ok &= r4 <= 1e-6 and 80 <= ratio <= 120
            lines.append(f"{spec.family[:2]}@{T:g}:{ratio:.0f}")
    return ok, "residual ratios " + " ".join(lines)


# --------------------------------------------------------------------------
# maxwell


@check("maxwell", "simpson_convergence")
def _simpson():
    from scipy.integrate import quad

    from .maxwell import cumulative_from_anchor

    f = lambda x: np.exp(np.sin(2 * x)) * np.cos(x)
    c_end = 2.0
    ref = quad(f, 0.0, c_end, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    errs = []
    for n in (21, 41, 81):
        c = np.linspace(0.0, c_end, n)
        I, _ = cumulative_from_anchor(c, f(c), 0)
        errs.append(abs(I[-1] - ref))
    r1, r2 = errs[0] / errs[1], errs[1] / errs[2]
    ok = 12 <= r1 <= 20 and 12 <= r2 <= 20
    return ok, f"error reduction per halving {r1:.1f}, {r2:.1f}"


@check("maxwell", "derivative_orders")
def _deriv():
    from .maxwell import derivative_1d

    devs = []
    for n in (51, 101, 201):
        x = np.linspace(0.0, 1.0, n)
        y = np.sin(3 * x)
        d2 = derivative_1d(x, y, 2)
        d11 = derivative_1d(x, derivative_1d(x, y, 1), 1)
        # compare at the same interior abscissae on every grid
        pick = np.isin(np.round(x, 12), np.round(np.linspace(0.2, 0.8, 7), 12))
        devs.append(float(np.abs(d2 - d11)[pick].max()))
    r1, r2 = devs[0] / devs[1], devs[1] / devs[2]
    quad = derivative_1d(np.linspace(0, 1, 11), np.linspace(0, 1, 11) ** 2, 2)
    ok = 3.5 <= r1 <= 4.5 and 3.5 <= r2 <= 4.5 and np.allclose(quad[1:-1], 2.0, atol=1e-8)
    return ok, f"|D2 - D1 D1| = {devs[0]:.1e}, {devs[1]:.1e}, {devs[2]:.1e} for h = 0.02, 0.01, 0.005 (O(h^2))"


@check("maxwell", "route_equality_and_anchor")
def _routes():
    from .experiments import direct_values, lattice_reconstruction
    from .maxwell import reanchor, sweep_g2
    from .models import ModelSpec

    out, ok = [], True
    tf = ModelSpec("tfim", 6, h_x=1.0)
    cases = [
        ("entropy", sweep_g2(tf, np.linspace(-1.5, 0.0, 31), "T", np.linspace(0.5, 2.0, 16)), 0.0, "central"),
        ("heat_capacity", sweep_g2(tf, np.linspace(-1.5, 0.0, 31), "T", np.linspace(0.5, 2.0, 16)), 0.0, "central"),
        ("magnetization", sweep_g2(tf, np.linspace(-1.5, 0.0, 31), "h_x", 1.0 + 0.01 * np.arange(-2, 3), T=0.5), 0.0, "central"),
        ("chemical_potential", sweep_g2(ModelSpec("fermi_hubbard", 4, n_particles=1), np.linspace(0, 4, 21), "N", np.arange(2, 7), T=0.5), 0.0, "forward"),
        ("pressure", sweep_g2(ModelSpec("fermi_hubbard", 3, n_particles=3), np.linspace(0, 4, 21), "V", np.arange(3, 7), T=0.5), 0.0, "central"),
        ("inverse_compressibility", sweep_g2(ModelSpec("fermi_hubbard", 3, n_particles=3), np.linspace(0, 4, 21), "V", np.arange(3, 7), T=0.5), 0.0, "central"),
    ]
    for kind, grid, c0, scheme in cases:
        _, res = lattice_reconstruction(kind, grid, c0, scheme=scheme)
        diff = np.abs(res.y - direct_values(kind, grid, scheme))
        err = res.err_est
        x_ok = diff <= 3 * err
        x_ok[grid.c_axis == c0] = True  # the anchor is copied from the direct route
        mid = grid.c_axis[len(grid.c_axis) // 2]
        ra = reanchor(res, mid)
        a_ok = np.abs(ra.y - res.y) <= 2 * np.maximum(ra.err_est, res.err_est)
        ok &= bool(x_ok.all() and a_ok.all())
        out.append(f"{kind}: max|d|/err {float(np.max(diff / np.maximum(err, 1e-12))):.2f}")
    return ok, "; ".join(out)


@check("maxwell", "anchor_exact_and_err_nonnegative")
def _anchor():
    from .maxwell import reconstruct_from_derivative

    c = np.linspace(-1.0, 2.0, 31)
    r = reconstruct_from_derivative("entropy", c, np.cos(c)[:, None] * np.ones((1, 3)), c[10], [1.0, 2.0, 3.0], x_axis=[1, 2, 3])
    ok = np.array_equal(r.y[10], np.array([1.0, 2.0, 3.0])) and np.all(r.err_est >= 0)
    return ok, "y(c0) equals the anchor bit for bit; err_est >= 0"


@check("maxwell", "savgol_polynomial_reproduction")
def _savgol():
    from .maxwell import savgol

    x = np.linspace(-1, 1, 41)
    cubic = 1 - 2 * x + 0.5 * x**2 + 3 * x**3
    dev = float(np.abs(savgol(cubic, 7, 3) - cubic).max())
    rng = np.random.default_rng(7)
    t = np.linspace(0, 2 * np.pi, 101)
    noisy = np.sin(t) + rng.normal(0, 0.01, t.size)
    rms = float(np.sqrt(np.mean((savgol(noisy, 11, 3) - np.sin(t)) ** 2)))
    return dev < 1e-10 and rms < 0.01, f"cubic reproduction {dev:.1e}; noisy-sine RMS {rms:.4f}"


# --------------------------------------------------------------------------
# bethe


@check("bethe", "solution_invariants")
def _bethe_inv():
    from .bethe import E_TG, solve_lieb_equation

    fails = []
    prev_e, prev_g2 = -1.0, 2.0
    for g in (0.1, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0):
        s = solve_lieb_equation(g)
        x, prof = s.nodes, s.density_profile
        sym = float(np.abs(prof - prof[::-1]).max())
        if sym > 1e-10 or np.any(prof <= 0):
            fails.append(f"g(x) at gamma={g}: symmetry {sym:.1e}")
        if not (prev_e < s.e <= E_TG * (1 + 1e-12)) or not (0 <= s.g2 <= 1) or s.g2 > prev_g2:
            fails.append(f"gamma={g}: e={s.e}, g2={s.g2}")
        prev_e, prev_g2 = s.e, s.g2
    return not fails, "g > 0 symmetric, e increasing below pi^2/3, g2 in [0,1] decreasing" + (f"; {fails}" if fails else "")


@check("bethe", "hellmann_feynman_and_nodes")
def _bethe_hf():
    from .bethe import energy_density, solve_lieb_equation

    g = 10.0
    s = solve_lieb_equation(g)
    d3 = (energy_density(g * 1.001) - energy_density(g * 0.999)) / (0.002 * g)
    hf = abs(s.de_dgamma - d3)
    conv = abs(energy_density(g, 256) - energy_density(g, 512))
    return hf < 1e-6 and conv < 1e-8, f"|e'(1e-4) - e'(1e-3)| = {hf:.1e}; |e_256 - e_512| = {conv:.1e}"


@check("bethe", "limits")
def _bethe_lim():
    from .analytic import meanfield_pressure
    from .bethe import E_TG, energy_density, inverse_compressibility, pressure_direct

    g = 1e3
    asym = E_TG * (1 - 4 / g + 12 / g**2)
    r1 = abs(energy_density(g) / asym - 1)
    r2 = abs(pressure_direct(1.0, 0.01) / meanfield_pressure(0.005, 1.0) - 1)
    k = inverse_compressibility(1.0, 1e4) / math.pi**2
    return r1 < 5e-3 and r2 < 5e-2 and abs(k - 1) < 1e-2, f"strong {r1:.1e}, weak {r2:.3f}, kappa_inv/pi^2 {k:.4f}"


# --------------------------------------------------------------------------
# analytic


@check("analytic", "dg2_dhx_matches_finite_difference")
def _s16():
    from .analytic import TfimPoint, tfim_dg2_dhx, tfim_g2_exact

    rng = np.random.default_rng(20)
    worst = 0.0
    for _ in range(20):
        h = float(rng.uniform(0.5, 2.0))
        lam = float(rng.uniform(0.05, 3.0))
        if abs(lam - 1) < 0.05:
            lam += 0.1
        c = -2 * h * lam * float(rng.choice([-1.0, 1.0]))
        d = 1e-4 * h
        fd = (tfim_g2_exact(TfimPoint(c, h + d)) - tfim_g2_exact(TfimPoint(c, h - d))) / (2 * d)
        worst = max(worst, abs(fd - tfim_dg2_dhx(TfimPoint(c, h))))
    return worst < 1e-6, f"max |FD - dG2/dh_x| = {worst:.1e} at 20 random points"


@check("analytic", "mz_maxwell_identity")
def _s17():
    from .experiments import mz_identity_table

    t = mz_identity_table(np.linspace(1.02, 2.0, 50))
    return t.meta["max_rel_diff"] < 1e-6, f"max relative deviation {t.meta['max_rel_diff']:.1e} on ratio in (1, 2]"


@check("analytic", "yg_g2_bounds")
def _yg_bounds():
    from .analytic import YangGaudinPoint, yg_g2

    worst = 0.0
    for g, tau, P in itertools.product((0.0, 0.1, 1.0, 10.0, 1e3), (1e-3, 0.1, 10.0, 1e4), (-1.0, -0.3, 0.0, 0.8)):
        v = yg_g2(YangGaudinPoint(g, tau, P))
        worst = max(worst, -v, v - (1 - P**2))
    return worst <= 1e-15, f"max bound violation {worst:.1e}"


@check("analytic", "mx_monotone")
def _mx_mono():
    from .analytic import tfim_mx_maxwell

    c = np.linspace(-6.0, 0.0, 61)
    r = tfim_mx_maxwell(1.0, c)
    d = np.diff(r.y)
    return bool(np.all(d > 0)) and 0 < r.y[0] < 0.1, f"m_x rises monotonically from {r.y[0]:.4f} at c=-6 to 1/2"


@check("analytic", "critical_exponent")
def _beta():
    from .analytic import critical_exponent_fit

    beta, diag = critical_exponent_fit()
    return abs(beta - 0.125) <= 5e-3 and diag["r2"] > 0.999, f"beta = {beta:.5f}, R^2 = {diag['r2']:.6f}"


@check("analytic", "ideal_fermi_limits")
def _ifg():
    from .analytic import _fd_integral, fermi_fugacity, ideal_fermi_entropy

    T, n = 1e4, 1.0
    lam = math.sqrt(2 * math.pi / T)
    classical = n * (1.5 + math.log(2 / (n * lam)))  # two spin components at n/2 each
    r = abs(ideal_fermi_entropy(T, n) / classical - 1)
    cold = ideal_fermi_entropy(1e-4, n)
    # fully polarized gas: one component at the full density
    lz = fermi_fugacity(1.0, 2.0)
    single = 1.5 * _fd_integral(1.5, lz) / math.sqrt(2 * math.pi / 2.0) - lz
    pol = abs(ideal_fermi_entropy(2.0, 1.0, 1.0) - single)
    return r < 1e-3 and 0 <= cold < 1e-3 and pol < 1e-12, f"classical limit {r:.1e}, S(T=1e-4) = {cold:.1e}, P=1 {pol:.1e}"


# --------------------------------------------------------------------------
# cli


@check("cli", "deterministic_roundtrip")
def _cli():
    import contextlib
    import io
    import json
    import tempfile
    from pathlib import Path

    from .cli import main, read_output

    cfg = {
        "schema_version": 1,
        "command": "reconstruct",
        "model": {"family": "tfim", "sites": 4, "h_x": 1.0},
        "axes": {"c": {"start": -1.0, "stop": 0.0, "num": 11}, "x": {"name": "T", "values": {"start": 0.5, "stop": 1.5, "num": 6}}},
        "reconstruction": {"kind": "entropy", "c0": 0.0, "anchor": "direct"},
        "noise_sigma": 1e-6,
    }
    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "cfg.json"
        p.write_text(json.dumps(cfg))
        blobs = []
        for k, fmt in enumerate(("json", "json", "csv")):
            out = Path(d) / f"out{k}.{fmt}"
            code = main(["--config", str(p), "--out", str(out), "--format", fmt, "--seed", "11", "--quiet"])
            if code != 0:
                return False, f"run {k} exited {code}"
            blobs.append(out.read_bytes())
        same = blobs[0] == blobs[1]
        j, c = read_output(Path(d) / "out0.json"), read_output(Path(d) / "out2.csv")
        lossless = j["columns"] == c["columns"] and np.array_equal(np.asarray(j["rows"]), np.asarray(c["rows"]))
        bad = Path(d) / "bad.json"
        bad.write_text(json.dumps({**cfg, "model": {"family": "tfim", "sites": -3}}))
        diag = io.StringIO()
        with contextlib.redirect_stderr(diag):
            code = main(["--config", str(bad), "--quiet"])
    field = "$.model.sites" in diag.getvalue()
    ok = same and lossless and code == 2 and field
    return ok, f"byte-identical {same}, CSV/JSON values equal {lossless}, schema error exit {code} naming the field {field}"
