"""Spontaneous longitudinal magnetization and, for the inset, the lambda anomaly in dG2/dh_z.

Writes three tables: the exact m_z curve, the pointwise check of the
Maxwell-consistency identity for m_z, and the ED response across the
transition.
"""

from dataclasses import dataclass

import numpy as np

from _common import emit, figure, parse, save
from pairmaxwell.experiments import lambda_anomaly_table, mz_identity_table, tfim_exact_table


@dataclass
class Config:
    h_x: float = 1.0
    c_min: float = -8.0
    points: int = 161
    sites: int = 12
    lam_min: float = 0.5
    lam_max: float = 2.0
    lam_step: float = 0.05
    rel_delta: float = 1e-2
    skip_inset: bool = False


def main():
    cfg, opts = parse(Config, __doc__)
    exact = tfim_exact_table(cfg.h_x, np.linspace(cfg.c_min, 0.0, cfg.points))
    emit("fig2e_tfim_mz", exact, cfg, opts)
    emit("fig2e_mz_identity", mz_identity_table(h_x=cfg.h_x), cfg, opts)
    inset = None
    if not cfg.skip_inset:
        lam = np.round(np.arange(cfg.lam_min, cfg.lam_max + 1e-9, cfg.lam_step), 10)
        inset = lambda_anomaly_table(cfg.sites, h_x=cfg.h_x, lam_axis=lam, rel_delta=cfg.rel_delta)
        emit("fig2e_inset_lambda_anomaly", inset, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        ratio = np.abs(exact.column("c")) / cfg.h_x
        ax.plot(ratio, exact.column("m_z_printed"), "k-", label=r"$m_z$, printed normalization")
        ax.plot(ratio, 2 * exact.column("m_z_spin_half"), "--", label=r"$2 m_z$, spin-1/2")
        ax.set_xlabel(r"$|c| / h_x$")
        ax.set_ylabel(r"$m_z$")
        if inset is not None:
            sub = ax.inset_axes([0.55, 0.36, 0.4, 0.34])
            sub.plot(inset.column("lam"), inset.column("dG2_dhz_per_site"), ".-", ms=3)
            sub.set_xlabel(r"$|c|/2h_x$", fontsize=7)
            sub.set_ylabel(r"$\partial G_2/\partial h_z$ per site", fontsize=7)
            sub.tick_params(labelsize=6)
        save(fa, "fig2e_tfim_mz", opts, loc="lower right", fontsize=8)


if __name__ == "__main__":
    main()
