"""Transverse magnetization of the Ising chain: exact-integral Maxwell route, ED Maxwell route and ED direct."""

from dataclasses import dataclass

import numpy as np

from _common import emit, figure, parse, save
from pairmaxwell.experiments import tfim_magnetization_table


@dataclass
class Config:
    sites: int = 12
    h_x: float = 1.0
    temperature: float = 0.02
    c_min: float = -4.0
    points: int = 41
    dh: float = 0.01
    n_states: int = 16
    threads: int = 1


def main():
    cfg, opts = parse(Config, __doc__)
    t = tfim_magnetization_table(cfg.sites, h_x=cfg.h_x, T=cfg.temperature, c_axis=np.linspace(cfg.c_min, 0.0, cfg.points),
                                 dh=cfg.dh, n_states=cfg.n_states, threads=cfg.threads)
    emit("fig2d_tfim_magnetization", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        lam = t.column("lam")
        ax.plot(lam, t.column("m_x_exact_maxwell"), "k-", label="exact, Maxwell")
        ax.plot(lam, t.column("m_x_ed_direct"), "s", ms=3, mfc="none", label=f"ED direct, V = {cfg.sites}")
        ax.plot(lam, t.column("m_x_ed_maxwell"), "x", ms=3, label="ED Maxwell")
        ax.set_xlabel(r"$|c| / 2h_x$")
        ax.set_ylabel(r"$m_x$")
        save(fa, "fig2d_tfim_magnetization", opts)


if __name__ == "__main__":
    main()
