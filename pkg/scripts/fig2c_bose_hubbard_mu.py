"""Bose-Hubbard chemical potential versus c: discrete-N Maxwell route against F(N+1) - F(N)."""

from dataclasses import dataclass

import numpy as np

from _common import emit, figure, parse, save
from pairmaxwell.experiments import chemical_potential_table
from pairmaxwell.models import ModelSpec


@dataclass
class Config:
    sites: int = 6
    n_max: int = 8
    c_max: float = 8.0
    points: int = 41
    temperature: float = 0.0
    threads: int = 1


def main():
    cfg, opts = parse(Config, __doc__)
    # mu(c) bends fastest near c = 0, so the grid is quadratic there
    c_axis = cfg.c_max * np.linspace(0.0, 1.0, cfg.points) ** 2
    spec = ModelSpec("bose_hubbard", cfg.sites, n_particles=1)
    t = chemical_potential_table(spec, c_axis, np.arange(1, cfg.n_max + 1), T=cfg.temperature,
                                 threads=cfg.threads, gap_at=cfg.sites)
    emit("fig2c_bose_hubbard_mu", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        c_top = t.column("c").max()
        last = t.column("c") == c_top
        n = t.column("N")[last] / cfg.sites
        ax.plot(n, t.column("mu_direct")[last], "k-", label=f"direct, c = {c_top:g}")
        ax.plot(n, t.column("mu_maxwell")[last], "o", ms=4, mfc="none", label="Maxwell")
        ax.set_xlabel("filling N / V")
        ax.set_ylabel(r"$\mu$")
        save(fa, "fig2c_bose_hubbard_mu", opts)


if __name__ == "__main__":
    main()
