"""Lieb-Liniger pressure at T = 0: Maxwell route from the Tonks-Girardeau limit against -dE/dV."""

from dataclasses import dataclass

import numpy as np

from _common import emit, figure, parse, save
from pairmaxwell.experiments import bethe_table


@dataclass
class Config:
    n: float = 1.0
    gamma_min: float = 1.0
    gamma_max: float = 100.0
    points: int = 50


def main():
    cfg, opts = parse(Config, __doc__)
    t = bethe_table(cfg.n, np.geomspace(cfg.gamma_min, cfg.gamma_max, cfg.points))
    emit("fig2a_bethe_pressure", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        g = t.column("gamma")
        ax.semilogx(g, t.column("P_direct"), "k-", label="direct")
        ax.semilogx(g, t.column("P_maxwell"), "o", ms=3, mfc="none", label="Maxwell")
        ax.set_xlabel(r"$\gamma$")
        ax.set_ylabel(r"$P / n^3$")
        save(fa, "fig2a_bethe_pressure", opts)


if __name__ == "__main__":
    main()
