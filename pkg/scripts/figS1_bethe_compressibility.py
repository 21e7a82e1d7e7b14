"""Lieb-Liniger inverse compressibility by the Maxwell and direct routes."""

from dataclasses import dataclass

import numpy as np

from _common import emit, figure, parse, save
from pairmaxwell.experiments import bethe_table


@dataclass
class Config:
    n: float = 1.0
    gamma_min: float = 1.0
    gamma_max: float = 50.0
    points: int = 30


def main():
    cfg, opts = parse(Config, __doc__)
    t = bethe_table(cfg.n, np.geomspace(cfg.gamma_min, cfg.gamma_max, cfg.points))
    emit("figS1_bethe_compressibility", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        g = t.column("gamma")
        ax.semilogx(g, t.column("kappa_inv_direct"), "k-", label="direct")
        ax.semilogx(g, t.column("kappa_inv_maxwell"), "o", ms=3, mfc="none", label="Maxwell")
        ax.set_xlabel(r"$\gamma$")
        ax.set_ylabel(r"$\kappa_T^{-1}$")
        save(fa, "figS1_bethe_compressibility", opts)


if __name__ == "__main__":
    main()
