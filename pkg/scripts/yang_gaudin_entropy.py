"""High-temperature Yang-Gaudin entropy: closed-form correction against numerical Maxwell integration."""

from dataclasses import dataclass

import numpy as np

from _common import emit, figure, parse, save
from pairmaxwell.experiments import yang_gaudin_table


@dataclass
class Config:
    gamma_max: float = 0.2
    gamma_points: int = 8
    tau: float = 50.0
    polarization: float = 0.0
    points: int = 41


def main():
    cfg, opts = parse(Config, __doc__)
    gam = np.linspace(cfg.gamma_max / cfg.gamma_points, cfg.gamma_max, cfg.gamma_points)
    t = yang_gaudin_table(gam, [cfg.tau], cfg.polarization, points=cfg.points)
    emit("yang_gaudin_entropy", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        g = t.column("gamma")
        ax.plot(g, t.column("dS_closed_form"), "k-", label="closed form")
        ax.plot(g, t.column("dS_maxwell"), "o", ms=3, mfc="none", label="Maxwell")
        ax.set_xlabel(r"$\gamma$")
        ax.set_ylabel(r"$S - S_{\rm IFG}$")
        save(fa, "yang_gaudin_entropy", opts)


if __name__ == "__main__":
    main()
