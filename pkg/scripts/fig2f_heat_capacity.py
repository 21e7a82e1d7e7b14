"""Ising-chain heat capacity: -T int d2G2/dT2 dc' anchored at c = 0, against the energy variance."""

from dataclasses import dataclass

from _common import emit, figure, parse, save
from pairmaxwell.experiments import heat_capacity_table
from pairmaxwell.models import ModelSpec


@dataclass
class Config:
    sites: int = 8
    h_x: float = 1.0
    c: float = -2.0
    points: int = 41
    t_min: float = 0.1
    t_max: float = 3.0


def main():
    cfg, opts = parse(Config, __doc__)
    t = heat_capacity_table(ModelSpec("tfim", cfg.sites, h_x=cfg.h_x), cfg.c, points=cfg.points,
                            window=(cfg.t_min, cfg.t_max))
    emit("fig2f_heat_capacity", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        T = t.column("T")
        ax.plot(T, t.column("C_V_direct"), "k-", label="energy variance")
        ax.plot(T[::4], t.column("C_V_maxwell")[::4], "o", ms=3, mfc="none", label="Maxwell")
        ax.set_xlabel("T")
        ax.set_ylabel(r"$C_V$")
        save(fa, "fig2f_heat_capacity", opts)


if __name__ == "__main__":
    main()
