"""Critical exponent beta from the log-derivative of G2 close to the ordering transition."""

from dataclasses import dataclass

from _common import emit, figure, parse, save
from pairmaxwell.experiments import critical_fit_table


@dataclass
class Config:
    h_x: float = 1.0
    lo: float = 1e-8
    hi: float = 0.05
    points: int = 20


def main():
    cfg, opts = parse(Config, __doc__)
    t = critical_fit_table(cfg.h_x, cfg.lo, cfg.hi, cfg.points)
    emit("figS2_critical_fit", t, cfg, opts)
    fa = figure(opts)
    if fa:
        fig, ax = fa
        x, y = t.column("log_ratio_minus_1"), t.column("log_minus_dG2_dh")
        ax.plot(x, y, "o", ms=3, mfc="none", label="exact")
        ax.plot(x, t.meta["intercept"] + t.meta["slope"] * x, "k-", label=rf"fit, $\beta$ = {t.meta['beta']:.4f}")
        ax.set_xlabel(r"$\ln(|c|/h_x - 1)$")
        ax.set_ylabel(r"$\ln(-\partial G_2/\partial h)$")
        save(fa, "figS2_critical_fit", opts)


if __name__ == "__main__":
    main()
