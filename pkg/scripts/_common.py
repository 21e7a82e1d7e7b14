"""Shared plumbing for the figure scripts.

Each script declares its parameters as a dataclass; ``parse`` turns the fields
into command-line options and ``emit`` writes tables in the same CSV/JSON
format as the ``pairmaxwell`` command.  Plots are optional and need matplotlib.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from pairmaxwell.cli import render

OUT_DIR = Path(__file__).resolve().parents[1] / "results"


def parse(cfg_cls, description: str):
    p = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cfg_cls):
        default = f.default
        kind = type(default)
        if kind is bool:
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, action=argparse.BooleanOptionalAction, default=default)
        else:
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, type=kind, default=default)
    p.add_argument("--out-dir", type=Path, default=OUT_DIR)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true", help="also write a PNG (needs matplotlib)")
    ns = vars(p.parse_args())
    opts = {k: ns.pop(k) for k in ("out_dir", "format", "plot")}
    return cfg_cls(**ns), opts


def emit(name: str, table, cfg, opts) -> Path:
    meta = {"script": name, "config": json.dumps(dataclasses.asdict(cfg), sort_keys=True)}
    meta.update({f"result.{k}": v for k, v in sorted(table.meta.items())})
    out = Path(opts["out_dir"]) / f"{name}.{opts['format']}"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render(table, meta, opts["format"]))
    print(f"wrote {out}")
    for k, v in sorted(table.meta.items()):
        print(f"  {k} = {v}")
    return out


def figure(opts):
    """A (fig, ax) pair, or None when plotting was not requested."""
    if not opts["plot"]:
        return None
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is not installed; skipping the plot", file=sys.stderr)
        return None
    return plt.subplots(figsize=(4.5, 3.4))


def save(fig_ax, name: str, opts, **legend) -> None:
    if fig_ax is None:
        return
    fig, ax = fig_ax
    ax.legend(frameon=False, **legend)
    fig.tight_layout()
    path = Path(opts["out_dir"]) / f"{name}.png"
    fig.savefig(path, dpi=150)
    print(f"wrote {path}")
