"""Command-line front end.

    pairmaxwell [COMMAND] [--config PATH] [--out PATH] [--format csv|json]
                [--threads N] [--seed S] [--kind KIND]

A run is described by a JSON config validated against
``schemas/run_config.v1.json``.  Without ``--config`` the built-in default
for the command is used.  Exit status: 0 on success, 1 when a computation
fails (or an invariant of ``check`` fails), 2 for an invalid config.

Output is a metadata header (config echo, seed, version and summary numbers)
followed by data rows.  CSV writes metadata as ``# key=value`` lines and
floats with 17 significant digits; JSON is the canonical form.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import traceback
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from jsonschema import Draft202012Validator

from . import __version__
from .experiments import Table

SCHEMA_VERSION = 1
COMMANDS = ("sweep", "reconstruct", "bethe", "tfim-exact", "critical-fit", "yang-gaudin", "check")

DEFAULTS = {
    "sweep": {
        "model": {"family": "tfim", "sites": 8, "h_x": 1.0},
        "axes": {"c": {"start": -2.0, "stop": 0.0, "num": 21}, "x": {"name": "T", "values": {"start": 0.1, "stop": 2.0, "num": 20}}},
    },
    "reconstruct": {
        "model": {"family": "tfim", "sites": 8, "h_x": 1.0},
        "axes": {"c": {"start": -2.0, "stop": 0.0, "num": 41}, "x": {"name": "h_x", "values": [0.98, 0.99, 1.0, 1.01, 1.02]}},
        "temperature": 0.05,
        "reconstruction": {"kind": "magnetization", "c0": 0.0, "anchor": 0.5, "x_values": [1.0]},
    },
    "bethe": {"bethe": {"n": 1.0, "gamma": {"start": 1.0, "stop": 100.0, "num": 50, "spacing": "log"}}},
    "tfim-exact": {"tfim": {"h_x": 1.0, "c": {"start": -4.0, "stop": 0.0, "num": 81}}},
    "critical-fit": {"critical_fit": {"h_x": 1.0, "lo": 1e-8, "hi": 0.05, "points": 20}},
    "yang-gaudin": {"yang_gaudin": {"gamma": [0.05, 0.1, 0.2], "tau": [50.0, 100.0], "polarization": 0.0}},
    "check": {},
}

# defaults for `reconstruct --kind K` without a config
KIND_DEFAULTS = {
    "magnetization": DEFAULTS["reconstruct"],
    "entropy": {
        "model": {"family": "tfim", "sites": 8, "h_x": 1.0},
        "axes": {"c": {"start": -2.0, "stop": 0.0, "num": 41}, "x": {"name": "T", "values": {"start": 0.2, "stop": 3.0, "num": 29}}},
        "reconstruction": {"kind": "entropy", "c0": 0.0, "anchor": "direct"},
    },
    "heat_capacity": {
        "model": {"family": "tfim", "sites": 8, "h_x": 1.0},
        "axes": {"c": {"start": -2.0, "stop": 0.0, "num": 41}, "x": {"name": "T", "values": {"start": 0.04, "stop": 3.3, "step": 0.02}}},
        "reconstruction": {"kind": "heat_capacity", "c0": 0.0, "anchor": "direct"},
    },
    "chemical_potential": {
        "model": {"family": "fermi_hubbard", "sites": 6, "n_particles": 1},
        "axes": {"c": {"start": 0.0, "stop": 8.0, "num": 41}, "x": {"name": "N", "values": {"start": 1, "stop": 8, "num": 8}}},
        "reconstruction": {"kind": "chemical_potential", "c0": 0.0, "anchor": "direct", "scheme": "forward"},
    },
    "pressure": {
        "model": {"family": "fermi_hubbard", "sites": 4, "n_particles": 4},
        "axes": {"c": {"start": 0.0, "stop": 4.0, "num": 21}, "x": {"name": "V", "values": [4, 5, 6, 7]}},
        "temperature": 0.5,
        "reconstruction": {"kind": "pressure", "c0": 0.0, "anchor": "direct"},
    },
    "inverse_compressibility": {
        "model": {"family": "fermi_hubbard", "sites": 4, "n_particles": 4},
        "axes": {"c": {"start": 0.0, "stop": 4.0, "num": 21}, "x": {"name": "V", "values": [4, 5, 6, 7]}},
        "temperature": 0.5,
        "reconstruction": {"kind": "inverse_compressibility", "c0": 0.0, "anchor": "direct"},
    },
}


class ConfigError(ValueError):
    """Invalid run configuration (exit status 2)."""


@lru_cache(maxsize=1)
def load_schema() -> dict:
    text = resources.files("pairmaxwell").joinpath("schemas/run_config.v1.json").read_text()
    return json.loads(text)


def _json_path(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate_config(cfg) -> list:
    """Schema diagnostics as ``"$.field: message"`` strings (empty when valid)."""
    v = Draft202012Validator(load_schema())
    errs = sorted(v.iter_errors(cfg), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    return [f"{_json_path(e.absolute_path)}: {e.message}" for e in errs]


def parse_config_text(text: str, source: str = "<config>") -> dict:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("\n".join(f"{source}: {p}" for p in problems))
    return cfg


def default_config(command: str, kind: Optional[str] = None) -> dict:
    base = KIND_DEFAULTS[kind] if command == "reconstruct" and kind else DEFAULTS[command]
    cfg = {"schema_version": SCHEMA_VERSION, "command": command}
    cfg.update(copy.deepcopy(base))
    return cfg


def axis_values(spec) -> np.ndarray:
    """Materialize an axis: a list, ``{start, stop, num[, spacing]}`` or ``{start, stop, step}``."""
    if isinstance(spec, list):
        return np.asarray(spec, dtype=float)
    if "step" in spec:
        n = int(np.floor((spec["stop"] - spec["start"]) / spec["step"] + 1e-9)) + 1
        return np.round(spec["start"] + spec["step"] * np.arange(n), 12)
    if spec.get("spacing", "linear") == "log":
        if spec["start"] <= 0 or spec["stop"] <= 0:
            raise ConfigError("log-spaced axes need positive endpoints")
        return np.geomspace(spec["start"], spec["stop"], spec["num"])
    return np.linspace(spec["start"], spec["stop"], spec["num"])


# --------------------------------------------------------------------------
# commands


def _model(cfg):
    from .models import ModelSpec

    return ModelSpec(**cfg["model"])


def _run_sweep(cfg, seed, threads):
    grid = _grid(cfg, seed, threads)
    rows = []
    fields = [k for k in ("F", "U", "S", "C_V", "m_x", "m_z") if k in grid.direct]
    for i, c in enumerate(grid.c_axis):
        for j, x in enumerate(grid.x_axis):
            rows.append([c, x, grid.values[i, j]] + [grid.direct[k][i, j] for k in fields])
    return Table(["c", grid.x_name, "G2"] + fields, rows)


def _grid(cfg, seed, threads):
    from .experiments import add_noise
    from .maxwell import sweep_g2

    x = cfg["axes"]["x"]
    grid = sweep_g2(
        _model(cfg),
        axis_values(cfg["axes"]["c"]),
        x["name"],
        axis_values(x["values"]),
        T=cfg.get("temperature", 0.0),
        threads=threads,
        method=cfg.get("method", "dense"),
        n_states=cfg.get("n_states"),
    )
    return add_noise(grid, cfg.get("noise_sigma", 0.0), seed)


def _run_reconstruct(cfg, seed, threads):
    from .experiments import lattice_reconstruction

    r = cfg["reconstruction"]
    grid = _grid(cfg, seed, threads)
    sm = cfg.get("smoothing")
    table, _ = lattice_reconstruction(
        r["kind"],
        grid,
        r.get("c0", 0.0),
        r.get("anchor", "direct"),
        scheme=r.get("scheme", "central"),
        smoothing=None if sm is None else (sm["window"], sm["poly_order"]),
        x_values=r.get("x_values"),
    )
    return table


def _run_bethe(cfg, seed, threads):
    from .bethe import DEFAULT_NODES
    from .experiments import bethe_table

    b = cfg.get("bethe", {})
    gam = axis_values(b["gamma"]) if "gamma" in b else None
    return bethe_table(b.get("n", 1.0), gam, b.get("nodes", DEFAULT_NODES), b.get("max_step", 0.02))


def _run_tfim_exact(cfg, seed, threads):
    from .experiments import tfim_exact_table

    t = cfg.get("tfim", {})
    return tfim_exact_table(t.get("h_x", 1.0), axis_values(t["c"]) if "c" in t else None)


def _run_critical_fit(cfg, seed, threads):
    from .experiments import critical_fit_table

    f = cfg.get("critical_fit", {})
    return critical_fit_table(f.get("h_x", 1.0), f.get("lo", 1e-8), f.get("hi", 0.05), f.get("points", 20))


def _run_yang_gaudin(cfg, seed, threads):
    from .experiments import yang_gaudin_table

    y = cfg.get("yang_gaudin", {})
    return yang_gaudin_table(
        axis_values(y["gamma"]) if "gamma" in y else None,
        axis_values(y["tau"]) if "tau" in y else None,
        y.get("polarization", 0.0),
        y.get("n", 1.0),
        y.get("points", 41),
    )


def _run_check(cfg, seed, threads, quiet=False):
    from .checks import run_suite

    def report(res):
        if not quiet:
            print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name} ({res.seconds:.2f}s): {res.detail}", flush=True)

    results = run_suite(cfg.get("check", {}).get("modules"), report)
    failed = [r.name for r in results if not r.passed]
    if not quiet:
        print(f"{len(results) - len(failed)}/{len(results)} invariants passed", flush=True)
    t = Table(["index", "passed"], [(i, float(r.passed)) for i, r in enumerate(results)])
    for i, r in enumerate(results):
        t.meta[f"check_{i:03d}"] = r.name
    t.meta["failed"] = len(failed)
    return t


RUNNERS = {
    "sweep": _run_sweep,
    "reconstruct": _run_reconstruct,
    "bethe": _run_bethe,
    "tfim-exact": _run_tfim_exact,
    "critical-fit": _run_critical_fit,
    "yang-gaudin": _run_yang_gaudin,
    "check": _run_check,
}


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def build_metadata(cfg: dict, seed: int, table: Table) -> dict:
    meta = {
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "command": cfg["command"],
        "seed": int(seed),
        "noise_sigma": float(cfg.get("noise_sigma", 0.0)),
        "config": json.dumps(cfg, sort_keys=True, separators=(",", ":")),
    }
    for k in sorted(table.meta):
        meta[f"result.{k}"] = _json_value(table.meta[k])
    return meta


def render(table: Table, meta: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"metadata": meta, "columns": list(table.columns), "rows": table.rows.tolist()}
        return json.dumps(doc, sort_keys=True, indent=1, allow_nan=True) + "\n"
    lines = [f"# {k}={_fmt(v)}" for k, v in meta.items()]
    lines.append(",".join(table.columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def read_output(path) -> dict:
    """Parse a CSV or JSON output file back into metadata, columns and rows."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return {"metadata": doc["metadata"], "columns": doc["columns"], "rows": doc["rows"]}
    meta, rows, columns = {}, [], None
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return {"metadata": meta, "columns": columns, "rows": rows}


# --------------------------------------------------------------------------
# entry point


def _arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pairmaxwell", description="Pair-correlation Maxwell relations: sweeps, reconstructions and checks.")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="command to run (default: the config's command)")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--threads", type=int, help="worker threads for lattice sweeps")
    p.add_argument("--seed", type=int, help="seed of the noise generator (unsigned 64-bit)")
    p.add_argument("--kind", help="reconstruction kind (reconstruct only)")
    p.add_argument("--quiet", action="store_true", help="suppress progress and report lines")
    return p


def _error_context(exc: BaseException) -> str:
    """Innermost package module in the traceback, for the exit-1 message."""
    mod = "pairmaxwell"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        name = frame.f_globals.get("__name__", "")
        if name.startswith("pairmaxwell."):
            mod = name
    return mod


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _arg_parser().parse_args(argv)
    try:
        if args.config:
            path = Path(args.config)
            try:
                text = path.read_text()
            except OSError as exc:
                raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from exc
            cfg = parse_config_text(text, str(path))
            if args.command and args.command != cfg["command"]:
                raise ConfigError(f"{path}: $.command: config is for {cfg['command']!r}, command line asks for {args.command!r}")
        else:
            if not args.command:
                raise ConfigError("give a command or --config")
            cfg = default_config(args.command, args.kind)
        if args.kind:
            if cfg["command"] != "reconstruct":
                raise ConfigError("--kind applies to the reconstruct command only")
            cfg.setdefault("reconstruction", {})["kind"] = args.kind
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        problems = validate_config(cfg)
        if problems:
            raise ConfigError("\n".join(problems))
    except ConfigError as exc:
        print(f"config error:\n{exc}", file=sys.stderr)
        return 2

    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    threads = args.threads or cfg.get("threads", 1)
    fmt = args.format or cfg.get("output", {}).get("format", "csv")
    out = args.out or cfg.get("output", {}).get("path")
    cfg["seed"] = int(seed)
    try:
        if cfg["command"] == "check":
            table = _run_check(cfg, seed, threads, quiet=args.quiet)
        else:
            table = RUNNERS[cfg["command"]](cfg, seed, threads)
    except Exception as exc:
        print(f"error in {_error_context(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    text = render(table, build_metadata(cfg, seed, table), fmt)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    elif cfg["command"] != "check":
        # the check report already went to stdout
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader closed early (e.g. piped into head); silence the flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
            return 1
    if cfg["command"] == "check" and table.meta["failed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
