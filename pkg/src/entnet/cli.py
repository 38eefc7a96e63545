"""Command-line front end: runs experiments and emits deterministic CSV/JSON.

Every value in the output is produced by the library API; the CLI only
formats.  Floats are written with 17 significant digits so files round-trip
doubles exactly and identical (config, seed) pairs produce byte-identical
output.

Exit codes: 0 success, 2 invalid input, 3 infeasible regime.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any, Callable, Sequence

from .chain import ChainSpec, STRATEGIES, strategy_scp
from .errors import InfeasibleRegimeError
from .measurement import bell_from_probabilities, swap, xz_basis, zz_basis
from .merit import merits, square_numeric_scp, square_plan
from .percolation import (
    LatticeGraph,
    doubling_comparison,
    honeycomb_lattice,
    run_percolation,
    square_lattice,
    strategy_thresholds,
    tau_estimate,
    tau_short_path_bound,
    triangular_lattice,
)
from .recursion import KINDS as RECURSION_KINDS
from .recursion import make_map, threshold
from .states import PureState

Row = dict[str, Any]


def _default_seed() -> int:
    return int(os.environ.get("ENTNET_SEED", "42"))


def _parse_int_range(text: str) -> list[int]:
    """"a..b" (inclusive) or a single integer."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise ValueError(f"empty integer range {text!r}")
        return list(range(lo_i, hi_i + 1))
    return [int(text)]


def _parse_float_sweep(text: str) -> list[float]:
    """"start:stop:step" (inclusive grid) or a single float."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"sweep must look like start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad sweep {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(text)]


def _parse_float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p != ""]


def _load_config(path: str) -> dict[str, str]:
    """Flat key = value document; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class _Option:
    def __init__(self, name: str, conv: Callable[[str], Any], default: Any = None,
                 help: str = "", choices: Sequence[str] | None = None, flag: bool = False):
        self.name = name
        self.conv = conv
        self.default = default
        self.help = help
        self.choices = choices
        self.flag = flag


_COMMON = [
    _Option("out", str, None, "output file (default: stdout)"),
    _Option("format", str, "csv", "output format", choices=("csv", "json")),
    _Option("config", str, None, "flat key = value config file; flags override it"),
]

_COMMANDS: dict[str, list[_Option]] = {
    "swap": [
        _Option("alpha0", float, None, "larger Schmidt coefficient of the first state"),
        _Option("beta0", float, None, "larger Schmidt coefficient of the second state"),
        _Option("basis", str, "both", "Bell basis for the swap", choices=("zz", "xz", "both")),
        _Option("probs", _parse_float_list, None,
                "four target outcome probabilities for a custom Bell measurement"),
    ],
    "chain": [
        _Option("strategy", str, None, "chain strategy", choices=STRATEGIES),
        _Option("N", _parse_int_range, None, "repeater count or inclusive range a..b"),
        _Option("phi0", float, None, "larger Schmidt coefficient of every bond"),
    ],
    "square": [
        _Option("phi0", _parse_float_sweep, None, "bond coefficient, scalar or start:stop:step"),
        _Option("numeric", bool, False, "also run the general-measurement optimizer", flag=True),
        _Option("restarts", int, 50, "optimizer restarts"),
        _Option("seed", int, None, "optimizer seed (default: ENTNET_SEED or 42)"),
    ],
    "recursion": [
        _Option("kind", str, None, "recursion kind", choices=RECURSION_KINDS),
        _Option("e0", float, None, "bond entanglement for tree/centipede"),
        _Option("sweep", _parse_float_sweep, "0:1:0.001", "entanglement grid start:stop:step"),
    ],
    "percolate": [
        _Option("lattice", str, None, "lattice kind",
                choices=("square", "triangular", "honeycomb", "honeycomb-doubled")),
        _Option("p", float, None, "per-bond singlet probability"),
        _Option("L", int, 128, "linear lattice size"),
        _Option("boundary", str, "torus", "boundary condition", choices=("torus", "open")),
        _Option("trials", int, 1000, "Monte Carlo trials"),
        _Option("seed", int, None, "master seed (default: ENTNET_SEED or 42)"),
        _Option("threads", int, 1, "worker threads"),
    ],
    "compare": [
        _Option("mode", str, "doubling", "comparison to run",
                choices=("doubling", "tau", "honeycomb-strategies")),
        _Option("p", _parse_float_list, None, "bond probabilities (comma separated)"),
        _Option("L", int, 256, "linear lattice size"),
        _Option("trials", int, 4000, "Monte Carlo trials"),
        _Option("seed", int, None, "master seed (default: ENTNET_SEED or 42)"),
        _Option("threads", int, 1, "worker threads"),
    ],
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entnet",
        description="entanglement swapping strategies and entanglement percolation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, options in _COMMANDS.items():
        p = sub.add_parser(command)
        for opt in options + _COMMON:
            flag = "--" + opt.name.replace("_", "-")
            if opt.flag:
                p.add_argument(flag, action="store_const", const=True, default=None, help=opt.help)
            else:
                p.add_argument(flag, type=str, default=None, help=opt.help,
                               choices=opt.choices)
    return parser


def _resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Merge CLI flags over config-file values over defaults."""
    options = _COMMANDS[args.command] + _COMMON
    config: dict[str, str] = {}
    if args.config is not None:
        config = _load_config(args.config)
    resolved: dict[str, Any] = {"command": args.command}
    for opt in options:
        raw = getattr(args, opt.name)
        if raw is not None:
            resolved[opt.name] = raw if opt.flag else opt.conv(raw)
        elif opt.name in config:
            if opt.choices and config[opt.name] not in opt.choices:
                raise ValueError(f"config value {opt.name} = {config[opt.name]!r} not in {opt.choices}")
            resolved[opt.name] = (config[opt.name].lower() in ("1", "true", "yes")) if opt.flag \
                else opt.conv(config[opt.name])
        else:
            resolved[opt.name] = opt.default
    return resolved


def _require(cfg: dict[str, Any], *names: str) -> None:
    for name in names:
        if cfg[name] is None:
            raise ValueError(f"missing required option --{name.replace('_', '-')}")


def _seed_of(cfg: dict[str, Any]) -> int:
    return _default_seed() if cfg.get("seed") is None else int(cfg["seed"])


# --- command implementations ---------------------------------------------------

def _cmd_swap(cfg: dict[str, Any]) -> list[Row]:
    _require(cfg, "alpha0", "beta0")
    alpha = PureState(cfg["alpha0"])
    beta = PureState(cfg["beta0"])
    runs: list[tuple[str, Any]] = []
    if cfg["probs"] is not None:
        runs.append(("custom", bell_from_probabilities(cfg["probs"], alpha, beta)))
    else:
        if cfg["basis"] in ("zz", "both"):
            runs.append(("zz", zz_basis()))
        if cfg["basis"] in ("xz", "both"):
            runs.append(("xz", xz_basis()))
    rows = []
    for name, basis in runs:
        ens = swap(alpha, beta, basis)
        report = merits(ens)
        row: Row = {"basis": name, "alpha0": alpha.s0, "beta0": beta.s0}
        for i, o in enumerate(ens.outcomes, 1):
            row[f"p{i}"] = o.prob
        row.update(
            avg_concurrence=report.avg_concurrence, wce=report.wce, scp=report.scp
        )
        rows.append(row)
    return rows


def _cmd_chain(cfg: dict[str, Any]) -> list[Row]:
    _require(cfg, "strategy", "N", "phi0")
    phi = PureState(cfg["phi0"])
    return [
        {
            "strategy": cfg["strategy"],
            "phi0": phi.s0,
            "n": n,
            "scp": strategy_scp(ChainSpec(n, phi), cfg["strategy"]),
        }
        for n in cfg["N"]
    ]


def _cmd_square(cfg: dict[str, Any]) -> list[Row]:
    _require(cfg, "phi0")
    rows = []
    for phi0 in cfg["phi0"]:
        phi = PureState(phi0)
        plan = square_plan(phi)
        row: Row = {
            "phi0": phi.s0,
            "singlet_threshold": plan.singlet_threshold,
            "bell_limit": plan.bell_limit,
            "pstar": plan.pstar,
            "regime": plan.regime,
            "p1": plan.probs[0],
            "p2": plan.probs[1],
            "p3": plan.probs[2],
            "p4": plan.probs[3],
            "scp_bell": plan.scp_bell,
        }
        if cfg["numeric"]:
            row["scp_numeric"] = square_numeric_scp(
                phi, restarts=cfg["restarts"], seed=_seed_of(cfg)
            )
        rows.append(row)
    return rows


def _cmd_recursion(cfg: dict[str, Any]) -> list[Row]:
    _require(cfg, "kind")
    kind = cfg["kind"]
    rmap = make_map(kind, cfg["e0"])
    e_th = threshold(kind)
    rows = []
    for e in cfg["sweep"]:
        e = min(max(e, 0.0), 1.0)
        rows.append(
            {
                "kind": kind,
                "e0": cfg["e0"],
                "e": e,
                "e_next": rmap.eval(e),
                "threshold": e_th,
            }
        )
    return rows


def _build_lattice(cfg: dict[str, Any]) -> LatticeGraph:
    kind = cfg["lattice"]
    if kind == "square":
        return square_lattice(cfg["L"], cfg["p"], cfg["boundary"])
    if kind == "triangular":
        return triangular_lattice(cfg["L"], cfg["p"], cfg["boundary"])
    if kind == "honeycomb":
        return honeycomb_lattice(cfg["L"], cfg["p"], cfg["boundary"])
    return honeycomb_lattice(cfg["L"], cfg["p"], cfg["boundary"], doubled=True)


def _cmd_percolate(cfg: dict[str, Any]) -> list[Row]:
    _require(cfg, "lattice", "p")
    g = _build_lattice(cfg)
    seed = _seed_of(cfg)
    stats = run_percolation(g, seed=seed, trials=cfg["trials"], threads=cfg["threads"])
    return [
        {
            "lattice": cfg["lattice"],
            "L": g.L,
            "boundary": g.boundary,
            "p": cfg["p"],
            "trials": stats.trials,
            "seed": seed,
            "theta_hat": stats.theta_hat,
            "theta_err": stats.theta_err,
            "tau_hat": stats.tau_hat,
            "tau_err": stats.tau_err,
            "pi_hat": stats.pi_hat,
            "pi_err": stats.pi_err,
            "open_fraction": stats.open_fraction,
        }
    ]


def _cmd_compare(cfg: dict[str, Any]) -> list[Row]:
    mode = cfg["mode"]
    if mode == "honeycomb-strategies":
        return [
            {"strategy": name, "critical_entanglement": value}
            for name, value in strategy_thresholds().items()
        ]
    _require(cfg, "p")
    seed = _seed_of(cfg)
    rows = []
    for p in cfg["p"]:
        if mode == "tau":
            g = square_lattice(cfg["L"], p, boundary="open")
            stats = tau_estimate(g, seed=seed, trials=cfg["trials"], threads=cfg["threads"])
            rows.append(
                {
                    "p": p,
                    "L": cfg["L"],
                    "trials": stats.trials,
                    "seed": seed,
                    "tau_hat": stats.tau_hat,
                    "tau_err": stats.tau_err,
                    "short_path_bound": tau_short_path_bound(p),
                }
            )
        else:
            rep = doubling_comparison(p, cfg["L"], seed=seed, trials=cfg["trials"],
                                      threads=cfg["threads"])
            rows.append(
                {
                    "p": rep.p,
                    "L": rep.L,
                    "trials": rep.trials,
                    "seed": seed,
                    "theta_hat": rep.theta_hat,
                    "theta_err": rep.theta_err,
                    "tau_hat": rep.tau_hat,
                    "tau_err": rep.tau_err,
                    "pi_hat": rep.pi_hat,
                    "pi_err": rep.pi_err,
                    "p_double": rep.p_double,
                    "pi_squared": rep.pi_squared,
                    "lhs": rep.lhs,
                    "rhs": rep.rhs,
                    "margin": rep.margin,
                }
            )
    return rows


_DISPATCH = {
    "swap": _cmd_swap,
    "chain": _cmd_chain,
    "square": _cmd_square,
    "recursion": _cmd_recursion,
    "percolate": _cmd_percolate,
    "compare": _cmd_compare,
}


# --- output ---------------------------------------------------------------------

def _format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render(rows: list[Row], fmt: str) -> str:
    if not rows:
        return "\n"
    headers = list(rows[0].keys())
    if fmt == "json":
        payload = [
            {h: (row[h] if not isinstance(row[h], float) else float(format(row[h], ".17g")))
             for h in headers}
            for row in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    lines = [",".join(headers)]
    lines.extend(",".join(_format_value(row[h]) for h in headers) for row in rows)
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        rows = _DISPATCH[cfg["command"]](cfg)
        text = render(rows, cfg["format"])
    except InfeasibleRegimeError as exc:
        print(f"entnet: infeasible regime: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"entnet: {exc}", file=sys.stderr)
        return 2
    if cfg["out"] is None:
        sys.stdout.write(text)
    else:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
