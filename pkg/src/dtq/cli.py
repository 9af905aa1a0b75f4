"""Command-line front end.

Subcommands: ``solve`` (one run, density CSV), ``converge`` (error ladder and
fitted slopes), ``bench`` (wall-time vs error over methods), ``compare-fp``
(quadrature vs finite differences on a shared grid), ``list-problems``.

Settings resolve in precedence order: command-line flag, then a key=value
config file (``--config``), then built-in defaults.  Exit codes: 0 success,
1 numeric failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import DtqError, InvalidParams
from .grid import DOMAIN_LOG
from .harness import (
    ALL_METHODS,
    DEFAULT_H_LADDER,
    DTQ_ASSEMBLY,
    EXTENDED_H_LADDER,
    run_benchmark,
    run_convergence,
    solve_once,
    write_benchmark_csv,
    write_convergence_csv,
)
from .problems import get_problem, problem_names

DEFAULTS = {
    "rho": 0.75,
    "r1": 1.0,
    "domain": "poly",
    "epsilon": 2.0,
    "method": "dtq-naive",
    "kappa": 1.0,
    "drop_tol": 2.2e-16,
    "reps": 5,
    "extended": False,
}

_FLOAT_KEYS = ("h", "rho", "r1", "epsilon", "kappa", "drop_tol")
_INT_KEYS = ("reps",)
_BOOL_KEYS = ("extended",)


def _read_config(path: str) -> dict:
    cfg = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise InvalidParams(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                cfg[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise InvalidParams(f"cannot read config file {path}: {exc}") from exc
    return cfg


def _coerce(key: str, value):
    if not isinstance(value, str):
        return value
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_KEYS:
        return int(value)
    if key in _BOOL_KEYS:
        return value.lower() in ("1", "true", "yes", "on")
    return value


class Settings:
    """Flag values merged over config-file values merged over defaults."""

    def __init__(self, args: argparse.Namespace, **default_overrides):
        self._args = vars(args)
        self._overrides = default_overrides
        cfg_path = self._args.get("config")
        self._cfg = _read_config(cfg_path) if cfg_path else {}

    def get(self, key: str, default=None):
        value = self._args.get(key)
        if value is None and key in self._cfg:
            value = _coerce(key, self._cfg[key])
        if value is None:
            value = self._overrides.get(key, DEFAULTS.get(key, default))
        return value

    def require(self, key: str):
        value = self.get(key)
        if value is None:
            raise InvalidParams(f"--{key.replace('_', '-')} is required")
        return value

    def domain_rule(self) -> Optional[str]:
        # "poly" resolves per problem (bounded supports get the pi/2 grid)
        domain = self.get("domain")
        if domain == "poly":
            return None
        if domain == "log":
            return DOMAIN_LOG
        raise InvalidParams(f"unknown domain {domain!r}; expected poly or log")

    def ladder(self) -> Optional[list[float]]:
        h = self._args.get("h")
        if h is None and "h" in self._cfg:
            h = [float(tok) for tok in self._cfg["h"].split(",") if tok.strip()]
        if h is None:
            ladder = list(DEFAULT_H_LADDER)
            if self.get("extended"):
                print(
                    "warning: extended ladder includes h down to 0.001; "
                    "expect a long runtime",
                    file=sys.stderr,
                )
                ladder += list(EXTENDED_H_LADDER)
            return ladder
        return h


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", default=None, help="problem name (see list-problems)")
    p.add_argument("--rho", type=float, default=None, help="spatial exponent in k = r1*h^rho (default 0.75)")
    p.add_argument("--r1", type=float, default=None, help="spatial prefactor in k = r1*h^rho (default 1)")
    p.add_argument("--domain", choices=("poly", "log"), default=None,
                   help="domain half-width rule: polynomial (default) or logarithmic")
    p.add_argument("--epsilon", type=float, default=None,
                   help="epsilon >= 1 for the logarithmic domain rule (default 2)")
    p.add_argument("--kappa", type=float, default=None,
                   help="heat-kernel diffusivity for the fp method (default 1)")
    p.add_argument("--drop-tol", dest="drop_tol", type=float, default=None,
                   help="banded assembly drop tolerance (default 2.2e-16)")
    p.add_argument("--out", default=None, help="output CSV path")
    p.add_argument("--config", default=None, help="key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtq",
        description="Track the density of a scalar SDE by quadrature time stepping.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="one run, density written as CSV")
    _add_common(p)
    p.add_argument("--h", type=float, default=None, help="temporal step")
    p.add_argument("--method", choices=ALL_METHODS, default=None)

    p = sub.add_parser("converge", help="error ladder and fitted slopes for one problem")
    _add_common(p)
    p.add_argument("--h", type=float, action="append", default=None,
                   help="ladder step; repeat to give a custom ladder")
    p.add_argument("--method", choices=ALL_METHODS, default=None)
    p.add_argument("--extended", action="store_true", default=None,
                   help="extend the default ladder down to h = 0.001")

    p = sub.add_parser("bench", help="wall-time vs error over solver variants")
    _add_common(p)
    p.add_argument("--h", type=float, action="append", default=None,
                   help="ladder step; repeat to give a custom ladder")
    p.add_argument("--method", action="append", choices=ALL_METHODS, default=None,
                   help="method to include; repeat to benchmark a subset (default: all)")
    p.add_argument("--reps", type=int, default=None, help="timing repetitions (default 5)")
    p.add_argument("--extended", action="store_true", default=None)

    p = sub.add_parser("compare-fp", help="quadrature vs Fokker-Planck on a shared grid")
    _add_common(p)
    p.add_argument("--h", type=float, default=None, help="temporal step (default 0.01)")
    p.add_argument("--method", choices=sorted(DTQ_ASSEMBLY), default=None,
                   help="quadrature variant to compare against fp (default dtq-sparse)")
    p.add_argument("--reps", type=int, default=None)

    sub.add_parser("list-problems", help="print the builtin problem names")
    return parser


def _cmd_solve(s: Settings) -> int:
    problem = get_problem(s.require("problem"))
    method = s.get("method")
    h = float(s.require("h"))
    out = s.get("out") or f"density_{problem.name}_{method}_h{h:g}.csv"
    sol = solve_once(
        problem, method, h, out,
        rho=s.get("rho"), r1=s.get("r1"),
        domain_rule=s.domain_rule(), epsilon=s.get("epsilon"),
        kappa=s.get("kappa"), drop_tol=s.get("drop_tol"),
    )
    print(f"wrote {out} ({sol.grid.num_nodes} nodes); "
          f"normalization defect {sol.normalization_defect:.3e}")
    return 0


def _cmd_converge(s: Settings) -> int:
    problem = get_problem(s.require("problem"))
    table = run_convergence(
        problem, h_list=s.ladder(),
        rho=s.get("rho"), r1=s.get("r1"),
        domain_rule=s.domain_rule(), epsilon=s.get("epsilon"),
        method=s.get("method"), kappa=s.get("kappa"), drop_tol=s.get("drop_tol"),
    )
    out = s.get("out") or f"converge_{problem.name}.csv"
    write_convergence_csv(table, out)
    for r in table.rows:
        print(f"h={r.h:<8g} M={r.M:<6d} l1={r.l1:.6e} linf={r.linf:.6e} ks={r.ks:.6e}")
    if table.slopes is not None:
        print("fitted slopes: " + "  ".join(f"{n}={v:.4f}" for n, v in table.slopes.items()))
    print(f"wrote {out}")
    return 0


def _cmd_bench(s: Settings) -> int:
    problem = get_problem(s.require("problem"))
    methods = s.get("method") or list(ALL_METHODS)
    if isinstance(methods, str):
        methods = [tok.strip() for tok in methods.split(",") if tok.strip()]
    records = run_benchmark(
        problem, h_list=s.ladder(), methods=methods,
        rho=s.get("rho"), r1=s.get("r1"),
        domain_rule=s.domain_rule(), epsilon=s.get("epsilon"),
        repetitions=int(s.get("reps")), kappa=s.get("kappa"), drop_tol=s.get("drop_tol"),
    )
    out = s.get("out") or f"bench_{problem.name}.csv"
    write_benchmark_csv(records, out)
    for r in records:
        print(f"h={r.h:<8g} {r.method:<13s} l1={r.l1:.6e} wall={r.wall_seconds:.6f}s")
    print(f"wrote {out}")
    return 0


def _cmd_compare_fp(s: Settings) -> int:
    problem = get_problem(s.require("problem"))
    method = s.get("method")
    if method not in DTQ_ASSEMBLY:
        raise InvalidParams(f"--method must be a quadrature variant, got {method!r}")
    h = float(s.get("h") or 0.01)
    records = run_benchmark(
        problem, h_list=[h], methods=[method, "fp"],
        rho=s.get("rho"), r1=s.get("r1"),
        domain_rule=s.domain_rule(), epsilon=s.get("epsilon"),
        repetitions=int(s.get("reps")), kappa=s.get("kappa"), drop_tol=s.get("drop_tol"),
    )
    out = s.get("out") or f"compare_fp_{problem.name}.csv"
    write_benchmark_csv(records, out)
    for r in records:
        print(f"{r.method:<13s} l1={r.l1:.6e} wall={r.wall_seconds:.6f}s")
    print(f"wrote {out}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "list-problems":
        for name in problem_names():
            print(name)
        return 0

    try:
        if args.command == "solve":
            return _cmd_solve(Settings(args))
        if args.command == "converge":
            return _cmd_converge(Settings(args))
        if args.command == "bench":
            return _cmd_bench(Settings(args))
        if args.command == "compare-fp":
            return _cmd_compare_fp(Settings(args, method="dtq-sparse"))
        raise InvalidParams(f"unknown command {args.command!r}")
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except (InvalidParams, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DtqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
