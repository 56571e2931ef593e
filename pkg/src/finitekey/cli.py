"""Command-line interface.

Subcommands::

    finitekey rate        one optimized RateBreakdown
    finitekey threshold   N0 over a grid of error rates
    finitekey sweep       optimized rate over a log-spaced grid of N
    finitekey compare-pe  IPOVM vs CPOVM rates and relative improvement
    finitekey verify      oracle agreement suites and the Monte Carlo PE check

Exit codes: 0 success, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys

import numpy as np

from . import __version__
from ._validation import make_protocol
from .engine import (
    DEFAULT_EPS,
    DEFAULT_EPS_EC,
    DEFAULT_LEAK_FACTOR,
    find_threshold_n0,
    optimize_rate,
)
from .exceptions import BudgetError, DomainError, ThresholdNotFoundError
from .io import breakdown_row, serialize
from .verify import run_all

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive and finite, got {text}")
    return x


def _unit_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 <= x < 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1), got {text}")
    return x


def _common(multi: bool):
    p = argparse.ArgumentParser(add_help=False)
    nargs = "+" if multi else None
    p.add_argument("--protocol", choices=["bb84", "six-state", "d-bases"], nargs=nargs,
                   default=["bb84", "six-state"] if multi else "bb84")
    p.add_argument("--dimension", type=int, nargs=nargs, default=[2] if multi else 2)
    p.add_argument("--bound", choices=["vn", "min"], nargs=nargs,
                   default=["vn", "min"] if multi else "vn")
    p.add_argument("--pe", choices=["ipovm", "cpovm"], default="cpovm")
    p.add_argument("--yield", dest="yield_model", choices=["paper", "per-basis"], default="paper")
    p.add_argument("--qber", type=_unit_float, default=0.05)
    p.add_argument("--eps", type=_positive_float, default=DEFAULT_EPS)
    p.add_argument("--eps-ec", type=_positive_float, default=DEFAULT_EPS_EC)
    p.add_argument("--leak-factor", type=_positive_float, default=DEFAULT_LEAK_FACTOR)
    p.add_argument("--leak-at", choices=["worst-case", "measured"], default="worst-case")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return p


def _n_grid(p):
    p.add_argument("--n-min", type=_positive_float, default=1e3)
    p.add_argument("--n-max", type=_positive_float, default=1e12)
    p.add_argument("--n-points", type=int, default=19)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finitekey", description="Finite-key QKD rate engine.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rate", parents=[_common(False)], help="single optimized rate")
    p.add_argument("--signals", type=_positive_float, required=True)

    p = sub.add_parser("threshold", parents=[_common(True)], help="N0 vs QBER")
    p.add_argument("--q-min", type=_unit_float, default=0.002)
    p.add_argument("--q-max", type=_unit_float, default=0.038)
    p.add_argument("--q-points", type=int, default=10)

    p = sub.add_parser("sweep", parents=[_common(True)], help="rate vs N")
    _n_grid(p)

    p = sub.add_parser("compare-pe", parents=[_common(True)], help="IPOVM vs CPOVM")
    _n_grid(p)

    sub.add_parser("verify", parents=[_common(False)], help="run oracle checks")
    return parser


def _kwargs(args):
    if not args.eps_ec < args.eps:
        raise ConfigError(f"--eps-ec ({args.eps_ec}) must be below --eps ({args.eps})")
    return dict(eps_total=args.eps, eps_ec=args.eps_ec, model=args.yield_model,
                leak_factor=args.leak_factor, leak_at=args.leak_at)


def _grid_points(lo, hi, k, log=False):
    if k < 1:
        raise ConfigError("grid needs at least one point")
    if hi < lo:
        raise ConfigError(f"empty grid [{lo}, {hi}]")
    if k == 1:
        return np.array([lo])
    return np.logspace(math.log10(lo), math.log10(hi), k) if log else np.linspace(lo, hi, k)


def _protocols(args, pe=None):
    """Valid protocol specs for every requested (name, dimension) pair."""
    out = []
    for name, d in itertools.product(args.protocol, args.dimension):
        if name == "bb84" and d != 2:
            continue
        out.append(make_protocol(name, d, pe or args.pe))
    if not out:
        raise ConfigError("no valid protocol/dimension combination")
    return out


def cmd_rate(args):
    proto = make_protocol(args.protocol, args.dimension, args.pe)
    best, _ = optimize_rate(args.bound, proto, args.qber, args.signals, **_kwargs(args))
    return [breakdown_row(best)]


def cmd_threshold(args):
    rows = []
    kw = _kwargs(args)
    for proto in _protocols(args):
        for bound in args.bound:
            for Q in _grid_points(args.q_min, args.q_max, args.q_points):
                try:
                    n0, n0s = find_threshold_n0(bound, proto, float(Q), **kw)
                except ThresholdNotFoundError:
                    n0 = n0s = math.inf
                rows.append(dict(protocol=proto.name, dimension=proto.dimension, bound=bound,
                                 pe_scheme=proto.pe_scheme.value, Q=float(Q), N0=n0,
                                 N0_scaled=n0s))
    return rows


def cmd_sweep(args):
    rows = []
    kw = _kwargs(args)
    grid = _grid_points(args.n_min, args.n_max, args.n_points, log=True)
    for proto in _protocols(args):
        log_d = math.log2(proto.dimension)
        for bound in args.bound:
            for N in grid:
                rate = optimize_rate(bound, proto, args.qber, float(N), **kw).best.rate
                rows.append(dict(protocol=proto.name, dimension=proto.dimension, bound=bound,
                                 pe_scheme=proto.pe_scheme.value, Q=args.qber, N=float(N),
                                 N_scaled=float(N) * log_d, rate=rate,
                                 rate_scaled=rate / log_d, rate_clamped=max(rate, 0.0)))
    return rows


def cmd_compare_pe(args):
    rows = []
    kw = _kwargs(args)
    grid = _grid_points(args.n_min, args.n_max, args.n_points, log=True)
    for name in args.protocol:
        if name != "bb84" and name != "six-state":
            raise ConfigError("IPOVM is defined for bb84 and six-state only")
        ip = make_protocol(name, 2, "ipovm")
        cp = make_protocol(name, 2, "cpovm")
        for N in grid:
            r_ip = optimize_rate("vn", ip, args.qber, float(N), **kw).best.rate
            r_cp = optimize_rate("vn", cp, args.qber, float(N), **kw).best.rate
            imp = 100.0 * (r_cp / r_ip - 1.0) if r_ip > 0 else math.nan
            rows.append(dict(protocol=ip.name, Q=args.qber, N=float(N), rate_ipovm=r_ip,
                             rate_cpovm=r_cp, improvement_pct=imp))
    return rows


def cmd_verify(args):
    return run_all(seed=args.seed)


COMMANDS = {
    "rate": cmd_rate,
    "threshold": cmd_threshold,
    "sweep": cmd_sweep,
    "compare-pe": cmd_compare_pe,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows = COMMANDS[args.command](args)
    except (ConfigError, DomainError, BudgetError, ValueError) as exc:
        print(f"finitekey: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    data = serialize(rows, args.command, args.format)
    if args.out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    if args.command == "verify" and not all(r["passed"] for r in rows):
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
