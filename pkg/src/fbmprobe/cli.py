"""Command-line front end emitting plot-ready tables and reports.

Every output embeds a schema tag and the fully resolved run
configuration (CSV: ``#``-prefixed metadata lines before the header;
JSON: top-level fields), so any file can be regenerated byte-for-byte by
replaying its own config, see :func:`argv_from_config`.

Exit codes: 0 success, 2 bad arguments, 3 no coupling threshold where
one was requested, 4 Monte Carlo oracle validation failure.
"""

import argparse
import json
import math
import sys

import numpy as np

from .dephasing import Coupling, DephasingFamily, visibility
from .metrology import qfi_gamma
from .montecarlo import (EstimationRun, PathSpec, empirical_visibility,
                         mle_gamma, simulate_measurements)
from .optimize import (NoThresholdError, chernoff_table, helstrom_table,
                       maximize_gb_over_t, metric_map_table,
                       metric_time_window, optimized_metric_table,
                       threshold_lambda)
from .specfun import HurstPoint

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_THRESHOLD = 3
EXIT_ORACLE = 4

# default coupling list and pair family for the survey tables
HELSTROM_DEFAULT_LAMBDAS = (1e-2, 1e-1, 1.0, 10.0, 100.0)
CHERNOFF_DEFAULT_GAMMA1 = (1.2, 1.3, 1.4, 1.5, 1.6, 1.7)


class UsageError(Exception):
    pass


def _gamma_or_usage(value: float) -> HurstPoint:
    try:
        return HurstPoint(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _plain(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _emit(fmt: str, out: str | None, command: str, columns, rows, config):
    config = {"command": command, **{k: _plain(v) for k, v in config.items()}}
    if fmt == "csv":
        lines = [
            f"# schema: {command}/{SCHEMA_VERSION}",
            f"# config: {json.dumps(config, sort_keys=True)}",
            ",".join(columns),
        ]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "schema": f"{command}/{SCHEMA_VERSION}",
            "config": config,
            "columns": list(columns),
            "rows": [
                {c: _plain(v) for c, v in zip(columns, row)} for row in rows
            ],
        }
        text = json.dumps(payload, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands


def _run_qfi_map(args) -> int:
    for g in (args.gamma_min, args.gamma_max):
        _gamma_or_usage(g)
    if args.gamma_min >= args.gamma_max:
        raise UsageError("--gamma-min must be below --gamma-max")
    if args.lam <= 0.0:
        raise UsageError("--lambda must be > 0")
    gammas = np.linspace(args.gamma_min, args.gamma_max, args.resolution)
    t_res = args.t_resolution or args.resolution
    if args.t_min is None or args.t_max is None:
        lo, hi = metric_time_window(gammas, args.lam, args.q_power)
        t_min = args.t_min if args.t_min is not None else lo
        t_max = args.t_max if args.t_max is not None else hi
    else:
        t_min, t_max = args.t_min, args.t_max
    if not 0.0 < t_min < t_max:
        raise UsageError("need 0 < t-min < t-max")
    ts = np.geomspace(t_min, t_max, t_res)
    rows = metric_map_table(gammas, ts, args.lam, args.q_power)
    config = {
        "gamma_min": args.gamma_min, "gamma_max": args.gamma_max,
        "resolution": args.resolution, "t_resolution": t_res,
        "lambda": args.lam, "t_min": t_min, "t_max": t_max,
        "q_power": args.q_power,
    }
    _emit(args.format, args.out, "qfi-map",
          ("gamma", "t", "g_bures", "qfi"), rows, config)
    return EXIT_OK


def _run_qfi_opt(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if not 0.0 < args.lambda_min < args.lambda_max:
        raise UsageError("need 0 < lambda-min < lambda-max")
    rows = optimized_metric_table(args.samples, args.seed,
                                  args.lambda_min, args.lambda_max,
                                  exponent_power=args.q_power)
    config = {
        "samples": args.samples, "lambda_min": args.lambda_min,
        "lambda_max": args.lambda_max, "seed": args.seed,
        "q_power": args.q_power,
    }
    _emit(args.format, args.out, "qfi-opt",
          ("gamma", "lambda", "g_star", "tau_b"), rows, config)
    return EXIT_OK


def _run_helstrom(args) -> int:
    gamma1s = args.gamma1 or [1.2]
    lams = args.lam or list(HELSTROM_DEFAULT_LAMBDAS)
    for g in gamma1s:
        _gamma_or_usage(g)
    for g in (args.gamma2_min, args.gamma2_max):
        _gamma_or_usage(g)
    if args.gamma2_min >= args.gamma2_max:
        raise UsageError("--gamma2-min must be below --gamma2-max")
    gamma2s = np.linspace(args.gamma2_min, args.gamma2_max, args.resolution)
    rows = helstrom_table(gamma1s, gamma2s, lams,
                          exponent_power=args.q_power)
    config = {
        "gamma1": list(gamma1s), "gamma2_min": args.gamma2_min,
        "gamma2_max": args.gamma2_max, "resolution": args.resolution,
        "lambda": list(lams), "q_power": args.q_power,
    }
    _emit(args.format, args.out, "helstrom",
          ("gamma1", "gamma2", "lambda", "pe_min", "t_star"), rows, config)
    return EXIT_OK


def _run_chernoff(args) -> int:
    gamma1s = args.gamma1 or list(CHERNOFF_DEFAULT_GAMMA1)
    gamma2s = args.gamma2 or [g + 0.2 for g in gamma1s]
    if len(gamma1s) != len(gamma2s):
        raise UsageError("--gamma1 and --gamma2 must be given in pairs")
    for g1, g2 in zip(gamma1s, gamma2s):
        _gamma_or_usage(g1)
        _gamma_or_usage(g2)
        if g1 == g2:
            raise UsageError(f"cannot discriminate a pair with gamma1 == "
                             f"gamma2 == {g1}")
    if not 0.0 < args.lambda_min < args.lambda_max:
        raise UsageError("need 0 < lambda-min < lambda-max")
    if args.copies < 1:
        raise UsageError("--copies must be >= 1")
    lams = np.geomspace(args.lambda_min, args.lambda_max, args.resolution)
    rows = chernoff_table(list(zip(gamma1s, gamma2s)), lams, args.copies,
                          exponent_power=args.q_power)
    config = {
        "gamma1": list(gamma1s), "gamma2": list(gamma2s),
        "lambda_min": args.lambda_min, "lambda_max": args.lambda_max,
        "resolution": args.resolution, "copies": args.copies,
        "q_power": args.q_power,
    }
    _emit(args.format, args.out, "chernoff",
          ("gamma1", "gamma2", "lambda", "q_min", "s_star", "t_star",
           "pe_bound_n"), rows, config)
    return EXIT_OK


def _run_threshold(args) -> int:
    hp = _gamma_or_usage(args.gamma)
    if not 0.0 < args.lambda_min < args.lambda_max:
        raise UsageError("need 0 < lambda-min < lambda-max")
    lams = np.geomspace(args.lambda_min, args.lambda_max, args.resolution)
    lam_th = threshold_lambda(hp, lams, exponent_power=args.q_power)
    fam = DephasingFamily(hp, Coupling(lam_th), exponent_power=args.q_power)
    g_star = maximize_gb_over_t(fam).value
    config = {
        "gamma": args.gamma, "lambda_min": args.lambda_min,
        "lambda_max": args.lambda_max, "resolution": args.resolution,
        "q_power": args.q_power,
    }
    _emit(args.format, args.out, "threshold",
          ("gamma", "lambda_th", "g_star_at_threshold"),
          [(args.gamma, lam_th, g_star)], config)
    return EXIT_OK


def _run_mc_validate(args) -> int:
    hp = _gamma_or_usage(args.gamma)
    if not args.time > 0.0:
        raise UsageError("--time must be > 0")
    fam = DephasingFamily(hp, Coupling(args.lam), exponent_power=args.q_power)
    spec = PathSpec(steps=args.steps, horizon=args.time, seed=args.seed,
                    paths=args.paths)
    analytic = visibility(fam, args.time)
    empirical, se = empirical_visibility(fam, spec)
    diff = abs(empirical - analytic)
    ok = diff <= 4.0 * se
    config = {
        "gamma": args.gamma, "lambda": args.lam, "time": args.time,
        "q_power": args.q_power, "paths": args.paths, "steps": args.steps,
        "seed": args.seed,
    }
    _emit(args.format, args.out, "mc-validate",
          ("gamma", "lambda", "time", "analytic_p", "empirical_p",
           "std_err", "abs_diff", "status"),
          [(args.gamma, args.lam, args.time, analytic, empirical, se, diff,
            "pass" if ok else "fail")], config)
    return EXIT_OK if ok else EXIT_ORACLE


def _run_estimate(args) -> int:
    hp = _gamma_or_usage(args.gamma)
    fam = DephasingFamily(hp, Coupling(args.lam), exponent_power=args.q_power)
    if args.time is None:
        t = maximize_gb_over_t(fam).t_star
    else:
        if not args.time > 0.0:
            raise UsageError("--time must be > 0")
        t = args.time
    run = EstimationRun(hp, Coupling(args.lam), t, args.shots, args.trials,
                        args.seed, args.q_power)
    counts = simulate_measurements(run)
    res = mle_gamma(counts, run)
    qfi = qfi_gamma(fam, t)
    crb = 1.0 / (args.shots * qfi) if qfi > 0.0 else math.inf
    reg = res.estimates[res.regular]
    mean = float(reg.mean()) if len(reg) else math.nan
    eff = crb / res.variance if res.variance > 0.0 else math.nan
    config = {
        "gamma": args.gamma, "lambda": args.lam, "time": t,
        "shots": args.shots, "trials": args.trials, "seed": args.seed,
        "q_power": args.q_power,
    }
    _emit(args.format, args.out, "estimate",
          ("gamma", "lambda", "time", "shots", "trials", "mean_estimate",
           "sample_variance", "crb", "efficiency", "boundary_fraction"),
          [(args.gamma, args.lam, t, args.shots, args.trials, mean,
            res.variance, crb, eff, res.boundary_fraction)], config)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(sp):
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default="-", metavar="PATH")
    sp.add_argument("--q-power", type=int, choices=(1, 2), default=1,
                    dest="q_power",
                    help="coupling exponent convention in the dephasing "
                         "exponent (1: linear, 2: quadratic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fbmprobe",
        description="Qubit-probe characterization of fractional Brownian "
                    "dephasing noise",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    gdef = 1.0 + 1e-3
    gtop = 2.0 - 1e-3

    p = sub.add_parser("qfi-map",
                       help="Bures metric / QFI over a gamma x time grid "
                            "at fixed coupling")
    p.add_argument("--gamma-min", type=float, default=gdef)
    p.add_argument("--gamma-max", type=float, default=gtop)
    p.add_argument("--resolution", type=int, default=100)
    p.add_argument("--t-resolution", type=int, default=None)
    p.add_argument("--lambda", type=float, default=1.0, dest="lam")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_run_qfi_map)

    p = sub.add_parser("qfi-opt",
                       help="time-optimized metric for random "
                            "(gamma, coupling) samples")
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--lambda-min", type=float, default=1e-3)
    p.add_argument("--lambda-max", type=float, default=1e3)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_run_qfi_opt)

    p = sub.add_parser("helstrom",
                       help="time-minimized single-shot error over "
                            "parameter pairs")
    p.add_argument("--gamma1", type=float, action="append")
    p.add_argument("--gamma2-min", type=float, default=gdef)
    p.add_argument("--gamma2-max", type=float, default=gtop)
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--lambda", type=float, action="append", dest="lam")
    _add_common(p)
    p.set_defaults(func=_run_helstrom)

    p = sub.add_parser("chernoff",
                       help="time-minimized Chernoff quantity over a "
                            "coupling grid")
    p.add_argument("--gamma1", type=float, action="append")
    p.add_argument("--gamma2", type=float, action="append")
    p.add_argument("--lambda-min", type=float, default=1e-3)
    p.add_argument("--lambda-max", type=float, default=1e3)
    p.add_argument("--resolution", type=int, default=25)
    p.add_argument("--copies", type=int, default=1,
                   help="number of probe copies for the error-bound column")
    _add_common(p)
    p.set_defaults(func=_run_chernoff)

    p = sub.add_parser("threshold",
                       help="coupling threshold for one gamma (exit 3 when "
                            "none exists)")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda-min", type=float, default=1e-3)
    p.add_argument("--lambda-max", type=float, default=1e3)
    p.add_argument("--resolution", type=int, default=25)
    _add_common(p)
    p.set_defaults(func=_run_threshold)

    p = sub.add_parser("mc-validate",
                       help="Monte Carlo check of the analytic visibility "
                            "(exit 4 on mismatch)")
    p.add_argument("--gamma", type=float, default=1.5)
    p.add_argument("--lambda", type=float, default=1.0, dest="lam")
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--paths", type=int, default=10000)
    p.add_argument("--steps", type=int, default=512)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_run_mc_validate)

    p = sub.add_parser("estimate",
                       help="simulated maximum-likelihood estimation of "
                            "gamma against the Cramer-Rao bound")
    p.add_argument("--gamma", type=float, default=1.5)
    p.add_argument("--lambda", type=float, default=1.0, dest="lam")
    p.add_argument("--time", type=float, default=None,
                   help="measurement time; defaults to the metric's "
                        "optimum for the given parameters")
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_run_estimate)

    return parser


_REPLAY_FLAGS = {
    "qfi-map": [("gamma_min", "--gamma-min"), ("gamma_max", "--gamma-max"),
                ("resolution", "--resolution"),
                ("t_resolution", "--t-resolution"), ("lambda", "--lambda"),
                ("t_min", "--t-min"), ("t_max", "--t-max"),
                ("q_power", "--q-power")],
    "qfi-opt": [("samples", "--samples"), ("lambda_min", "--lambda-min"),
                ("lambda_max", "--lambda-max"), ("seed", "--seed"),
                ("q_power", "--q-power")],
    "helstrom": [("gamma1", "--gamma1"), ("gamma2_min", "--gamma2-min"),
                 ("gamma2_max", "--gamma2-max"),
                 ("resolution", "--resolution"), ("lambda", "--lambda"),
                 ("q_power", "--q-power")],
    "chernoff": [("gamma1", "--gamma1"), ("gamma2", "--gamma2"),
                 ("lambda_min", "--lambda-min"),
                 ("lambda_max", "--lambda-max"),
                 ("resolution", "--resolution"), ("copies", "--copies"),
                 ("q_power", "--q-power")],
    "threshold": [("gamma", "--gamma"), ("lambda_min", "--lambda-min"),
                  ("lambda_max", "--lambda-max"),
                  ("resolution", "--resolution"), ("q_power", "--q-power")],
    "mc-validate": [("gamma", "--gamma"), ("lambda", "--lambda"),
                    ("time", "--time"), ("paths", "--paths"),
                    ("steps", "--steps"), ("seed", "--seed"),
                    ("q_power", "--q-power")],
    "estimate": [("gamma", "--gamma"), ("lambda", "--lambda"),
                 ("time", "--time"), ("shots", "--shots"),
                 ("trials", "--trials"), ("seed", "--seed"),
                 ("q_power", "--q-power")],
}


def argv_from_config(config: dict) -> list[str]:
    """Rebuild the argument vector that regenerates a table from the
    config dictionary embedded in its output."""
    command = config["command"]
    argv = [command]
    for key, flag in _REPLAY_FLAGS[command]:
        if key not in config or config[key] is None:
            continue
        value = config[key]
        values = value if isinstance(value, list) else [value]
        for v in values:
            argv.extend([flag, repr(float(v)) if isinstance(v, float)
                         else str(v)])
    return argv


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        # domain validation (parameter ranges, grid shapes) is a usage
        # problem when the values came from the command line
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoThresholdError as exc:
        print(f"no threshold: {exc}", file=sys.stderr)
        return EXIT_NO_THRESHOLD


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
