"""Command-line front end: ``dsrisk <subcommand> ...``.

Exit codes: 0 success, 1 table verification mismatch, 2 usage error,
3 data error. The block period defaults to 600 s; ``--tau0`` overrides it,
and otherwise the ``DSRISK_TAU0`` environment variable does.
"""

import argparse
import json
import math
import os
import sys

from dsrisk import ingest, oracle, risk, tables
from dsrisk.errors import DataError, DomainError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_DATA = 3
TAU0_ENV = "DSRISK_TAU0"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _share(q):
    try:
        return risk.HashrateShare(q)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _z(z):
    try:
        return risk.check_confirmations(z)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _nonneg(name, value):
    if not math.isfinite(value) or value < 0:
        raise UsageError(f"{name} must be a finite non-negative number, got {value}")
    return value


def _resolve_tau0(flag, env):
    if flag is not None:
        value, source = flag, "--tau0"
    elif env.get(TAU0_ENV):
        source = TAU0_ENV
        try:
            value = float(env[TAU0_ENV])
        except ValueError:
            raise UsageError(f"{TAU0_ENV}={env[TAU0_ENV]!r} is not a number") from None
    else:
        return risk.DEFAULT_TAU0
    if not math.isfinite(value) or value <= 0:
        raise UsageError(f"{source} must be a positive number of seconds, got {value}")
    return value


def _dump(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _percent(probability):
    return f"{100.0 * probability:.10g}"


def _risk_report(record, out, as_json):
    probability = record["probability"]
    if as_json:
        _dump(record, out)
        return
    for key, value in record.items():
        out.write(f"{key:<12} {value!r}\n")
    out.write(f"{'percent':<12} {_percent(probability)}%\n")
    out.write(f"{'table cell':<12} {tables.format_cell(100.0 * probability)}\n")


def cmd_risk(args, env, out, err):
    z, share = _z(args.z), _share(args.q)
    tau0 = _resolve_tau0(args.tau0, env)
    if args.time is not None:
        timing = risk.timing_from(_nonneg("--time", args.time), z, share, tau0)
        r, kappa = timing.r, timing.kappa
    else:
        # use the r as typed; t / (z tau0) could round differently
        r = _nonneg("--r", args.r)
        kappa = share.p * r
    probability = risk.catchup_timed(z, share, kappa)
    record = {"z": z, "q": share.q, "r": r, "kappa": kappa, "tau0": tau0, "probability": probability}
    _risk_report(record, out, args.json)
    return EXIT_OK


def _axis(text, name):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name}-values must be comma-separated numbers") from None
    return values


def cmd_table(args, env, out, err):
    q_axis = _axis(args.q_values, "q") if args.q_values else tables.Q_AXIS
    r_axis = _axis(args.r_values, "r") if args.r_values else tables.R_AXIS
    try:
        zs = list(tables.FIXTURE_Z) if args.all else [_z(args.z)]
        grids = [tables.generate_table(z, q_axis, r_axis) for z in zs]
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    heading = {"csv": "# z={}\n", "markdown": "### z = {}\n\n", "latex": "% z={}\n"}[args.format]
    for k, grid in enumerate(grids):
        if args.all:
            out.write(("\n" if k else "") + heading.format(grid.z))
        out.write(tables.emit(grid, args.format))
    return EXIT_OK


def cmd_verify(args, env, out, err):
    if args.tolerance is not None and (not math.isfinite(args.tolerance) or args.tolerance < 0):
        raise UsageError("--tolerance must be a non-negative number of percentage points")
    tolerance = tables.DEFAULT_TOLERANCE if args.tolerance is None else args.tolerance
    if args.z is not None:
        if args.z not in tables.FIXTURE_Z:
            raise UsageError(f"reference tables exist for z=1..9, not z={args.z}")
        zs = [args.z]
    else:
        zs = list(tables.FIXTURE_Z)
    compared = failed = 0
    for z in zs:
        report = tables.compare_fixture(tables.generate_table(z), tables.load_fixture(z), tolerance)
        compared += report.compared
        failed += len(report.mismatches)
        status = "ok" if report.ok else "MISMATCH"
        out.write(
            f"z={z}: {report.compared - len(report.mismatches)}/{report.compared} cells "
            f"within {tolerance:g} pp, max |delta| {report.max_abs_delta:.6f} [{status}]\n"
        )
        for r, q, computed, printed, delta in report.mismatches:
            out.write(f"  r={r:g} q={q:g}: computed {computed:.6f} vs printed {printed} (delta {delta:+.6f})\n")
    out.write(f"total: {compared} cells compared, {failed} mismatches\n")
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


def cmd_simulate(args, env, out, err):
    z, share = _z(args.z), _share(args.q)
    if args.time_free and args.r is not None:
        raise UsageError("--r and --time-free are mutually exclusive")
    if not args.time_free and args.r is None:
        raise UsageError("simulate needs --r R for a timed race, or --time-free")
    kappa = None if args.time_free else share.p * _nonneg("--r", args.r)
    try:
        config = oracle.TrialConfig(
            trials=args.trials, seed=args.seed, max_deficit=args.max_deficit, kappa=kappa
        )
        outcome = oracle.simulate_race(z, share, config, workers=args.workers)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    exact = risk.catchup_time_free(z, share) if kappa is None else risk.catchup_timed(z, share, kappa)
    record = {
        "z": z,
        "q": share.q,
        "mode": config.mode,
        "kappa": kappa,
        "seed": args.seed,
        "trials": outcome.trials,
        "successes": outcome.successes,
        "estimate": outcome.estimate,
        "std_error": outcome.std_error,
        "truncation_bias_bound": outcome.truncation_bias_bound,
        "closed_form": exact,
    }
    if args.json:
        _dump(record, out)
    else:
        for key, value in record.items():
            out.write(f"{key:<22} {value!r}\n")
    return EXIT_OK


def cmd_confirmations(args, env, out, err):
    share = _share(args.q)
    r = _nonneg("--r", args.r)
    if not 0.0 < args.target < 1.0:
        raise UsageError(f"--target must lie strictly between 0 and 1, got {args.target}")
    z = risk.min_confirmations(share, r, args.target)
    probability = None if z is None else risk.table_probability(z, share, r)
    if args.json:
        _dump({"q": share.q, "r": r, "target": args.target, "z": z, "probability": probability}, out)
    elif z is None:
        out.write(f"target {args.target!r} not reached within {risk.MAX_CONFIRMATIONS} confirmations\n")
    else:
        out.write(f"z = {z} (probability {probability!r}, {_percent(probability)}%)\n")
    return EXIT_OK


def cmd_ingest(args, env, out, err):
    z, share = _z(args.z), _share(args.q)
    tau0 = _resolve_tau0(args.tau0, env)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {args.file}: {exc}") from None
    stamps = ingest.parse_stamps(text, args.format)
    window = ingest.elapsed_for_confirmations(stamps, z)
    if window.clamped:
        err.write(
            f"warning: block {window.last_height} is timestamped before block "
            f"{window.first_height}; elapsed time clamped to 0, which understates the risk\n"
        )
    timing = risk.timing_from(window.t, z, share, tau0)
    probability = risk.catchup_timed(z, share, timing.kappa)
    record = {
        "z": z,
        "q": share.q,
        "first_height": window.first_height,
        "last_height": window.last_height,
        "t": window.t,
        "clamped": window.clamped,
        "r": timing.r,
        "kappa": timing.kappa,
        "tau0": tau0,
        "probability": probability,
    }
    _risk_report(record, out, args.json)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="dsrisk", description="Double-spend catch-up risk for proof-of-work confirmations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("risk", help="catch-up probability after z confirmations that took a given time")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--q", type=float, required=True, help="attacker hashrate share, 0 < q < 0.5")
    when = p.add_mutually_exclusive_group(required=True)
    when.add_argument("--time", type=float, help="seconds the z confirmations took")
    when.add_argument("--r", type=float, help="pace ratio t / (z tau0)")
    p.add_argument("--tau0", type=float, help="network block period in seconds (default 600)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("table", help="risk table on the standard r/q grid")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--z", type=int)
    which.add_argument("--all", action="store_true", help="tables for z = 1..9")
    p.add_argument("--format", choices=tables.FORMATS, default="csv")
    p.add_argument("--q-values", help="comma-separated q axis instead of 0.02..0.26")
    p.add_argument("--r-values", help="comma-separated r axis instead of 0.1..3.5")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="compare computed tables with the reference tables")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--z", type=int)
    which.add_argument("--all", action="store_true", help="all of z = 1..9 (the default)")
    p.add_argument("--tolerance", type=float, help="percentage points (default 0.005)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the catch-up probability")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--r", type=float, help="pace ratio for a timed race")
    p.add_argument("--time-free", action="store_true", help="race without conditioning on time")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-deficit", type=int, default=200)
    p.add_argument("--workers", type=int, help="threads (default: CPU count)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("confirmations", help="fewest confirmations that keep the risk below a target")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--target", type=float, required=True, help="acceptable probability, e.g. 0.001")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_confirmations)

    p = sub.add_parser("ingest", help="risk from a file of block timestamps")
    p.add_argument("--file", required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--format", choices=("csv", "json_lines"), default="csv")
    p.add_argument("--tau0", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ingest)
    return parser


def run(argv, env=None, stdout=None, stderr=None):
    """Run one invocation and return its exit code."""
    env = os.environ if env is None else env
    out = sys.stdout if stdout is None else stdout
    err = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, env, out, err)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except DataError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DATA
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))
