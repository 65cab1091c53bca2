"""Command-line interface: ``strongci <subcommand> [flags]``.

Exit codes: 0 success, 1 data or runtime error, 2 usage error.

CSV outputs start with one ``# provenance: {...}`` comment line holding every
parameter needed to regenerate the file; JSON outputs carry the same record
under the ``"provenance"`` key.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import io
import json
import math
import os
import sys
import tempfile

from . import __version__, confseq
from .ar1_model import MAX_SEED, Ar1Config, path_from_values, read_path_csv, simulate_path
from .baselines import simulate_unit_root_quantiles
from .errors import StrongCIError
from .harness import ExperimentConfig, run_coverage_experiment, run_figure_curve, run_table_experiment, single_path_table
from .martingale import MixtureParams, alpha_grid, martingale_curve


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _finite(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return value


def _positive(text):
    value = _finite(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return value


def _level(text):
    value = _finite(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text!r}")
    return value


def fmt(value) -> str:
    """Shortest round-trip text for CSV cells."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def provenance(args, command, **extra):
    record = {"tool": "strongci", "version": __version__, "command": command}
    record.update({k: v for k, v in vars(args).items() if k not in ("func", "output", "command")})
    record.update(extra)
    return record


def _file_digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


@contextlib.contextmanager
def _output(path):
    """Text sink that only materializes ``path`` if the block succeeds."""
    if path is None or path == "-":
        buf = io.StringIO()
        yield buf
        sys.stdout.write(buf.getvalue())
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".strongci-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def write_csv(fh, header, rows, prov):
    fh.write("# provenance: " + json.dumps(prov, sort_keys=True) + "\n")
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(fmt(v) for v in row) + "\n")


def _load_values(path):
    with open(path, encoding="utf-8") as fh:
        return read_path_csv(fh)


def cmd_simulate(args):
    config = Ar1Config(args.alpha, args.y0, args.t, args.seed)
    path = simulate_path(config)
    with _output(args.output) as fh:
        write_csv(fh, ("t", "y"), path.csv_rows(),
                  provenance(args, "simulate", innovations="gaussian", sampler="numpy PCG64 ziggurat"))


def cmd_analyze(args):
    values = _load_values(args.input)
    if len(values) < 2:
        raise StrongCIError("input holds only y_0; need at least one observation")
    prov = provenance(args, "analyze", input_sha256=_file_digest(args.input))
    rows = (confseq.row_of(s) for s in confseq.run(values, MixtureParams(args.a), args.delta))
    with _output(args.output) as fh:
        write_csv(fh, confseq.STREAM_HEADER, rows, prov)


def cmd_curve(args):
    extra = {}
    if args.input:
        values = _load_values(args.input)
        extra["input_sha256"] = _file_digest(args.input)
        grid_spec = ExperimentConfig(alpha_true=args.alpha).grid_spec()
    else:
        config = ExperimentConfig(alpha_true=args.alpha, y0=args.y0, horizon=args.t, a=args.a,
                                  base_seed=args.seed, replications=1)
        grid_spec = config.grid_spec()
    lo = args.grid_lo if args.grid_lo is not None else grid_spec[0]
    hi = args.grid_hi if args.grid_hi is not None else grid_spec[1]
    step = args.grid_step if args.grid_step is not None else grid_spec[2]
    grid = alpha_grid(lo, hi, step)
    if args.input:
        curve = martingale_curve(values, MixtureParams(args.a), grid)
    else:
        config = ExperimentConfig(alpha_true=args.alpha, y0=args.y0, horizon=args.t, a=args.a,
                                  base_seed=args.seed, replications=1, alpha_grid=(lo, hi, step))
        curve = run_figure_curve(config)
    prov = provenance(args, "curve", grid=[lo, hi, step], **extra)
    with _output(args.output) as fh:
        write_csv(fh, ("alpha", "log_s"), curve.csv_rows(), prov)


def _experiment(args, reps):
    return ExperimentConfig(alpha_true=args.alpha, y0=args.y0, horizon=args.t, a=args.a,
                            delta=args.delta, replications=reps, base_seed=args.seed)


def cmd_table(args):
    config = _experiment(args, args.reps)
    rows = single_path_table(config)
    prov = provenance(args, "table", replication_seeding="SeedSequence(seed, spawn_key=(i,))",
                      weak_method=config.resolved_weak_method)
    if args.reps == 1:
        header = ("interval_type", "lower", "upper", "width")
        out = [(r.interval_type, r.lower, r.upper, r.width) for r in rows]
    else:
        report = run_table_experiment(config)
        header = ("interval_type", "lower", "upper", "width", "mean_width", "median_width",
                  "replications", "coverage_freq")
        weak, strong = rows
        out = [
            (weak.interval_type, weak.lower, weak.upper, weak.width,
             report.mean_weak_width, report.median_weak_width, report.replications, math.nan),
            (strong.interval_type, strong.lower, strong.upper, strong.width,
             report.mean_strong_width, report.median_strong_width, report.replications,
             report.coverage_freq),
        ]
        if args.report:
            with _output(args.report) as fh:
                fh.write(report.to_json(prov) + "\n")
    with _output(args.output) as fh:
        write_csv(fh, header, out, prov)


def cmd_coverage(args):
    report = run_coverage_experiment(_experiment(args, args.reps))
    with _output(args.output) as fh:
        fh.write(report.to_json(provenance(args, "coverage")) + "\n")


def cmd_quantiles(args):
    q = simulate_unit_root_quantiles(args.delta, args.grid, args.reps, args.seed)
    with _output(args.output) as fh:
        fh.write(q.to_json(provenance(args, "quantiles")) + "\n")


def cmd_predict(args):
    values = _load_values(args.input)
    state = confseq.final_state(values, MixtureParams(args.a), args.delta)
    if state.rejected:
        raise StrongCIError(
            f"model rejected at t <= {state.t}: running intersection is empty, no prediction possible"
        )
    pred = confseq.prediction_interval(state.running, state.stats.last_y, args.delta_pred)
    payload = {
        "provenance": provenance(args, "predict", input_sha256=_file_digest(args.input)),
        "t": state.t,
        "y_t": state.stats.last_y,
        "running_lower": state.running.lower,
        "running_upper": state.running.upper,
        "prediction_lower": pred.lower,
        "prediction_upper": pred.upper,
        "note": "per-alpha level 1 - delta_pred; no joint guarantee with the confidence sequence",
    }
    with _output(args.output) as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strongci",
        description="Strong (anytime-valid) confidence intervals for the AR(1) coefficient.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_flags(p, with_delta=True):
        p.add_argument("--alpha", type=_finite, default=0.8, help="true AR coefficient (default 0.8)")
        p.add_argument("--y0", type=_finite, default=0.0, help="initial value (default 0)")
        p.add_argument("--t", type=_positive_int, default=1000, help="horizon T (default 1000)")
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--a", type=_positive, default=0.1, help="mixture scale (default 0.1)")
        if with_delta:
            p.add_argument("--delta", type=_level, default=0.01, help="miscoverage (default 0.01)")

    def output_flag(p):
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")

    p = sub.add_parser("simulate", help="simulate an AR(1) path to t,y CSV")
    p.add_argument("--alpha", type=_finite, default=0.8)
    p.add_argument("--y0", type=_finite, default=0.0)
    p.add_argument("--t", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    output_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="stream a t,y CSV through the confidence sequence")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--a", type=_positive, default=0.1)
    p.add_argument("--delta", type=_level, default=0.01)
    output_flag(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("curve", help="final log capital over a grid of alpha values")
    model_flags(p, with_delta=False)
    p.add_argument("--input", "-i", default=None, help="t,y CSV instead of a simulated path")
    p.add_argument("--grid-lo", type=_finite, default=None)
    p.add_argument("--grid-hi", type=_finite, default=None)
    p.add_argument("--grid-step", type=_positive, default=None)
    output_flag(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("table", help="weak vs strong interval widths")
    model_flags(p)
    p.add_argument("--reps", type=_positive_int, default=1,
                   help="1 = single-path table; more adds Monte Carlo aggregates")
    p.add_argument("--report", default=None, help="also write the JSON report here (reps > 1)")
    output_flag(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("coverage", help="Monte Carlo coverage of the running intersection")
    model_flags(p)
    p.add_argument("--reps", type=_positive_int, default=2000)
    output_flag(p)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("quantiles", help="simulate unit-root law quantiles")
    p.add_argument("--delta", type=_level, default=0.01)
    p.add_argument("--reps", type=_positive_int, default=100_000)
    p.add_argument("--grid", type=_positive_int, default=1000, help="Brownian grid steps")
    p.add_argument("--seed", type=_seed, default=0)
    output_flag(p)
    p.set_defaults(func=cmd_quantiles)

    p = sub.add_parser("predict", help="union prediction interval for the next value")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--a", type=_positive, default=0.1)
    p.add_argument("--delta", type=_level, default=0.01)
    p.add_argument("--delta-pred", type=_level, default=0.05)
    output_flag(p)
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        args.func(args)
    except (StrongCIError, OSError) as exc:
        print(f"strongci {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry_point():
    sys.exit(main())
