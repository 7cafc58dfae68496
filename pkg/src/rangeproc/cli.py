"""Command line: ``rangeproc {simulate,range,inverse,verify}``.

Exit codes: 0 success/pass, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import experiment as exp
from .asymptotics import theta_ladder
from .extrema import running_extrema, write_extrema_csv
from .inverse import Convention, MonotonePath, inverse_values, write_inverse_csv, write_theta_csv
from .paths import DomainError, read_path_csv, write_path_csv, write_sequence_csv
from .simulate import ProcessSpec, simulate, simulate_walk


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@contextmanager
def _open_out(dest: str | None):
    if dest in (None, "-"):
        yield sys.stdout
    else:
        with open(dest, "w", newline="") as fh:
            yield fh


def _read_path(src: str):
    if src == "-":
        return read_path_csv(sys.stdin)
    return read_path_csv(src)


def _spec_from_args(args) -> ProcessSpec:
    if args.config:
        return ProcessSpec.from_config(Path(args.config).read_text())
    if args.process is None:
        raise UsageError("--process is required (or --config)")
    if args.seed is None:
        raise UsageError("--seed is required; stochastic commands never pick entropy")
    if args.horizon is None:
        raise UsageError("--horizon is required")
    return ProcessSpec.from_token(args.process, args.horizon, args.step, args.seed)


def _add_spec_flags(p):
    p.add_argument("--process", help="bm | drift:<eta> | mbm:<n> | bessel:<n> | besselsde:<n> "
                   "| pnorm:<n>:<p|inf> | walk:<p> | renewal:<family:params> | fn:<bank id>")
    p.add_argument("--horizon", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="flat key = value process description")


def cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    if args.save_config:
        Path(args.save_config).write_text(spec.to_config())
    if spec.kind == "nn_walk":
        x = simulate_walk(spec, args.replica)
        with _open_out(args.out) as fh:
            if args.format == "json":
                json.dump({"n": list(range(len(x))), "value": x.values.tolist()}, fh)
                fh.write("\n")
            else:
                write_sequence_csv(x, fh)
        return 0
    paths = simulate(spec, args.replica)
    if not isinstance(paths, list):
        paths = [paths]
    for i, path in enumerate(paths):
        dest = args.out
        if len(paths) > 1:
            if dest in (None, "-"):
                raise UsageError("multidimensional output needs --out (one file per coordinate)")
            p = Path(dest)
            dest = str(p.with_name(f"{p.stem}_{i + 1}{p.suffix}"))
        with _open_out(dest) as fh:
            if args.format == "json":
                json.dump({"t": path.times.tolist(), "value": path.values.tolist()}, fh)
                fh.write("\n")
            else:
                write_path_csv(path, fh)
    return 0


def cmd_range(args) -> int:
    triple = running_extrema(_read_path(args.input))
    with _open_out(args.out) as fh:
        if args.format == "json":
            json.dump({"t": triple.source.times.tolist(),
                       "value": triple.source.values.tolist(),
                       "sup": triple.sup_path.values.tolist(),
                       "inf": triple.inf_path.values.tolist(),
                       "range": triple.range_path.values.tolist()}, fh)
            fh.write("\n")
        else:
            write_extrema_csv(triple, fh)
    return 0


def cmd_inverse(args) -> int:
    path = _read_path(args.input)
    if args.levels:
        try:
            levels = np.array([float(x) for x in args.levels.split(",")])
        except ValueError:
            raise UsageError(f"bad --levels {args.levels!r}") from None
    else:
        levels = None
    with _open_out(args.out) as fh:
        if args.of == "range":
            triple = running_extrema(path)
            if levels is None:
                levels, times = theta_ladder(triple, args.ladder)
            else:
                if np.any(levels < 0):
                    raise DomainError("range levels must be non-negative")
                times = inverse_values(MonotonePath(triple.range_path), levels)
            write_theta_csv(levels, times, fh)
        else:
            if levels is None:
                raise UsageError("--levels is required for --of path")
            xs = inverse_values(MonotonePath(path), levels, Convention(args.convention))
            write_inverse_csv(levels, xs, fh)
    return 0


def cmd_verify(args) -> int:
    if args.manifest and args.bundled:
        raise UsageError("give a manifest file or --bundled, not both")
    if args.manifest:
        m = exp.ExperimentManifest.load(args.manifest)
    elif args.bundled:
        m = exp.ExperimentManifest.bundled(args.bundled)
    else:
        spec = _spec_from_args(args)
        checks = tuple((args.checks or "range_slope").split(","))
        m = exp.ExperimentManifest(name=args.name, spec=spec, checks=checks)
    overrides = {}
    if args.replicas is not None:
        overrides["replicas"] = args.replicas
    if args.psi is not None:
        overrides["psi"] = args.psi
    if args.tail is not None:
        overrides["tail_fraction"] = args.tail
    if overrides:
        m = dataclasses.replace(m, **overrides)
    report = exp.run_manifest(m, jobs=args.jobs, timestamp=not args.no_timestamp)
    fmt = args.format or m.output_format
    dest = args.out or m.output
    with _open_out(dest) as fh:
        if fmt == "csv":
            exp.write_report_csv(report, fh)
        else:
            fh.write(exp.dumps(report))
    for chk in report["checks"]:
        print(f"{'PASS' if chk['passed'] else 'FAIL'} {chk['check']}", file=sys.stderr)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rangeproc", description="Simulate processes, compute ranges "
                     "and first range times, and run long-run slope checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a process and write its path")
    _add_spec_flags(p)
    p.add_argument("--replica", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--save-config", help="also write the process as a key = value file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("range", help="running sup, inf and range of a path CSV")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("inverse", help="first range times or generalized inverse of a path")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--of", choices=("range", "path"), default="range")
    p.add_argument("--levels", help="comma-separated levels")
    p.add_argument("--ladder", type=int, default=20, help="ladder size when --levels is absent")
    p.add_argument("--convention", choices=("strict", "weak"), default="strict")
    p.add_argument("--out")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("verify", help="run an experiment manifest")
    p.add_argument("manifest", nargs="?")
    p.add_argument("--bundled", choices=exp.BUNDLED)
    _add_spec_flags(p)
    p.add_argument("--checks", help=f"comma-separated subset of {','.join(exp.CHECK_IDS)}")
    p.add_argument("--name", default="adhoc")
    p.add_argument("--replicas", type=int)
    p.add_argument("--psi", help="t | sqrt | custom:<bank id>")
    p.add_argument("--tail", type=float)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("a subcommand is required: simulate, range, inverse or verify")
        return args.func(args)
    except (UsageError, DomainError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"rangeproc: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
