"""Command-line interface for the Monte Carlo experiment harness."""

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import harness
from .channel import ScenarioConfig, desk_scenario, paper_scenario
from .errors import ConfigurationError, NumericalError
from .optimizer import OptimizerConfig
from .types import SystemDims

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

PROFILE_TRIALS = {"desk": 100, "paper": 1000}


def _check_keys(section: dict, allowed, where: str):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigurationError(f"unknown keys in {where}: {sorted(unknown)}")


def _scenario_from_dict(base: ScenarioConfig, section: dict) -> ScenarioConfig:
    allowed = {f.name for f in dataclasses.fields(ScenarioConfig)}
    _check_keys(section, allowed, "config section 'scenario'")
    section = dict(section)
    if "dims" in section:
        dims_dict = section.pop("dims")
        _check_keys(dims_dict, {f.name for f in dataclasses.fields(SystemDims)},
                    "config section 'scenario.dims'")
        section["dims"] = dataclasses.replace(base.dims, **dims_dict)
    for key in ("bs_pos", "irs_pos", "ue_center"):
        if key in section:
            section[key] = tuple(section[key])
    return dataclasses.replace(base, **section)


def _optimizer_from_dict(section: dict) -> OptimizerConfig:
    allowed = {f.name for f in dataclasses.fields(OptimizerConfig)}
    _check_keys(section, allowed, "config section 'optimizer'")
    return OptimizerConfig(**section)


SWEEP_KEYS = {"grid", "trials", "include_continuous"}


def load_config(path: str | None, profile: str):
    base = desk_scenario() if profile == "desk" else paper_scenario()
    optimizer = OptimizerConfig()
    sweep = {}
    if path is not None:
        with open(path) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"invalid JSON in {path}: {exc}") from exc
        _check_keys(raw, {"scenario", "optimizer", "sweep"}, "config file")
        base = _scenario_from_dict(base, raw.get("scenario", {}))
        optimizer = _optimizer_from_dict(raw.get("optimizer", {}))
        sweep = raw.get("sweep", {})
        _check_keys(sweep, SWEEP_KEYS, "config section 'sweep'")
    return base, optimizer, sweep


def _add_common(parser):
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
    parser.add_argument("--out", default="results.csv", help="output CSV path")
    parser.add_argument("--profile", choices=("desk", "paper"), default="desk")
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsbf",
        description="Joint IRS beamforming Monte Carlo experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep-nmse", "sweep-power", "sweep-irs-position"):
        p = sub.add_parser(name)
        _add_common(p)
    p = sub.add_parser("summarize")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="optional CSV path for the summary")
    p.add_argument("csv", help="results CSV to aggregate")
    return parser


def _run_command(args) -> int:
    scenario, optimizer, sweep_cfg = load_config(args.config, args.profile)
    trials = args.trials or sweep_cfg.get("trials") or PROFILE_TRIALS[args.profile]
    include_continuous = bool(sweep_cfg.get("include_continuous", False))

    if args.command == "run":
        tasks = [
            (scenario, optimizer, harness.trial_seed(args.seed, t), "single",
             scenario.nmse, include_continuous)
            for t in range(trials)
        ]
        n = harness._write_records(args.out, harness._execute_trials(tasks, args.threads))
    else:
        sweep_fn = {
            "sweep-nmse": harness.sweep_nmse,
            "sweep-power": harness.sweep_power,
            "sweep-irs-position": harness.sweep_irs_position,
        }[args.command]
        kwargs = dict(
            trials=trials, master_seed=args.seed, out_path=args.out,
            threads=args.threads, include_continuous=include_continuous,
        )
        if "grid" in sweep_cfg:
            kwargs["grid"] = tuple(sweep_cfg["grid"])
        n = sweep_fn(scenario, optimizer, **kwargs)
    print(f"wrote {n} records to {args.out}")
    return EXIT_OK


def _summarize_command(args) -> int:
    rows = harness.summarize(args.csv)
    header = ["sweep_name", "sweep_value", "method", "bits", "n", "mean_wsr", "ci95"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(row[h]) for h in header))
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "summarize":
            return _summarize_command(args)
        return _run_command(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
