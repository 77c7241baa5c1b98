"""Batch engine: seeded paired trials over the four schemes, the three
sweeps (NMSE, transmit power, IRS position) and CSV aggregation."""

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import ScenarioConfig, calibrate_error_variances, generate_scenario
from .errors import ConfigurationError
from .optimizer import (
    OptimizerConfig,
    run_baseline_fixed_irs,
    run_baseline_no_irs,
    run_joint_design,
)

CSV_HEADER = [
    "sweep_name", "sweep_value", "method", "bits", "seed",
    "wsr_bps_hz", "outer_iterations", "wall_time_ms",
]

METHODS = ("MM", "SCA", "FixedIRS", "NoIRS")


@dataclass(frozen=True)
class SweepRecord:
    sweep_name: str
    sweep_value: float
    method: str
    bits: int
    seed: int
    wsr: float
    outer_iterations: int
    wall_time_ms: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.wsr < 0:
            raise ConfigurationError("wsr must be nonnegative")

    def row(self) -> list:
        return [
            self.sweep_name, repr(float(self.sweep_value)), self.method, self.bits,
            self.seed, repr(float(self.wsr)), self.outer_iterations,
            repr(float(self.wall_time_ms)),
        ]


def trial_seed(master_seed: int, trial: int) -> int:
    """Stable per-trial seed derived from the master seed and trial index."""
    ss = np.random.SeedSequence([int(master_seed), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _run_one(runner, config, dims, est, err, P_t, omega, seed):
    rng = np.random.default_rng((seed, 1))
    t0 = time.perf_counter()
    result = runner(config, dims, est, err, P_t, omega, rng)
    dt_ms = (time.perf_counter() - t0) * 1e3
    return result, dt_ms


def run_trial(
    scenario: ScenarioConfig,
    optimizer: OptimizerConfig,
    seed: int,
    sweep_name: str = "single",
    sweep_value: float = 0.0,
    include_continuous: bool = False,
) -> list:
    """One paired trial: all schemes see the same scenario draw.

    Every scheme (and the continuous-phase variants, when requested) starts
    from an identically seeded initial state.
    """
    dims = scenario.dims
    rng_scn = np.random.default_rng((seed, 0))
    est, _, omega = generate_scenario(scenario, rng_scn)
    err = calibrate_error_variances(est, scenario.nmse, scenario)
    P_t = scenario.P_t_mw

    records = []

    def record(method, bits, result, dt_ms):
        records.append(
            SweepRecord(sweep_name, sweep_value, method, bits, seed,
                        max(result.wsr, 0.0), result.iterations, dt_ms)
        )

    for method in ("mm", "sca"):
        cfg = replace(optimizer, method=method, continuous_phases=False)
        result, dt = _run_one(run_joint_design, cfg, dims, est, err, P_t, omega, seed)
        record(method.upper(), dims.B, result, dt)
        if include_continuous and dims.B > 0:
            cfg_c = replace(optimizer, method=method, continuous_phases=True)
            result, dt = _run_one(run_joint_design, cfg_c, dims, est, err, P_t, omega, seed)
            record(method.upper(), 0, result, dt)

    result, dt = _run_one(run_baseline_fixed_irs, optimizer, dims, est, err, P_t, omega, seed)
    record("FixedIRS", dims.B, result, dt)
    result, dt = _run_one(run_baseline_no_irs, optimizer, dims, est, err, P_t, omega, seed)
    record("NoIRS", 0, result, dt)
    return records


def _trial_task(args):
    return run_trial(*args)


def _execute_trials(tasks, threads: int):
    if threads <= 1:
        for t in tasks:
            yield _trial_task(t)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(_trial_task, tasks)


def _write_records(out_path: str, record_batches) -> int:
    n = 0
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for batch in record_batches:
            for rec in batch:
                writer.writerow(rec.row())
                n += 1
            fh.flush()
    return n


def _sweep(
    sweep_name: str,
    scenarios,           # list of (sweep_value, ScenarioConfig)
    optimizer: OptimizerConfig,
    trials: int,
    master_seed: int,
    out_path: str,
    threads: int = 1,
    include_continuous: bool = False,
) -> int:
    tasks = [
        (cfg, optimizer, trial_seed(master_seed, t), sweep_name, value, include_continuous)
        for value, cfg in scenarios
        for t in range(trials)
    ]
    return _write_records(out_path, _execute_trials(tasks, threads))


def sweep_nmse(
    scenario: ScenarioConfig,
    optimizer: OptimizerConfig,
    trials: int,
    master_seed: int,
    out_path: str,
    grid=(0.0, 0.02, 0.05, 0.1),
    threads: int = 1,
    include_continuous: bool = False,
) -> int:
    scenarios = [(rho, replace(scenario, nmse=float(rho))) for rho in grid]
    return _sweep("nmse", scenarios, optimizer, trials, master_seed, out_path,
                  threads, include_continuous)


def sweep_power(
    scenario: ScenarioConfig,
    optimizer: OptimizerConfig,
    trials: int,
    master_seed: int,
    out_path: str,
    grid=(-10.0, 0.0, 10.0),
    threads: int = 1,
    include_continuous: bool = False,
) -> int:
    scenarios = [(p, replace(scenario, P_t_dbm=float(p))) for p in grid]
    return _sweep("power", scenarios, optimizer, trials, master_seed, out_path,
                  threads, include_continuous)


def sweep_irs_position(
    scenario: ScenarioConfig,
    optimizer: OptimizerConfig,
    trials: int,
    master_seed: int,
    out_path: str,
    grid=(50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0),
    threads: int = 1,
    include_continuous: bool = False,
) -> int:
    y_irs = scenario.irs_pos[1]
    scenarios = [(x, replace(scenario, irs_pos=(float(x), y_irs))) for x in grid]
    return _sweep("irs_position", scenarios, optimizer, trials, master_seed, out_path,
                  threads, include_continuous)


def read_records(csv_path: str) -> list:
    """Parse a results CSV back into records; raises on schema drift."""
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            missing = set(CSV_HEADER) - set(reader.fieldnames or [])
            raise ConfigurationError(
                f"CSV schema mismatch; missing columns: {sorted(missing)}"
            )
        out = []
        for row in reader:
            out.append(
                SweepRecord(
                    row["sweep_name"], float(row["sweep_value"]), row["method"],
                    int(row["bits"]), int(row["seed"]), float(row["wsr_bps_hz"]),
                    int(row["outer_iterations"]), float(row["wall_time_ms"]),
                )
            )
    return out


def summarize_records(records) -> list:
    """Mean and 95% CI (normal approximation) per sweep cell, deterministic order."""
    cells = {}
    for rec in records:
        key = (rec.sweep_name, rec.sweep_value, rec.method, rec.bits)
        cells.setdefault(key, []).append(rec.wsr)
    out = []
    for key in sorted(cells):
        vals = np.asarray(cells[key])
        n = len(vals)
        mean = float(np.mean(vals))
        ci = float(1.96 * np.std(vals, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        out.append(
            {
                "sweep_name": key[0], "sweep_value": key[1], "method": key[2],
                "bits": key[3], "n": n, "mean_wsr": mean, "ci95": ci,
            }
        )
    return out


def summarize(csv_path: str) -> list:
    return summarize_records(read_records(csv_path))
