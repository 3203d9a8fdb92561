"""Monte Carlo validation harness: solve real instances, compare to theory.

Sweeps a (sigma, lambda) grid, solving ``trials`` random instances per cell
and recording the measured normalized squared error next to the theoretical
prediction.  Every random draw comes from a substream keyed by
(master_seed, sigma index, lambda index, trial index), so runs are
bit-reproducible, cells are independent, and trials parallelize without
coordination.  Completed cells are appended to the output CSV as they
finish, so an interrupted sweep resumes from the last completed cell.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import BelowPhaseTransitionError
from .mapcalc import Geometry, predict_nse, tune
from .regularizers import L1
from .solver import ProblemInstance, nse, solve

UNIT_SIGNS = "unit_signs"
GAUSSIAN_AMPLITUDES = "gaussian_amplitudes"

CSV_HEADER = "sigma,lambda,mean_nse,stderr_nse,eta_pred,n_converged,trials"
# a cell with more than this fraction of non-converged trials is unreliable
_UNRELIABLE_FRACTION = 0.2


@dataclass
class ExperimentConfig:
    """Description of one validation sweep."""

    geometry: Geometry
    sigma_grid: list
    lambda_grid: list
    trials: int
    master_seed: int
    amplitude_law: str = UNIT_SIGNS
    solver_tol: float = 1e-12
    solver_max_iter: int = 50_000

    def __post_init__(self):
        self.sigma_grid = [float(s) for s in self.sigma_grid]
        self.lambda_grid = [float(l) for l in self.lambda_grid]
        for name, grid in (("sigma_grid", self.sigma_grid), ("lambda_grid", self.lambda_grid)):
            if not grid:
                raise ValueError(f"{name} must be nonempty")
            if any(not v > 0 for v in grid):
                raise ValueError(f"{name} entries must be strictly positive")
            if sorted(grid) != grid or len(set(grid)) != len(grid):
                raise ValueError(f"{name} must be strictly ascending")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.amplitude_law not in (UNIT_SIGNS, GAUSSIAN_AMPLITUDES):
            raise ValueError(f"unknown amplitude law {self.amplitude_law!r}")

    def to_json_dict(self):
        return {
            "spec": self.geometry.spec.to_json_dict(),
            "m": self.geometry.m,
            "mc_samples": self.geometry.mc_samples,
            "mc_seed": self.geometry.mc_seed,
            "sigma_grid": self.sigma_grid,
            "lambda_grid": self.lambda_grid,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "amplitude_law": self.amplitude_law,
            "solver_tol": self.solver_tol,
            "solver_max_iter": self.solver_max_iter,
        }

    @classmethod
    def from_json_dict(cls, doc):
        from .regularizers import RegularizerSpec

        geometry = Geometry(
            spec=RegularizerSpec.from_json_dict(doc["spec"]),
            m=int(doc["m"]),
            mc_samples=int(doc.get("mc_samples", 50_000)),
            mc_seed=int(doc.get("mc_seed", 0)),
        )
        return cls(
            geometry=geometry,
            sigma_grid=doc["sigma_grid"],
            lambda_grid=doc["lambda_grid"],
            trials=int(doc["trials"]),
            master_seed=int(doc["master_seed"]),
            amplitude_law=doc.get("amplitude_law", UNIT_SIGNS),
            solver_tol=float(doc.get("solver_tol", 1e-12)),
            solver_max_iter=int(doc.get("solver_max_iter", 50_000)),
        )


@dataclass
class TrialResult:
    sigma: float
    lam: float
    trial_index: int
    nse: float
    converged: bool
    iterations: int


@dataclass
class CellSummary:
    sigma: float
    lam: float
    mean_nse: float
    stderr_nse: float
    eta_pred: float
    n_converged: int
    trials: int
    unreliable: bool


@dataclass
class ExperimentSummary:
    cells: list
    d_star: float
    lambda_best: float  # nan when not robust
    tau_best: float
    eta_best: float
    version: str = field(default=__version__)


def _signal_from_spec(spec, amplitudes):
    x0 = np.zeros(spec.n)
    if spec.kind == L1:
        x0[list(spec.support)] = spec.signs * amplitudes
    else:
        for row, b in enumerate(spec.support):
            sl = slice(b * spec.block_size, (b + 1) * spec.block_size)
            x0[sl] = spec.signs[row] * amplitudes[row]
    return x0


def make_instance(config, sigma, lam, trial_index):
    """Build the deterministic random instance for one (sigma, lambda, trial).

    The substream is keyed by grid indices rather than values, so the same
    cell always sees the same draws regardless of the rest of the grid
    layout.  Draw order is A, then v, then (if Gaussian amplitudes) the
    amplitude magnitudes.
    """
    geometry = config.geometry
    spec = geometry.spec
    si = config.sigma_grid.index(float(sigma))
    li = config.lambda_grid.index(float(lam))
    seq = np.random.SeedSequence(
        entropy=config.master_seed, spawn_key=(si, li, int(trial_index))
    )
    rng = np.random.default_rng(seq)
    A = rng.standard_normal((geometry.m, spec.n))
    v = rng.standard_normal(geometry.m)
    if config.amplitude_law == UNIT_SIGNS:
        amplitudes = np.ones(spec.k)
    else:
        amplitudes = np.abs(rng.standard_normal(spec.k))
    x0 = _signal_from_spec(spec, amplitudes)
    y = A @ x0 + sigma * v
    return ProblemInstance(A=A, y=y, sigma=float(sigma), lam=float(lam), spec=spec, x0=x0)


def run_trial(config, sigma, lam, trial_index):
    """Solve one instance and measure its error (the parallelizable unit)."""
    instance = make_instance(config, sigma, lam, trial_index)
    report = solve(instance, tol=config.solver_tol, max_iter=config.solver_max_iter)
    return TrialResult(
        sigma=float(sigma),
        lam=float(lam),
        trial_index=int(trial_index),
        nse=nse(report.x_hat, instance.x0, instance.sigma),
        converged=report.converged,
        iterations=report.iterations,
    )


def _aggregate(sigma, lam, results, eta_pred):
    vals = np.array([r.nse for r in results if r.converged])
    n_conv = len(vals)
    trials = len(results)
    if n_conv == 0:
        mean = stderr = math.nan
    else:
        mean = float(np.mean(vals))
        stderr = float(np.std(vals, ddof=1) / math.sqrt(n_conv)) if n_conv > 1 else 0.0
    return CellSummary(
        sigma=sigma,
        lam=lam,
        mean_nse=mean,
        stderr_nse=stderr,
        eta_pred=eta_pred,
        n_converged=n_conv,
        trials=trials,
        unreliable=(trials - n_conv) > _UNRELIABLE_FRACTION * trials,
    )


def _fmt(x):
    return format(float(x), ".17g")


def _cell_row(cell):
    return ",".join(
        [
            _fmt(cell.sigma),
            _fmt(cell.lam),
            _fmt(cell.mean_nse),
            _fmt(cell.stderr_nse),
            _fmt(cell.eta_pred),
            str(cell.n_converged),
            str(cell.trials),
        ]
    )


def _parse_row(line):
    parts = line.strip().split(",")
    sigma, lam, mean, stderr, eta = (float(p) for p in parts[:5])
    n_conv = int(parts[5])
    row_trials = int(parts[6])
    return CellSummary(
        sigma=sigma,
        lam=lam,
        mean_nse=mean,
        stderr_nse=stderr,
        eta_pred=eta,
        n_converged=n_conv,
        trials=row_trials,
        unreliable=(row_trials - n_conv) > _UNRELIABLE_FRACTION * row_trials,
    )


def _load_completed(path):
    completed = {}
    if path is None or not os.path.exists(path):
        return completed
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    for line in lines[1:]:  # skip header
        cell = _parse_row(line)
        completed[(cell.sigma, cell.lam)] = cell
    return completed


def run_experiment(config, out_csv=None, sidecar=None, workers=1):
    """Run the full sweep described by ``config``.

    Args:
        config: the sweep description.
        out_csv: optional CSV path; completed cells are appended as they
            finish and existing rows are treated as already done (resume).
        sidecar: optional JSON path for the config echo and tuning summary.
        workers: trials per cell run in this many processes; aggregation is
            ordered by trial index either way, so results do not depend on
            the worker count.

    Returns:
        ExperimentSummary over all cells, in grid order.
    """
    geometry = config.geometry
    try:
        lam_best, tau_best, eta_best = tune(geometry)
        robust = True
    except BelowPhaseTransitionError:
        lam_best = tau_best = eta_best = math.nan
        robust = False
    from .gauss import d_min

    _, d_star = d_min(geometry)

    eta_by_lam = {}
    for lam in config.lambda_grid:
        eta_by_lam[lam] = predict_nse(geometry, lam).eta if robust else math.nan

    completed = _load_completed(out_csv)
    writer = None
    if out_csv is not None:
        new_file = not os.path.exists(out_csv) or os.path.getsize(out_csv) == 0
        writer = open(out_csv, "a")
        if new_file:
            writer.write(CSV_HEADER + "\n")
            writer.flush()

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    cells = []
    try:
        for sigma in config.sigma_grid:
            for lam in config.lambda_grid:
                key = (sigma, lam)
                if key in completed:
                    cells.append(completed[key])
                    continue
                idx = range(config.trials)
                if pool is None:
                    results = [run_trial(config, sigma, lam, t) for t in idx]
                else:
                    results = list(
                        pool.map(run_trial, [config] * config.trials,
                                 [sigma] * config.trials, [lam] * config.trials, idx)
                    )
                cell = _aggregate(sigma, lam, results, eta_by_lam[lam])
                cells.append(cell)
                if writer is not None:
                    writer.write(_cell_row(cell) + "\n")
                    writer.flush()
    finally:
        if pool is not None:
            pool.shutdown()
        if writer is not None:
            writer.close()

    summary = ExperimentSummary(
        cells=cells,
        d_star=d_star,
        lambda_best=lam_best,
        tau_best=tau_best,
        eta_best=eta_best,
    )
    if sidecar is not None:
        write_sidecar(summary, config, sidecar)
    return summary


def write_sidecar(summary, config, path):
    doc = {
        "config": config.to_json_dict(),
        "d_star": summary.d_star,
        "lambda_best": summary.lambda_best,
        "tau_best": summary.tau_best,
        "eta_best": summary.eta_best,
        "unreliable_cells": [
            {"sigma": c.sigma, "lambda": c.lam} for c in summary.cells if c.unreliable
        ],
        "version": summary.version,
    }
    with open(path, "w") as fh:
        json.dump(_json_safe(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def summary_csv_text(summary):
    """The CSV document for a summary (header plus one row per cell)."""
    return "\n".join([CSV_HEADER] + [_cell_row(c) for c in summary.cells]) + "\n"
