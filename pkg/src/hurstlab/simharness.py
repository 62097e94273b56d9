"""Monte Carlo experiment runner for the estimator comparison.

One replicate = one exact fBm path, one non-decimated decomposition shared
by every requested method (the comparison is paired), one H estimate per
method. Replicate r draws its seeds from SeedSequence([base_seed, r]), so
results are independent of execution order and of the worker count; the
HURSTLAB_THREADS environment variable caps parallel workers (0 = one per
CPU, unset = serial).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import SeedSequence

from .estimators import LevelRange, Method, estimate_hurst
from .exceptions import ExperimentError, HurstLabError, InvalidParameterError
from .filters import get_filter
from .synthesis import FgnSpec, fgn_to_fbm, generate_fgn
from .transform import ndwt

__all__ = ["ExperimentConfig", "MethodSummary", "SimulationReport", "run_experiment", "compare_methods"]

_ALL_METHODS = (Method.TRADITIONAL, Method.SOLTANI, Method.MEDL, Method.MEDLA)
_MAX_FAILURE_FRACTION = 0.01

THREADS_ENV = "HURSTLAB_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    hursts: tuple[float, ...]
    n: int
    reps: int
    levels: LevelRange
    wavelet: str = "haar"
    depth: int = 10
    methods: tuple[Method, ...] = _ALL_METHODS
    base_seed: int = 0
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hursts", tuple(float(h) for h in self.hursts))
        object.__setattr__(
            self,
            "methods",
            tuple(Method.parse(m) if isinstance(m, str) else m for m in self.methods),
        )
        if not self.hursts or any(not 0.0 < h < 1.0 for h in self.hursts):
            raise InvalidParameterError("hursts must be a non-empty list inside (0, 1)")
        if self.reps < 2:
            raise InvalidParameterError(f"reps must be >= 2, got {self.reps}")
        if not self.methods:
            raise InvalidParameterError("at least one method required")
        if Method.SOLTANI in self.methods and self.n & (self.n - 1) != 0:
            raise InvalidParameterError(
                f"mid-energy pairing needs a dyadic path length, got n={self.n}"
            )
        get_filter(self.wavelet)
        J = int(math.ceil(math.log2(self.n)))
        if not (J - self.depth <= self.levels.j_lo and self.levels.j_hi <= J - 1):
            raise InvalidParameterError(
                f"levels {self.levels.j_lo}:{self.levels.j_hi} not reachable with "
                f"n={self.n}, depth={self.depth} (valid {J - self.depth}:{J - 1})"
            )


@dataclass(frozen=True)
class MethodSummary:
    mean: float
    variance: float
    bias_squared: float
    mse: float


@dataclass
class SimulationReport:
    config: ExperimentConfig
    summaries: dict[float, dict[Method, MethodSummary]]
    estimates: dict[float, dict[Method, np.ndarray]]
    failures: dict[float, list[tuple[int, str]]]  # per H: (replicate, category)
    wall_clock_seconds: float = 0.0
    threads: int = 1


def _replicate_seeds(base_seed: int, replicate: int) -> tuple[int, int]:
    path_seed, medla_seed = SeedSequence([int(base_seed), int(replicate)]).generate_state(
        2, np.uint64
    )
    return int(path_seed), int(medla_seed)


def _run_replicate(config: ExperimentConfig, hurst: float, replicate: int) -> dict[Method, float]:
    path_seed, medla_seed = _replicate_seeds(config.base_seed, replicate)
    noise = generate_fgn(FgnSpec(hurst=hurst, length=config.n, sigma=config.sigma, seed=path_seed))
    path = fgn_to_fbm(noise)
    decomp = ndwt(path, config.wavelet, config.depth)
    out: dict[Method, float] = {}
    for method in config.methods:
        seed = medla_seed if method is Method.MEDLA else None
        out[method] = estimate_hurst(decomp, method, config.levels, seed=seed).hurst
    return out


def _replicate_task(args) -> tuple[int, dict[Method, float] | str]:
    config, hurst, replicate = args
    try:
        return replicate, _run_replicate(config, hurst, replicate)
    except HurstLabError as exc:
        return replicate, exc.category


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        if not raw:
            return 1
        try:
            workers = int(raw)
        except ValueError:
            raise InvalidParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise InvalidParameterError(f"worker count must be >= 0, got {workers}")
    return workers


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> SimulationReport:
    """Run the full replicate grid and aggregate mean/variance/bias^2/MSE."""
    started = time.perf_counter()
    nworkers = _resolve_workers(workers)

    summaries: dict[float, dict[Method, MethodSummary]] = {}
    estimates: dict[float, dict[Method, np.ndarray]] = {}
    failures: dict[float, list[tuple[int, str]]] = {}

    for hurst in config.hursts:
        tasks = [(config, hurst, r) for r in range(config.reps)]
        if nworkers > 1:
            with ProcessPoolExecutor(max_workers=nworkers) as pool:
                raw = dict(pool.map(_replicate_task, tasks, chunksize=8))
        else:
            raw = dict(map(_replicate_task, tasks))

        failed = [(r, raw[r]) for r in sorted(raw) if isinstance(raw[r], str)]
        failures[hurst] = failed
        if len(failed) > _MAX_FAILURE_FRACTION * config.reps:
            raise ExperimentError(
                f"{len(failed)} of {config.reps} replicates failed at H={hurst} "
                f"(categories: {sorted({c for _, c in failed})})"
            )
        ok = [r for r in sorted(raw) if not isinstance(raw[r], str)]
        per_method: dict[Method, np.ndarray] = {
            m: np.array([raw[r][m] for r in ok]) for m in config.methods
        }
        estimates[hurst] = per_method
        summaries[hurst] = {}
        for m, values in per_method.items():
            mean = float(values.mean())
            variance = float(values.var(ddof=1))
            bias_squared = (mean - hurst) ** 2
            summaries[hurst][m] = MethodSummary(
                mean=mean,
                variance=variance,
                bias_squared=bias_squared,
                mse=variance + bias_squared,
            )

    return SimulationReport(
        config=config,
        summaries=summaries,
        estimates=estimates,
        failures=failures,
        wall_clock_seconds=time.perf_counter() - started,
        threads=nworkers,
    )


def compare_methods(report: SimulationReport) -> dict[float, list[dict]]:
    """Rank methods by MSE per H; ties break on the method name."""
    ranking: dict[float, list[dict]] = {}
    for hurst, cells in report.summaries.items():
        if len(cells) < 2:
            raise HurstLabError(
                "ranking needs at least two methods", category="single-method-report"
            )
        ordered = sorted(cells.items(), key=lambda kv: (kv[1].mse, kv[0].value))
        best = ordered[0][1].mse
        ranking[hurst] = [
            {
                "rank": i + 1,
                "method": m.value,
                "mse": s.mse,
                "mse_delta_to_best": s.mse - best,
            }
            for i, (m, s) in enumerate(ordered)
        ]
    return ranking
