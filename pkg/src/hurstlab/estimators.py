"""Spectral slope estimators of the Hurst exponent.

Each method turns one coefficient level into a single statistic, regresses
the statistics on the level index, and maps the slope to H:

- traditional: log2 of the mean energy, slope -> H = -(slope + 1) / 2
- soltani:     mean of log2 mid-energies (coefficients paired half a level
               apart), same slope mapping
- medl:        median of ln of squared coefficients,
               slope -> H = -slope / (2 ln 2) - 1/2
- medla:       median of ln of resampled pair-averaged energies, where the
               two pair members are at least 2**(J-j) apart; same mapping
               as medl

The regression is unweighted least squares over consecutive levels; for the
median methods the level statistic variance is level-independent, which is
what justifies equal weights.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, SeedSequence, default_rng

from . import asymptotics
from .exceptions import (
    DegenerateLevelError,
    InvalidParameterError,
    LevelRangeError,
    PairSamplingError,
    RegressionError,
)
from .transform import NdwtDecomposition

__all__ = [
    "Method",
    "LevelRange",
    "SpectrumPoint",
    "PairSamplePlan",
    "HurstEstimate",
    "traditional_level_stat",
    "soltani_level_stat",
    "medl_level_stat",
    "medla_level_stat",
    "sample_admissible_pairs",
    "regress_spectrum",
    "estimate_hurst",
]

_LN2 = math.log(2.0)
# squared coefficients at or below this are dropped from log samples
_ENERGY_FLOOR = 1e-300
_MAX_DROP_FRACTION = 0.10


class Method(str, enum.Enum):
    TRADITIONAL = "traditional"
    SOLTANI = "soltani"
    MEDL = "medl"
    MEDLA = "medla"

    @classmethod
    def parse(cls, text: str) -> "Method":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidParameterError(
                f"unknown method {text!r}; choose from "
                f"{', '.join(m.value for m in cls)}"
            ) from None


_STATISTIC_KIND = {
    Method.TRADITIONAL: "log2_mean_energy",
    Method.SOLTANI: "mean_log2_midenergy",
    Method.MEDL: "median_log_energy",
    Method.MEDLA: "median_log_pairavg",
}

_NATURAL_LOG_METHODS = frozenset({Method.MEDL, Method.MEDLA})


@dataclass(frozen=True)
class LevelRange:
    """Consecutive levels j_lo..j_hi used in the spectrum regression."""

    j_lo: int
    j_hi: int

    def __post_init__(self):
        if self.j_lo >= self.j_hi:
            raise InvalidParameterError(
                f"level range needs j_lo < j_hi, got {self.j_lo}:{self.j_hi}"
            )
        if self.m < 3:
            raise InvalidParameterError("level range must span at least 3 levels")

    @property
    def m(self) -> int:
        return self.j_hi - self.j_lo + 1

    def levels(self) -> range:
        return range(self.j_lo, self.j_hi + 1)

    @classmethod
    def parse(cls, text: str, J: int) -> "LevelRange":
        """Parse "4:9" (absolute) or "Jm7:Jm2" (relative to J)."""

        def one(tok: str) -> int:
            tok = tok.strip()
            if tok.lower().startswith("jm"):
                return J - int(tok[2:])
            return int(tok)

        try:
            lo, hi = text.split(":")
            return cls(one(lo), one(hi))
        except (ValueError, TypeError):
            raise InvalidParameterError(
                f"cannot parse level range {text!r}; use e.g. 4:9 or Jm7:Jm2"
            ) from None


@dataclass(frozen=True)
class SpectrumPoint:
    j: int
    y: float
    n_j: int
    statistic_kind: str


@dataclass(frozen=True)
class PairSamplePlan:
    """How pair-averaged energies are resampled at one level.

    ``seed`` is the root seed of the estimate; the level index ``j`` keys
    an independent child stream, so levels do not share draws and the plan
    is reproducible on its own.
    """

    j: int
    min_distance: int
    count: int
    seed: int

    def rng(self) -> Generator:
        return default_rng(SeedSequence(int(self.seed), spawn_key=(self.j,)))


@dataclass(frozen=True)
class HurstEstimate:
    method: Method
    hurst: float
    slope: float
    intercept: float
    points: tuple[SpectrumPoint, ...]
    theoretical_variance: float | None = None
    seed: int | None = None


def _log_energy_sample(energies: np.ndarray, what: str) -> np.ndarray:
    """Drop vanishing energies from a log sample, guarding degeneracy."""
    keep = energies > _ENERGY_FLOOR
    kept = int(keep.sum())
    if kept == 0:
        raise DegenerateLevelError(f"all {what} at this level are zero")
    if kept < (1.0 - _MAX_DROP_FRACTION) * energies.size:
        raise DegenerateLevelError(
            f"more than {_MAX_DROP_FRACTION:.0%} of {what} are zero "
            f"({energies.size - kept} of {energies.size})",
            category="degenerate-level",
        )
    return np.log(energies[keep])


def traditional_level_stat(coeffs, j: int) -> SpectrumPoint:
    """log2 of the mean squared coefficient."""
    d = np.asarray(coeffs, dtype=np.float64)
    if d.size == 0:
        raise InvalidParameterError("empty coefficient level")
    mean_energy = float(np.mean(d * d))
    if mean_energy <= 0.0:
        raise DegenerateLevelError("level has zero mean energy")
    return SpectrumPoint(j, math.log2(mean_energy), d.size, _STATISTIC_KIND[Method.TRADITIONAL])


def soltani_level_stat(coeffs, j: int) -> SpectrumPoint:
    """Mean of log2 of mid-energies (d_k^2 + d_{k+n/2}^2) / 2."""
    d = np.asarray(coeffs, dtype=np.float64)
    if d.size == 0 or d.size % 2 != 0:
        raise InvalidParameterError(
            f"mid-energy pairing needs an even level length, got {d.size}"
        )
    half = d.size // 2
    e = d * d
    mid = 0.5 * (e[:half] + e[half:])
    logs = _log_energy_sample(mid, "mid-energies")
    return SpectrumPoint(j, float(np.mean(logs)) / _LN2, logs.size, _STATISTIC_KIND[Method.SOLTANI])


def medl_level_stat(coeffs, j: int) -> SpectrumPoint:
    """Sample median of ln of squared coefficients."""
    d = np.asarray(coeffs, dtype=np.float64)
    if d.size == 0:
        raise InvalidParameterError("empty coefficient level")
    logs = _log_energy_sample(d * d, "energies")
    return SpectrumPoint(j, float(np.median(logs)), logs.size, _STATISTIC_KIND[Method.MEDL])


def sample_admissible_pairs(
    n: int, min_distance: int, count: int, rng: Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` index pairs uniformly (with replacement) from all
    pairs with |k1 - k2| >= min_distance, by vectorized rejection."""
    if min_distance >= n:
        raise PairSamplingError(
            f"no pair of {n} indices is {min_distance} apart"
        )
    k1 = np.empty(count, dtype=np.intp)
    k2 = np.empty(count, dtype=np.intp)
    got = 0
    while got < count:
        want = count - got
        a = rng.integers(0, n, size=2 * want + 16)
        b = rng.integers(0, n, size=a.size)
        ok = np.abs(a - b) >= min_distance
        take = min(int(ok.sum()), want)
        k1[got : got + take] = a[ok][:take]
        k2[got : got + take] = b[ok][:take]
        got += take
    return k1, k2


def medla_level_stat(coeffs, plan: PairSamplePlan) -> SpectrumPoint:
    """Sample median of ln of pair-averaged energies under ``plan``."""
    d = np.asarray(coeffs, dtype=np.float64)
    if d.size == 0:
        raise InvalidParameterError("empty coefficient level")
    k1, k2 = sample_admissible_pairs(d.size, plan.min_distance, plan.count, plan.rng())
    e = d * d
    pair_avg = 0.5 * (e[k1] + e[k2])
    logs = _log_energy_sample(pair_avg, "pair averages")
    return SpectrumPoint(plan.j, float(np.median(logs)), logs.size, _STATISTIC_KIND[Method.MEDLA])


def regress_spectrum(points) -> tuple[float, float]:
    """Least-squares (slope, intercept) of y on j over consecutive levels.

    With equally spaced levels the slope reduces to
    12 / (m (m^2 - 1)) * sum_j (j - jbar) y_j.
    """
    pts = sorted(points, key=lambda p: p.j)
    m = len(pts)
    if m < 3:
        raise RegressionError(f"need at least 3 levels, got {m}", category="range-invalid")
    js = np.array([p.j for p in pts], dtype=np.float64)
    if np.any(np.diff(js) != 1.0):
        raise RegressionError(f"levels must be consecutive integers, got {js.astype(int).tolist()}")
    ys = np.array([p.y for p in pts], dtype=np.float64)
    jbar = js.mean()
    slope = 12.0 / (m * (m * m - 1.0)) * float((js - jbar) @ ys)
    intercept = float(ys.mean() - slope * jbar)
    return slope, intercept


def _slope_to_hurst(method: Method, slope: float) -> float:
    if method in _NATURAL_LOG_METHODS:
        return -slope / (2.0 * _LN2) - 0.5
    return -(slope + 1.0) / 2.0


def estimate_hurst(
    decomp: NdwtDecomposition,
    method: Method | str,
    levels: LevelRange,
    seed: int | None = None,
) -> HurstEstimate:
    """Estimate H from a non-decimated decomposition over ``levels``.

    ``seed`` drives the pair resampling and is required for (and only for)
    medla; given the same seed the estimate is deterministic.
    """
    method = Method.parse(method) if isinstance(method, str) else method
    available = set(decomp.levels())
    missing = [j for j in levels.levels() if j not in available]
    if missing:
        raise LevelRangeError(
            f"levels {missing} not in decomposition (available {sorted(available)})"
        )
    if method is Method.MEDLA and seed is None:
        raise InvalidParameterError("medla requires a seed for pair resampling")

    points = []
    for j in levels.levels():
        coeffs = decomp.detail_level(j)
        if method is Method.TRADITIONAL:
            points.append(traditional_level_stat(coeffs, j))
        elif method is Method.SOLTANI:
            points.append(soltani_level_stat(coeffs, j))
        elif method is Method.MEDL:
            points.append(medl_level_stat(coeffs, j))
        else:
            plan = PairSamplePlan(
                j=j,
                min_distance=1 << (decomp.J - j),
                count=coeffs.size,
                seed=int(seed),
            )
            points.append(medla_level_stat(coeffs, plan))

    slope, intercept = regress_spectrum(points)
    theoretical = None
    if method in _NATURAL_LOG_METHODS:
        law = asymptotics.hurst_sampling_law(method.value, decomp.n, levels.m)
        theoretical = law.variance
    return HurstEstimate(
        method=method,
        hurst=_slope_to_hurst(method, slope),
        slope=slope,
        intercept=intercept,
        points=tuple(points),
        theoretical_variance=theoretical,
        seed=int(seed) if method is Method.MEDLA else None,
    )
