"""Non-decimated (a trous) and decimated wavelet transforms, plus sample ACF.

Both transforms use circular (periodic) convolution, applying the filter
taps forward: output[k] = sum_t f[t] * x[(k + t * step) % n]. For the
non-decimated transform the stage-s step is 2**(s-1) (zeros inserted
between taps); nothing is downsampled, so every detail level has the
length of the input.

Level indexing: scale s = 1 is the finest stage; results are addressed
either by scale or by level j = J - s with J = ceil(log2 n), so the finest
detail level is j = J - 1 and deeper stages have smaller j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParameterError, TransformError
from .filters import WaveletFilter, get_filter
from .synthesis import Signal

__all__ = [
    "NdwtDecomposition",
    "DwtDecomposition",
    "ndwt",
    "dwt",
    "level_acf",
    "level_convention",
]


def _as_samples(signal) -> np.ndarray:
    if isinstance(signal, Signal):
        return signal.samples
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise InvalidParameterError("signal must be a non-empty 1-D sequence")
    return x


def _resolve_filter(filt) -> WaveletFilter:
    return filt if isinstance(filt, WaveletFilter) else get_filter(filt)


def signal_j(n: int) -> int:
    """J = ceil(log2 n), the level index attached to the signal length."""
    return int(math.ceil(math.log2(n)))


def level_convention(n: int, depth: int) -> dict:
    """The scale-index <-> level mapping, embedded in every report."""
    j = signal_j(n)
    return {
        "J": j,
        "finest_level": j - 1,
        "coarsest_level": j - depth,
        "level_from_scale": "level = J - scale",
        "scale_of_finest_stage": 1,
    }


@dataclass(frozen=True)
class _Decomposition:
    details: dict[int, np.ndarray]
    coarse: np.ndarray
    n: int
    depth: int
    filter: WaveletFilter
    J: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "J", signal_j(self.n))

    def levels(self) -> tuple[int, ...]:
        """Available levels j, coarsest first."""
        return tuple(self.J - s for s in sorted(self.details, reverse=True))

    def detail_level(self, j: int) -> np.ndarray:
        """Detail coefficients at level j (= scale J - j)."""
        s = self.J - j
        if s not in self.details:
            raise InvalidParameterError(
                f"level {j} not in decomposition (available {self.levels()})"
            )
        return self.details[s]


@dataclass(frozen=True)
class NdwtDecomposition(_Decomposition):
    """Per-scale detail sequences, all of input length, plus one coarse."""


@dataclass(frozen=True)
class DwtDecomposition(_Decomposition):
    """Pyramid details: scale s holds n / 2**s coefficients."""


def ndwt(signal, filt="haar", depth: int = 1) -> NdwtDecomposition:
    """Non-decimated transform of ``signal`` to ``depth`` stages."""
    x = _as_samples(signal)
    f = _resolve_filter(filt)
    n = x.size
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    if depth > signal_j(n):
        raise TransformError(
            f"depth {depth} exceeds J = {signal_j(n)} for length {n}",
            category="depth-exceeds-j",
        )
    if n < len(f):
        raise TransformError(
            f"signal of length {n} shorter than filter {f.name!r} ({len(f)} taps)",
            category="signal-shorter-than-filter",
        )
    details: dict[int, np.ndarray] = {}
    approx = x
    for s in range(1, depth + 1):
        step = 1 << (s - 1)
        detail = f.high[0] * approx
        smooth = f.low[0] * approx
        for t in range(1, len(f)):
            shifted = np.roll(approx, -t * step)
            detail += f.high[t] * shifted
            smooth += f.low[t] * shifted
        details[s] = detail
        approx = smooth
    return NdwtDecomposition(details=details, coarse=approx, n=n, depth=depth, filter=f)


def dwt(signal, filt="haar", depth: int = 1) -> DwtDecomposition:
    """Orthogonal pyramid transform with periodic boundary."""
    x = _as_samples(signal)
    f = _resolve_filter(filt)
    n = x.size
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    if n % (1 << depth) != 0:
        raise TransformError(
            f"length {n} is not a multiple of 2**{depth}",
            category="non-dyadic-length",
        )
    if n < len(f):
        raise TransformError(
            f"signal of length {n} shorter than filter {f.name!r} ({len(f)} taps)",
            category="signal-shorter-than-filter",
        )
    details: dict[int, np.ndarray] = {}
    cur = x
    taps = np.arange(len(f))
    for s in range(1, depth + 1):
        m = cur.size
        idx = (2 * np.arange(m // 2)[:, None] + taps[None, :]) % m
        window = cur[idx]
        details[s] = window @ f.high
        cur = window @ f.low
    return DwtDecomposition(details=details, coarse=cur, n=n, depth=depth, filter=f)


def level_acf(values, max_lag: int) -> np.ndarray:
    """Sample autocorrelation r[0..max_lag] with the biased (1/n) denominator."""
    x = np.asarray(values, dtype=np.float64)
    if max_lag < 1:
        raise InvalidParameterError(f"max_lag must be >= 1, got {max_lag}")
    if x.size <= max_lag + 1:
        raise TransformError(
            f"need more than {max_lag + 1} values for {max_lag} lags, got {x.size}",
            category="sequence-too-short",
        )
    centered = x - x.mean()
    denom = centered @ centered
    if denom == 0.0:
        raise InvalidParameterError("autocorrelation undefined for a constant sequence")
    r = np.empty(max_lag + 1)
    r[0] = 1.0
    for h in range(1, max_lag + 1):
        r[h] = (centered[:-h] @ centered[h:]) / denom
    return r
