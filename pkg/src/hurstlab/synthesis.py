"""Exact synthesis of fractional Gaussian noise and fractional Brownian motion.

The generator is exact in covariance: circulant embedding of the fGn
autocovariance (fast, eigenvalues provably nonnegative for fGn) with a
Durbin-Levinson recursion as a fallback should the embedding spectrum ever
go negative. Identical specs give bit-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, SeedSequence, default_rng

from .exceptions import InvalidParameterError

__all__ = ["FgnSpec", "Signal", "fgn_autocovariance", "generate_fgn", "fgn_to_fbm"]

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class FgnSpec:
    """Parameters of a fractional Gaussian noise path.

    ``sigma`` is the standard deviation of a single (unit-lag) increment,
    i.e. ``Var(x[k]) = sigma**2``.
    """

    hurst: float
    length: int
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise InvalidParameterError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.length < 2:
            raise InvalidParameterError(f"length must be >= 2, got {self.length}")
        if not self.sigma > 0.0:
            raise InvalidParameterError(f"sigma must be positive, got {self.sigma}")
        if not 0 <= int(self.seed) <= _MAX_SEED:
            raise InvalidParameterError(f"seed must fit in 64 bits, got {self.seed}")


@dataclass(frozen=True)
class Signal:
    """A finite sequence of real samples plus a record of where it came from.

    ``origin`` is an :class:`FgnSpec` for synthetic signals, the source path
    string for ingested ones, or None.
    """

    samples: np.ndarray
    origin: FgnSpec | str | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise InvalidParameterError("signal must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise InvalidParameterError("signal contains non-finite samples")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


def fgn_autocovariance(hurst: float, lags, sigma: float = 1.0) -> np.ndarray:
    """Closed-form fGn autocovariance gamma(k) at the requested lags."""
    k = np.abs(np.asarray(lags, dtype=np.float64))
    h2 = 2.0 * hurst
    return 0.5 * sigma**2 * ((k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


def _circulant_embedding(gamma: np.ndarray, rng: Generator) -> np.ndarray | None:
    """Sample a Gaussian vector with autocovariance ``gamma[:n]``.

    Embeds lags 0..n of the covariance into a circulant of size 2n and
    synthesizes in the Fourier domain. Returns None when the embedding
    spectrum has a materially negative eigenvalue (caller falls back).
    """
    n = gamma.size - 1
    first_row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(first_row).real
    if lam.min() < -1e-10 * max(lam.max(), 1.0):
        return None
    lam = np.clip(lam, 0.0, None)
    m = 2 * n
    z = rng.standard_normal(2 * m)
    w = np.sqrt(lam / m) * (z[:m] + 1j * z[m:])
    return np.fft.fft(w).real[:n]


def _durbin_levinson(gamma: np.ndarray, n: int, rng: Generator) -> np.ndarray:
    """Exact O(n^2) recursive sampling from the covariance sequence."""
    x = np.empty(n)
    phi = np.zeros(n)
    prev = np.zeros(n)
    v = gamma[0]
    x[0] = rng.standard_normal() * np.sqrt(v)
    for t in range(1, n):
        if t == 1:
            kappa = gamma[1] / v
        else:
            kappa = (gamma[t] - prev[1:t] @ gamma[t - 1 : 0 : -1]) / v
        phi[1:t] = prev[1:t] - kappa * prev[t - 1 : 0 : -1]
        phi[t] = kappa
        v *= 1.0 - kappa * kappa
        mean = phi[1 : t + 1] @ x[t - 1 :: -1]
        x[t] = mean + np.sqrt(v) * rng.standard_normal()
        prev[: t + 1] = phi[: t + 1]
    return x


def generate_fgn(spec: FgnSpec) -> Signal:
    """Generate a stationary fGn path with the exact target autocovariance."""
    rng = default_rng(SeedSequence(int(spec.seed)))
    gamma = fgn_autocovariance(spec.hurst, np.arange(spec.length + 1))
    samples = _circulant_embedding(gamma, rng)
    if samples is None:
        samples = _durbin_levinson(gamma, spec.length, rng)
    return Signal(samples * spec.sigma, origin=spec)


def fgn_to_fbm(noise: Signal) -> Signal:
    """Cumulative sum of the increments; the path implicitly starts at 0."""
    return Signal(np.cumsum(noise.samples), origin=noise.origin)
