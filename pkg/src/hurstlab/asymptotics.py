"""Closed-form sampling theory for the median-based estimators.

Everything here is derived for independent Gaussian coefficients whose
level-j variance is sigma^2 * 2^(-(2H+1) j):

- ln of a squared coefficient has population median
  -ln2 (2H+1) j + ln sigma^2 + 2 ln PHI_INV_3_4, and the sample median of
  N draws has variance A / N with A = pi e^Q / (2 Q), Q = PHI_INV_3_4^2.
- ln of a two-coefficient average energy has population median
  -ln2 (2H+1) j + ln sigma^2 + ln(ln 2), and its sample median has
  variance 1 / (N ln2^2).

Propagating the level-constant median variances through the equal-weight
slope gives the normal sampling laws of the resulting H estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .exceptions import DiagnosticsError, InvalidParameterError

__all__ = [
    "PHI_INV_3_4",
    "Q_CONST",
    "A_CONST",
    "medl_population_median",
    "medla_population_median",
    "medl_median_variance",
    "medla_median_variance",
    "TheoreticalLaw",
    "hurst_sampling_law",
    "NormalityReport",
    "normality_diagnostics",
]

_LN2 = math.log(2.0)

PHI_INV_3_4 = float(ndtri(0.75))
Q_CONST = PHI_INV_3_4 * PHI_INV_3_4
A_CONST = math.pi * math.exp(Q_CONST) / (2.0 * Q_CONST)


def _check_sigma2(sigma2: float) -> None:
    if not sigma2 > 0.0:
        raise InvalidParameterError(f"sigma2 must be positive, got {sigma2}")


def medl_population_median(hurst: float, sigma2: float, j: int) -> float:
    """Population median of ln d^2 at level j."""
    _check_sigma2(sigma2)
    return -_LN2 * (2.0 * hurst + 1.0) * j + math.log(sigma2) + 2.0 * math.log(PHI_INV_3_4)


def medla_population_median(hurst: float, sigma2: float, j: int) -> float:
    """Population median of ln of an independent pair-averaged energy at level j."""
    _check_sigma2(sigma2)
    return -_LN2 * (2.0 * hurst + 1.0) * j + math.log(sigma2) + math.log(_LN2)


def _check_n(n_samples: int) -> None:
    if n_samples < 1:
        raise InvalidParameterError(f"sample size must be >= 1, got {n_samples}")


def medl_median_variance(n_samples: int) -> float:
    """Variance of the sample median of N draws of ln chi2_1; ~5.4418/N."""
    _check_n(n_samples)
    return A_CONST / n_samples


def medla_median_variance(n_samples: int) -> float:
    """Variance of the sample median of N draws of ln(chi2_2 / 2); ~2.0814/N."""
    _check_n(n_samples)
    return 1.0 / (n_samples * _LN2 * _LN2)


@dataclass(frozen=True)
class TheoreticalLaw:
    """Asymptotic normal law of an H estimate.

    ``mean`` equals the generating H and may be None when the law is used
    for its variance only.
    """

    method: str
    variance: float
    n_samples: int
    level_count: int
    mean: float | None = None


def hurst_sampling_law(
    method: str, n_samples: int, level_count: int, hurst: float | None = None
) -> TheoreticalLaw:
    """Normal law of the H estimate from N coefficients on m levels."""
    _check_n(n_samples)
    if level_count < 3:
        raise InvalidParameterError(f"need at least 3 levels, got {level_count}")
    m = level_count
    denom = n_samples * m * (m * m - 1.0)
    key = str(method).lower()
    if key == "medl":
        variance = 3.0 * A_CONST / (denom * _LN2 * _LN2)
    elif key == "medla":
        variance = 3.0 / (denom * _LN2**4)
    else:
        raise InvalidParameterError(f"no sampling law for method {method!r}")
    return TheoreticalLaw(
        method=key, variance=variance, n_samples=n_samples, level_count=m, mean=hurst
    )


def _normal_cdf(x: np.ndarray, mean: float, sd: float) -> np.ndarray:
    z = (x - mean) / (sd * math.sqrt(2.0))
    return 0.5 * (1.0 + np.array([math.erf(v) for v in z]))


@dataclass(frozen=True)
class NormalityReport:
    count: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks_distance: float
    qq: np.ndarray  # (count, 2): theoretical quantile, empirical order statistic


def normality_diagnostics(estimates, law: TheoreticalLaw) -> NormalityReport:
    """Compare a batch of estimates to a normal law.

    Emits moment diagnostics, the Kolmogorov-Smirnov distance against
    N(law.mean, law.variance), and Q-Q pairs at plotting positions
    (i - 1/2) / n.
    """
    x = np.sort(np.asarray(estimates, dtype=np.float64))
    n = x.size
    if n < 30:
        raise DiagnosticsError(f"need at least 30 estimates, got {n}")
    if law.mean is None:
        raise InvalidParameterError("law.mean must be set for diagnostics")
    sd = math.sqrt(law.variance)

    mean = float(x.mean())
    centered = x - mean
    m2 = float(np.mean(centered**2))
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    skewness = m3 / m2**1.5 if m2 > 0 else 0.0
    excess_kurtosis = m4 / (m2 * m2) - 3.0 if m2 > 0 else 0.0

    cdf = _normal_cdf(x, law.mean, sd)
    i = np.arange(1, n + 1)
    ks = float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))

    positions = (i - 0.5) / n
    theoretical = law.mean + sd * ndtri(positions)
    qq = np.column_stack([theoretical, x])

    return NormalityReport(
        count=n,
        mean=mean,
        variance=float(np.var(x, ddof=1)),
        skewness=skewness,
        excess_kurtosis=excess_kurtosis,
        ks_distance=ks,
        qq=qq,
    )
