"""Orthonormal analysis filter bank: Haar and Daubechies 2-10.

The low-pass tables were computed offline by spectral factorization of the
Daubechies polynomial at 60-digit precision and rounded once to float64;
the high-pass is the quadrature mirror g[k] = (-1)^k h[L-1-k]. Tap order
follows the usual decomposition convention (db2 starts at -0.12940...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError

__all__ = ["WaveletFilter", "get_filter", "available_filters"]

_SUM_TOL = 1e-12

_DB_LOWPASS = {
    1: (0.7071067811865476, 0.7071067811865476),
    2: (
        -0.12940952255126037, 0.2241438680420134, 0.8365163037378079, 0.48296291314453416,
    ),
    3: (
        0.03522629188570953, -0.08544127388202666, -0.13501102001025458, 0.45987750211849154,
        0.8068915093110925, 0.33267055295008263,
    ),
    4: (
        -0.010597401785069032, 0.0328830116668852, 0.030841381835560764, -0.18703481171909309,
        -0.027983769416859854, 0.6308807679298589, 0.7148465705529157, 0.2303778133088965,
    ),
    5: (
        0.0033357252854737712, -0.012580751999081999, -0.006241490212798274, 0.07757149384004572,
        -0.032244869584638375, -0.24229488706638203, 0.13842814590132074, 0.7243085284377729,
        0.6038292697971896, 0.16010239797419293,
    ),
    6: (
        -0.0010773010853084796, 0.004777257510945511, 0.0005538422011614961, -0.03158203931748603,
        0.027522865530305727, 0.09750160558732304, -0.12976686756726194, -0.22626469396543983,
        0.31525035170919763, 0.7511339080210954, 0.49462389039845306, 0.11154074335010947,
    ),
    7: (
        0.00035371379997452024, -0.0018016407040474908, 0.0004295779729213665, 0.01255099855609984,
        -0.01657454163066688, -0.03802993693501441, 0.08061260915108308, 0.07130921926683026,
        -0.22403618499387498, -0.14390600392856498, 0.4697822874051931, 0.7291320908462351,
        0.3965393194819173, 0.07785205408500918,
    ),
    8: (
        -0.00011747678412476953, 0.0006754494064505693, -0.00039174037337694705, -0.004870352993451574,
        0.008746094047405777, 0.013981027917398282, -0.044088253930794755, -0.017369301001807547,
        0.12874742662047847, 0.0004724845739132828, -0.2840155429615469, -0.015829105256349306,
        0.5853546836542067, 0.6756307362972898, 0.31287159091429995, 0.05441584224310401,
    ),
    9: (
        3.93473203162716e-05, -0.0002519631889427101, 0.00023038576352319597, 0.0018476468830562265,
        -0.00428150368246343, -0.004723204757751397, 0.022361662123679096, 0.00025094711483145197,
        -0.06763282906132997, 0.03072568147933338, 0.14854074933810638, -0.09684078322297646,
        -0.2932737832791749, 0.13319738582500756, 0.6572880780513005, 0.6048231236901112,
        0.24383467461259034, 0.038077947363878345,
    ),
    10: (
        -1.3264202894521244e-05, 9.358867032006959e-05, -0.00011646685512928545, -0.0006858566949597116,
        0.001992405295185056, 0.001395351747052901, -0.010733175483330575, 0.0036065535669561697,
        0.033212674059341, -0.029457536821875813, -0.07139414716639708, 0.09305736460357235,
        0.12736934033579325, -0.19594627437737705, -0.24984642432731538, 0.2811723436605775,
        0.6884590394536035, 0.5272011889317256, 0.1881768000776915, 0.026670057900555554,
    ),
}


@dataclass(frozen=True)
class WaveletFilter:
    """An orthonormal analysis pair (low-pass, high-pass)."""

    name: str
    low: np.ndarray
    high: np.ndarray
    vanishing_moments: int

    def __post_init__(self):
        low = np.asarray(self.low, dtype=np.float64)
        high = np.asarray(self.high, dtype=np.float64)
        if low.shape != high.shape or low.ndim != 1 or low.size < 2:
            raise InvalidParameterError("filter pair must be equal-length 1-D taps")
        if abs(math.fsum(low) - math.sqrt(2.0)) > _SUM_TOL:
            raise InvalidParameterError(f"low-pass taps of {self.name!r} must sum to sqrt(2)")
        if abs(math.fsum(high)) > _SUM_TOL:
            raise InvalidParameterError(f"high-pass taps of {self.name!r} must sum to 0")
        if abs(math.fsum(c * c for c in low) - 1.0) > _SUM_TOL:
            raise InvalidParameterError(f"low-pass taps of {self.name!r} must have unit norm")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    def __len__(self) -> int:
        return self.low.size


def _qmf_high(low: np.ndarray) -> np.ndarray:
    signs = np.where(np.arange(low.size) % 2 == 0, 1.0, -1.0)
    return signs * low[::-1]


def available_filters() -> tuple[str, ...]:
    return ("haar",) + tuple(f"db{n}" for n in range(2, 11))


def get_filter(name: str) -> WaveletFilter:
    """Look up a built-in filter by name ("haar", "db2" .. "db10")."""
    key = name.strip().lower()
    if key == "haar":
        low = np.asarray(_DB_LOWPASS[1])
        # tap order chosen so the detail output is x[k] - x[k+1] (up to 1/sqrt2)
        return WaveletFilter("haar", low, _qmf_high(low), vanishing_moments=1)
    if key.startswith("db"):
        try:
            order = int(key[2:])
        except ValueError:
            order = -1
        if order in _DB_LOWPASS and order >= 2:
            low = np.asarray(_DB_LOWPASS[order])
            return WaveletFilter(key, low, _qmf_high(low), vanishing_moments=order)
    raise InvalidParameterError(
        f"unknown wavelet {name!r}; choose one of {', '.join(available_filters())}"
    )
