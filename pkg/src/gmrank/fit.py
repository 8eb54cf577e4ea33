"""Power-law exponents of rank-ordered probabilities, fitted in log-log space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    amplitude: float
    stderr_exponent: float
    k_range: tuple[int, int]
    points: int


def fit_power_law(probabilities, index=None, k_min: int = 1, k_max: int = 10) -> PowerLawFit:
    """Fit P(K) = A / K**exponent by least squares on (log K, log P).

    ``probabilities`` is a RankVector or array indexed by node; ``index``
    supplies the rank order.  Without an index the array is taken to be
    ordered by rank already.  Indices in ``[k_min, k_max]`` with zero
    probability are skipped.
    """
    p = getattr(probabilities, "probabilities", probabilities)
    p = np.asarray(p, dtype=np.float64)
    ranked = p[index.order] if index is not None else p
    n = ranked.size
    if not 1 <= k_min < k_max:
        raise ValueError(f"need 1 <= k_min < k_max, got {k_min}, {k_max}")
    if k_max > n:
        raise ValueError(f"k_max={k_max} exceeds the {n} available ranks")

    k = np.arange(k_min, k_max + 1, dtype=np.float64)
    y = ranked[k_min - 1:k_max]
    keep = y > 0
    k, y = k[keep], y[keep]
    if k.size < 3:
        raise InsufficientDataError(f"{k.size} usable points in [{k_min}, {k_max}], need 3")

    x = np.log(k)
    ly = np.log(y)
    xm = x.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = np.sum((x - xm) * (ly - ly.mean())) / sxx
    intercept = ly.mean() - slope * xm
    resid = ly - (intercept + slope * x)
    dof = k.size - 2
    stderr = float(np.sqrt(np.sum(resid ** 2) / dof / sxx)) if dof > 0 else 0.0
    return PowerLawFit(-float(slope), float(np.exp(intercept)), stderr,
                       (k_min, k_max), int(k.size))
