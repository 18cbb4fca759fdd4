"""Adaptive distance threshold from two-segment least-squares fitting.

The sorted distance vector is truncated at a cap (default 10 mm), every
candidate split point gets a straight-line fit on each side (abscissa is
the 1-based rank index), and the split minimizing the summed absolute
deviation over all truncated points wins.  The threshold is the distance
value at the winning split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distances import DistanceVector
from .errors import InsufficientContact

DEFAULT_CAP_MM = 10.0


@dataclass(frozen=True)
class ThresholdResult:
    """Chosen cut for CSA membership.

    tau: threshold in mm, equal to sorted_distances[split_index - 1].
    split_index: 1-based prefix length of the winning split, in [2, F-1].
    capped_count: F, the number of distances strictly below the cap.
    cumulative_errors: summed |actual - fitted| per candidate split
        (candidates 2 .. F-1, in order).
    fit_lines: ((slope, intercept), (slope, intercept)) of the winning
        prefix and suffix fits over the 1-based rank axis.
    sorted_distances: the sorted, truncated distances the fit ran on.
    cap: truncation cap in mm.
    """

    tau: float
    split_index: int
    capped_count: int
    cumulative_errors: np.ndarray
    fit_lines: tuple[tuple[float, float], tuple[float, float]]
    sorted_distances: np.ndarray
    cap: float


def _fit_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    n = len(x)
    sx = x.sum()
    sy = y.sum()
    sxx = (x * x).sum()
    sxy = (x * y).sum()
    denom = n * sxx - sx * sx
    if denom == 0.0:
        return 0.0, sy / n
    slope = (n * sxy - sx * sy) / denom
    return slope, (sy - slope * sx) / n


def find_threshold(d: DistanceVector | np.ndarray, cap: float = DEFAULT_CAP_MM) -> ThresholdResult:
    """Locate the knee of the sorted distance distribution.

    Raises InsufficientContact when fewer than 4 distances fall strictly
    below the cap (each side of a split needs at least 2 points).
    """
    values = d.distances if isinstance(d, DistanceVector) else np.asarray(d, dtype=np.float64)
    ds = np.sort(values)
    ds = ds[ds < cap]
    f = len(ds)
    if f < 4:
        raise InsufficientContact(
            f"only {f} distances below cap {cap} mm; need at least 4"
        )
    x = np.arange(1, f + 1, dtype=np.float64)
    errors = np.empty(f - 2)
    fits = []
    for i in range(2, f):  # 1-based split index: prefix ds[0:i], suffix ds[i:]
        s1, b1 = _fit_line(x[:i], ds[:i])
        s2, b2 = _fit_line(x[i:], ds[i:])
        err = np.abs(ds[:i] - (s1 * x[:i] + b1)).sum()
        err += np.abs(ds[i:] - (s2 * x[i:] + b2)).sum()
        errors[i - 2] = err
        fits.append(((s1, b1), (s2, b2)))
    best = int(np.argmin(errors))  # lowest index on ties
    split_index = best + 2
    return ThresholdResult(
        tau=float(ds[split_index - 1]),
        split_index=split_index,
        capped_count=f,
        cumulative_errors=errors,
        fit_lines=fits[best],
        sorted_distances=ds,
        cap=float(cap),
    )
