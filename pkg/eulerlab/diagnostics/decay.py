"""
Exponential decay fits on log values.
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import InsufficientSamples, NonPositiveSeries
from ..models import DecayReport

MIN_SAMPLES = 10


def local_maxima(values: np.ndarray) -> np.ndarray:
    """Indices of strict local maxima over a 3-sample window."""
    if values.size < 3:
        return np.array([], dtype=np.int64)
    inner = (values[1:-1] > values[:-2]) & (values[1:-1] > values[2:])
    return np.flatnonzero(inner) + 1


def fit_decay(
    times: Sequence[float],
    values: Sequence[float],
    window: Optional[Tuple[float, float]] = None,
    envelope: bool = False,
    quantity_name: str = "series",
) -> DecayReport:
    """
    Least-squares fit of log(values) = log(prefactor) - rate * t.

    Args:
        times: Sample times
        values: Positive samples
        window: (t0, t1) restricting the fit; the whole series by default
        envelope: Fit only the strict local maxima (oscillatory series)
        quantity_name: Label stored in the report

    Raises:
        NonPositiveSeries: If a value in the window is <= 0
        InsufficientSamples: If the window holds fewer than MIN_SAMPLES values
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.shape != v.shape:
        raise ValueError(f"times and values differ in length: {t.size} vs {v.size}")
    lo, hi = (float(t[0]), float(t[-1])) if window is None else (float(window[0]), float(window[1]))
    inside = (t >= lo - 1e-12) & (t <= hi + 1e-12)
    tw, vw = t[inside], v[inside]
    if tw.size < MIN_SAMPLES:
        raise InsufficientSamples(f"{quantity_name}: need at least {MIN_SAMPLES} samples in the fit window, got {tw.size}")
    if np.any(vw <= 0) or not np.all(np.isfinite(vw)):
        raise NonPositiveSeries(f"{quantity_name} has non-positive values in [{lo}, {hi}]")

    if envelope:
        peaks = local_maxima(vw)
        if peaks.size < 2:
            raise InsufficientSamples(f"{quantity_name} has fewer than two local maxima in [{lo}, {hi}]")
        tw, vw = tw[peaks], vw[peaks]

    logs = np.log(vw)
    slope, intercept = np.polyfit(tw, logs, 1)
    residual = float(np.sqrt(np.mean((logs - (slope * tw + intercept)) ** 2)))
    return DecayReport(
        quantity_name=quantity_name,
        times=t.tolist(),
        values=v.tolist(),
        fitted_rate=float(-slope),
        fitted_prefactor=float(np.exp(intercept)),
        fit_window=(lo, hi),
        residual_of_fit=residual,
    )
