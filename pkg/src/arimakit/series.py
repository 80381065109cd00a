"""Annual time-series container and the basic statistics built on it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered annual observations; observation ``i`` belongs to ``start_year + i``."""

    values: np.ndarray
    start_year: int = 0
    label: str = ""

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).reshape(-1)
        if arr.size < 1:
            raise DegenerateInput("a time series needs at least one observation")
        if not np.all(np.isfinite(arr)):
            bad = [int(i) for i in np.flatnonzero(~np.isfinite(arr))]
            raise DegenerateInput(f"non-finite values at positions {bad}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.start_year == other.start_year
            and self.label == other.label
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.start_year + len(self))

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    def with_values(self, values, start_year=None) -> "TimeSeries":
        return TimeSeries(
            values, self.start_year if start_year is None else start_year, self.label
        )


@dataclass(frozen=True)
class DifferencedSeries:
    """Result of ``difference``; ``initial_values[k]`` is the first value of the
    series after ``k`` rounds of differencing, which is what integration needs."""

    series: TimeSeries
    order_applied: int
    initial_values: tuple = field(default_factory=tuple)


def as_array(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    return np.asarray(x, dtype=float).reshape(-1)


def sample_mean(ts) -> float:
    return float(np.mean(as_array(ts)))


def sample_variance(ts) -> float:
    """Mean squared deviation (divide by n)."""
    x = as_array(ts)
    return float(np.mean((x - x.mean()) ** 2))


def _ensure_series(ts) -> TimeSeries:
    return ts if isinstance(ts, TimeSeries) else TimeSeries(ts)


def difference(ts, d: int) -> DifferencedSeries:
    ts = _ensure_series(ts)
    d = int(d)
    if d < 0:
        raise DegenerateInput(f"differencing order must be non-negative, got {d}")
    if d >= len(ts):
        raise DegenerateInput(
            f"cannot difference {d} times a series of length {len(ts)}"
        )
    x = ts.values
    heads = []
    for _ in range(d):
        heads.append(float(x[0]))
        x = np.diff(x)
    out = TimeSeries(x, ts.start_year + d, ts.label)
    return DifferencedSeries(out, d, tuple(heads))


def integrate(ds: DifferencedSeries) -> TimeSeries:
    x = np.array(ds.series.values, dtype=float)
    for head in reversed(ds.initial_values):
        x = np.cumsum(np.concatenate([[head], x]))
    return TimeSeries(x, ds.series.start_year - ds.order_applied, ds.series.label)


def autocovariance(x, max_lag: int) -> np.ndarray:
    """Biased (divide-by-n), mean-corrected sample autocovariances at lags 0..max_lag."""
    x = as_array(x)
    n = x.size
    xc = x - x.mean()
    return np.array([np.dot(xc[k:], xc[: n - k]) / n for k in range(max_lag + 1)])


def _check_lag(n: int, max_lag: int):
    if max_lag < 0 or max_lag >= n:
        raise DegenerateInput(f"max_lag must be in [0, {n - 1}], got {max_lag}")


def acf(ts, max_lag: int) -> np.ndarray:
    """Sample autocorrelations for lags 0..max_lag; the lag-0 entry is exactly 1."""
    x = as_array(ts)
    _check_lag(x.size, max_lag)
    gamma = autocovariance(x, max_lag)
    if not gamma[0] > 0 or np.ptp(x) == 0:
        raise DegenerateInput("autocorrelation is undefined for a constant series")
    rho = gamma / gamma[0]
    rho[0] = 1.0
    return rho


def durbin_levinson(rho: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Run the Durbin-Levinson recursion on autocorrelations ``rho[0..m]``.

    Returns the partial autocorrelations at lags 1..m together with the AR
    predictor coefficients fitted at each order.
    """
    m = len(rho) - 1
    partials = np.zeros(m)
    coefs: list[np.ndarray] = []
    phi = np.zeros(0)
    v = 1.0
    for k in range(1, m + 1):
        a = (rho[k] - np.dot(phi, rho[k - 1 : 0 : -1])) / v
        phi = np.concatenate([phi - a * phi[::-1], [a]])
        v *= 1.0 - a * a
        partials[k - 1] = a
        coefs.append(phi.copy())
    return partials, coefs


def pacf(ts, max_lag: int) -> np.ndarray:
    """Partial autocorrelations for lags 1..max_lag."""
    rho = acf(ts, max_lag)
    return durbin_levinson(rho)[0]
