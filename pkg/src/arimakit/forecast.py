"""Multi-step forecasts with Gaussian prediction intervals.

Point paths come from propagating the Kalman predicted state with future
innovations set to zero; the step-m variance is sigma^2 times the sum of the
first m squared psi-weights of the (integrated) model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kalman
from .arima import FittedModel, predicted_state
from .errors import DegenerateInput
from .series import as_array
from .special import norm_ppf

DEFAULT_HORIZON = 11
DEFAULT_LEVELS = (0.80, 0.95)


@dataclass(frozen=True)
class ForecastResult:
    horizon: int
    point: tuple
    se: tuple
    intervals: dict = field(default_factory=dict)
    origin_year: int = 0

    @property
    def years(self) -> list:
        return [self.origin_year + i for i in range(1, self.horizon + 1)]

    @property
    def levels(self) -> list:
        return sorted(self.intervals)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "origin_year": self.origin_year,
            "years": self.years,
            "point": list(self.point),
            "se": list(self.se),
            "intervals": [
                {"level": lv, "lower": list(lo), "upper": list(up)}
                for lv, (lo, up) in sorted(self.intervals.items())
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForecastResult":
        return cls(
            horizon=d["horizon"],
            point=tuple(d["point"]),
            se=tuple(d["se"]),
            intervals={
                b["level"]: (tuple(b["lower"]), tuple(b["upper"])) for b in d["intervals"]
            },
            origin_year=d["origin_year"],
        )


def _floats(arr) -> tuple:
    return tuple(float(v) for v in arr)


def integrated_ar(phi, d: int) -> np.ndarray:
    """AR coefficients of phi(B) * (1 - B)^d written as 1 - sum(c_i B^i)."""
    poly = np.concatenate([[1.0], -np.asarray(phi, dtype=float)])
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    return -poly[1:]


def arma_psi(phi, theta, h: int) -> np.ndarray:
    """psi_0..psi_{h-1} of the MA(infinity) expansion."""
    if h < 1:
        raise DegenerateInput(f"h must be at least 1, got {h}")
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        acc = theta[j - 1] if j <= theta.size else 0.0
        for i in range(1, min(j, phi.size) + 1):
            acc += phi[i - 1] * psi[j - i]
        psi[j] = acc
    return psi


def psi_weights(model: FittedModel, h: int) -> np.ndarray:
    """psi-weights of the model on its original (undifferenced) scale."""
    phi = integrated_ar(model.params.phi, model.order.d)
    return arma_psi(phi, model.params.theta, h)


def arma_path(model: FittedModel, original, h: int) -> np.ndarray:
    """Point forecasts on the differenced scale (mean included)."""
    phi = np.array(model.params.phi)
    theta = np.array(model.params.theta)
    T, _ = _kalman.transition(phi, theta)
    a = predicted_state(model, original)
    mu = model.params.mu or 0.0
    out = np.empty(h)
    for i in range(h):
        out[i] = a[0] + mu
        a = T @ a
    return out


def _integrate_path(x: np.ndarray, d: int, path: np.ndarray) -> np.ndarray:
    # last value of each differencing level, from x itself up to the (d-1)-th difference
    lasts = []
    level = x
    for _ in range(d):
        lasts.append(level[-1])
        level = np.diff(level)
    for last in reversed(lasts):
        path = last + np.cumsum(path)
    return path


def forecast(
    model: FittedModel,
    original,
    h: int = DEFAULT_HORIZON,
    levels=DEFAULT_LEVELS,
) -> ForecastResult:
    levels = tuple(float(lv) for lv in levels)
    if not levels:
        raise DegenerateInput("at least one interval level is required")
    for lv in levels:
        if not 0.0 < lv < 1.0:
            raise DegenerateInput(f"interval level must lie in (0, 1), got {lv}")
    if h < 1:
        raise DegenerateInput(f"horizon must be at least 1, got {h}")
    x = as_array(original)
    d = model.order.d
    if x.size <= d:
        raise DegenerateInput("series too short for the model's differencing order")

    path = arma_path(model, original, h)
    point = _integrate_path(x, d, path) if d else path
    psi = psi_weights(model, h)
    se = np.sqrt(model.params.sigma2 * np.cumsum(psi**2))
    intervals = {}
    for lv in levels:
        half = norm_ppf(0.5 * (1.0 + lv)) * se
        intervals[lv] = (_floats(point - half), _floats(point + half))
    origin = getattr(original, "end_year", x.size - 1)
    return ForecastResult(h, _floats(point), _floats(se), intervals, int(origin))


def max_decay_rate(model: FittedModel) -> float:
    """Largest inverse AR root modulus; forecasts approach the mean at this rate."""
    phi = np.asarray(model.params.phi)
    if phi.size == 0:
        return 0.0
    companion = np.zeros((phi.size, phi.size))
    companion[0] = phi
    companion[np.arange(1, phi.size), np.arange(phi.size - 1)] = 1.0
    return float(np.max(np.abs(np.linalg.eigvals(companion))))

