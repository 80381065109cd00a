"""ARIMA(p, d, q) models: parameters, exact Gaussian likelihood and ML fitting.

The likelihood is evaluated on the d-times differenced series with a Kalman
innovations filter started from the stationary state distribution. During
fitting the innovation variance is concentrated out and the AR and MA
coefficient vectors are searched through their partial autocorrelations,
each squashed into (-1, 1) with tanh, so every iterate is stationary and
invertible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kalman, _simplex
from .criteria import aic, aicc, bic
from .errors import (
    ConvergenceFailure,
    DegenerateInput,
    MissingMean,
    NonStationaryParams,
)
from .series import TimeSeries, as_array, difference

LOG_2PI = math.log(2.0 * math.pi)
FATOL = 1e-8
ITERATIONS_PER_PARAM = 500
MAX_RESTARTS = 4
SIMPLEX_STEP = 0.1


@dataclass(frozen=True)
class ModelOrder:
    p: int = 0
    d: int = 0
    q: int = 0
    include_mean: bool = True

    def __post_init__(self):
        for name in ("p", "d", "q"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise DegenerateInput(f"{name} must be a non-negative integer, got {value}")
            object.__setattr__(self, name, int(value))
        if self.d > 4:
            raise DegenerateInput(f"differencing order {self.d} exceeds 4")
        if self.include_mean and self.d > 0:
            raise DegenerateInput("a mean term is only allowed when d = 0")
        object.__setattr__(self, "include_mean", bool(self.include_mean))

    @property
    def n_params(self) -> int:
        """Parameter count k used by the information criteria."""
        return self.p + self.q + int(self.include_mean) + 1

    def __str__(self):
        tail = " with mean" if self.include_mean else ""
        return f"ARIMA({self.p},{self.d},{self.q}){tail}"


@dataclass(frozen=True)
class ArimaParams:
    phi: tuple = ()
    theta: tuple = ()
    mu: float | None = None
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        object.__setattr__(self, "theta", tuple(float(v) for v in self.theta))
        if self.mu is not None:
            object.__setattr__(self, "mu", float(self.mu))
        if not (self.sigma2 > 0 and math.isfinite(self.sigma2)):
            raise DegenerateInput(f"innovation variance must be positive, got {self.sigma2}")
        object.__setattr__(self, "sigma2", float(self.sigma2))


@dataclass(frozen=True)
class FittedModel:
    order: ModelOrder
    params: ArimaParams
    loglik: float
    aic: float
    aicc: float
    bic: float
    residuals: TimeSeries
    nobs: int
    converged: bool = True
    iterations: int = 0

    @property
    def n_params(self) -> int:
        return self.order.n_params


def intercept(params: ArimaParams) -> float:
    """Regression-form constant mu * (1 - sum(phi))."""
    if params.mu is None:
        raise MissingMean("the model has no mean term, so no intercept is defined")
    return params.mu * (1.0 - sum(params.phi))


def _min_root_modulus(coefs, sign: float) -> float:
    """Smallest root modulus of 1 + sign * (c1 z + ... + ck z^k)."""
    c = np.trim_zeros(np.asarray(coefs, dtype=float), "b")
    if c.size == 0:
        return math.inf
    # roots of the monic reversed polynomial are the reciprocals, and it
    # stays well conditioned when the top coefficient is tiny
    inv = np.roots(np.concatenate([[1.0], sign * c]))
    largest = float(np.max(np.abs(inv))) if inv.size else 0.0
    return math.inf if largest == 0.0 else 1.0 / largest


def is_stationary(phi) -> bool:
    return _min_root_modulus(phi, -1.0) > 1.0


def is_invertible(theta) -> bool:
    return _min_root_modulus(theta, 1.0) > 1.0


def check_admissible(params: ArimaParams):
    if not is_stationary(params.phi):
        raise NonStationaryParams(f"AR coefficients {params.phi} are not stationary")
    if not is_invertible(params.theta):
        raise NonStationaryParams(f"MA coefficients {params.theta} are not invertible")


def partials_to_coefs(partials) -> np.ndarray:
    """Map partial autocorrelations in (-1, 1) to stationary AR coefficients."""
    return _kalman.partials_to_coefs(np.asarray(partials, dtype=float))


def coefs_to_partials(phi) -> np.ndarray:
    """Inverse of ``partials_to_coefs`` (step-down recursion)."""
    phi = np.array(phi, dtype=float)
    out = np.zeros(phi.size)
    for k in range(phi.size, 0, -1):
        a = phi[k - 1]
        out[k - 1] = a
        if k > 1:
            phi = (phi[: k - 1] + a * phi[k - 2 :: -1]) / (1.0 - a * a)
    return out


def _working_series(ts, order: ModelOrder) -> np.ndarray:
    x = as_array(ts)
    if order.d:
        x = difference(TimeSeries(x), order.d).series.values
    return np.ascontiguousarray(x, dtype=float)


def _filter(w, phi, theta):
    P0 = _kalman.stationary_covariance(phi, theta)
    return _kalman.innovations(w, phi, theta, P0)


def _check_params_shape(order: ModelOrder, params: ArimaParams):
    if len(params.phi) != order.p or len(params.theta) != order.q:
        raise DegenerateInput(
            f"{order} needs {order.p} AR and {order.q} MA coefficients, got "
            f"{len(params.phi)} and {len(params.theta)}"
        )
    if order.include_mean != (params.mu is not None):
        raise DegenerateInput("mean term presence differs between order and params")


def log_likelihood(ts, order: ModelOrder, params: ArimaParams) -> float:
    """Exact Gaussian log-likelihood of the differenced series."""
    _check_params_shape(order, params)
    check_admissible(params)
    w = _working_series(ts, order)
    if w.size < 1:
        raise DegenerateInput("no observations left after differencing")
    if params.mu is not None:
        w = w - params.mu
    phi = np.array(params.phi)
    theta = np.array(params.theta)
    v, F, _ = _filter(w, phi, theta)
    if not np.all(F > 0):
        raise DegenerateInput("singular prediction variance in the Kalman filter")
    s2 = params.sigma2
    return float(-0.5 * np.sum(LOG_2PI + np.log(s2 * F) + v * v / (s2 * F)))


def _concentrated(w, phi, theta):
    """Return (loglik, sigma2_hat, v, F) with sigma2 profiled out."""
    ll, s2 = _kalman.concentrated_loglik(w, phi, theta)
    v, F, _ = _filter(w, phi, theta)
    return float(ll), float(s2), v, F


class _Layout:
    """Packing of (phi, theta, mu) into an unconstrained optimizer vector.

    The mean is stored as (mu - center) / scale to keep all coordinates O(1).
    """

    def __init__(self, order: ModelOrder, center: float, scale: float):
        self.p, self.q, self.mean = order.p, order.q, order.include_mean
        self.center, self.scale = center, scale
        self.size = self.p + self.q + int(self.mean)

    def unpack(self, x):
        p, q = self.p, self.q
        phi = partials_to_coefs(np.tanh(x[:p]))
        theta = -partials_to_coefs(np.tanh(x[p : p + q]))
        mu = self.center + self.scale * x[p + q] if self.mean else None
        return phi, theta, mu

    def pack(self, phi, theta, mu):
        x = np.zeros(self.size)
        x[: self.p] = np.arctanh(np.clip(coefs_to_partials(phi), -0.99, 0.99))
        x[self.p : self.p + self.q] = np.arctanh(
            np.clip(coefs_to_partials(-np.asarray(theta)), -0.99, 0.99)
        )
        if self.mean:
            x[-1] = (mu - self.center) / self.scale
        return x


def _search(kind, x0, max_iter, w, order, center, scale):
    return _simplex.minimize(
        kind, np.ascontiguousarray(x0, dtype=float), SIMPLEX_STEP, FATOL, max_iter,
        w, order.p, order.q, order.include_mean, center, scale,
    )


def css_estimate(w, order: ModelOrder):
    """Conditional-sum-of-squares estimates (phi, theta, mu) used as a warm start."""
    p, q = order.p, order.q
    center = float(np.mean(w))
    scale = float(np.std(w)) or 1.0
    size = p + q + int(order.include_mean)
    x = np.zeros(size)
    if size:
        x = _search(_simplex.CSS, x, ITERATIONS_PER_PARAM * size, w, order, center, scale)[0]
    mu = center + scale * x[p + q] if order.include_mean else None
    return x[:p].copy(), x[p : p + q].copy(), mu


def fit(ts, order: ModelOrder) -> FittedModel:
    """Exact maximum-likelihood fit. Raises ``ConvergenceFailure`` (carrying the
    best model found) if the simplex search exhausts its iteration budget."""
    series = ts if isinstance(ts, TimeSeries) else TimeSeries(ts)
    w = _working_series(series, order)
    n = w.size
    k = order.n_params
    if n <= k + 2:
        raise DegenerateInput(
            f"{order} has {k} parameters but only {n} observations after differencing"
        )
    if np.ptp(w) == 0:
        raise DegenerateInput("cannot fit a model to a constant series")

    center = float(np.mean(w))
    scale = float(np.std(w))
    layout = _Layout(order, center, scale)
    converged = True
    iterations = 0

    if order.p == 0 and order.q == 0:
        # white noise: the ML mean is the sample mean
        x = np.zeros(layout.size)
    else:
        phi0, theta0, mu0 = css_estimate(w, order)
        if not (is_stationary(phi0) and is_invertible(theta0)):
            phi0, theta0 = np.zeros(order.p), np.zeros(order.q)
        x = layout.pack(phi0, theta0, mu0 if mu0 is not None else center)
        best = _kalman.negative_loglik(x, w, order.p, order.q, order.include_mean, center, scale)
        max_iter = ITERATIONS_PER_PARAM * k
        # restart from the optimum until a fresh simplex stops improving
        for _ in range(MAX_RESTARTS + 1):
            xr, fr, nit, ok = _search(_simplex.EXACT, x, max_iter, w, order, center, scale)
            iterations += int(nit)
            improved = best - fr
            if fr <= best:
                x, best = xr, fr
            if not ok:
                converged = False
                break
            if improved < FATOL:
                break

    phi, theta, mu = layout.unpack(x)
    wc = w - mu if mu is not None else w
    ll, s2, v, F = _concentrated(wc, phi, theta)
    if not math.isfinite(ll):
        raise DegenerateInput(f"{order}: likelihood is not finite at the optimum")
    params = ArimaParams(tuple(phi), tuple(theta), mu, s2)
    resid = TimeSeries(v / np.sqrt(F), series.start_year + order.d, series.label)
    model = FittedModel(
        order=order,
        params=params,
        loglik=ll,
        aic=aic(ll, k),
        aicc=aicc(ll, k, n),
        bic=bic(ll, k, n),
        residuals=resid,
        nobs=n,
        converged=converged,
        iterations=iterations,
    )
    if not converged:
        raise ConvergenceFailure(
            f"{order}: simplex search did not converge in {ITERATIONS_PER_PARAM * k} iterations",
            best=model,
        )
    return model


def evaluate(ts, order: ModelOrder, params: ArimaParams) -> FittedModel:
    """Wrap fixed parameters as a ``FittedModel`` (no estimation)."""
    _check_params_shape(order, params)
    check_admissible(params)
    series = ts if isinstance(ts, TimeSeries) else TimeSeries(ts)
    w = _working_series(series, order)
    n = w.size
    k = order.n_params
    ll = log_likelihood(series, order, params)
    phi, theta = np.array(params.phi), np.array(params.theta)
    v, F, _ = _filter(w - params.mu if params.mu is not None else w, phi, theta)
    resid = TimeSeries(v / np.sqrt(F), series.start_year + order.d, series.label)
    return FittedModel(
        order=order,
        params=params,
        loglik=ll,
        aic=aic(ll, k),
        aicc=aicc(ll, k, n) if n > k + 1 else math.inf,
        bic=bic(ll, k, n),
        residuals=resid,
        nobs=n,
    )


def predicted_state(model: FittedModel, ts) -> np.ndarray:
    """Kalman predicted ARMA state one step past the end of ``ts``."""
    w = _working_series(ts, model.order)
    if model.params.mu is not None:
        w = w - model.params.mu
    phi = np.array(model.params.phi)
    theta = np.array(model.params.theta)
    return _filter(w, phi, theta)[2].copy()


def burn_in(order: ModelOrder) -> int:
    return max(200, 10 * (order.p + order.q + 1))


def simulate(
    order: ModelOrder,
    params: ArimaParams,
    n: int,
    seed: int,
    start_year: int = 0,
    label: str = "simulated",
) -> TimeSeries:
    """Draw a path of length ``n``; integrated orders start from zero."""
    _check_params_shape(order, params)
    check_admissible(params)
    if n < 1:
        raise DegenerateInput("n must be at least 1")
    burn = burn_in(order)
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, math.sqrt(params.sigma2), size=n + burn)
    x = _kalman.arma_filter(eps, np.array(params.phi), np.array(params.theta))[burn:]
    if params.mu is not None:
        x = x + params.mu
    for _ in range(order.d):
        x = np.cumsum(x)
    return TimeSeries(x, start_year, label)
