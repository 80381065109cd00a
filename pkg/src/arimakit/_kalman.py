"""Compiled innovations filter for a zero-mean stationary ARMA process.

State vector follows Harvey's companion form with dimension r = max(p, q + 1):

    alpha[t+1] = T alpha[t] + R eps[t+1],   y[t] = alpha[t][0]

with T holding the AR coefficients in its first column and ones on the
superdiagonal, and R = (1, theta_1, ..., theta_{r-1}). All variances are in
units of the innovation variance so that sigma^2 can be concentrated out.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def transition(phi, theta):  # pragma: no cover - compiled
    p = phi.shape[0]
    q = theta.shape[0]
    r = max(p, q + 1)
    T = np.zeros((r, r))
    for i in range(p):
        T[i, 0] = phi[i]
    for i in range(r - 1):
        T[i, i + 1] = 1.0
    R = np.zeros(r)
    R[0] = 1.0
    for j in range(q):
        R[j + 1] = theta[j]
    return T, R


@njit(cache=True, nogil=True)
def stationary_covariance(phi, theta):  # pragma: no cover - compiled
    """Unconditional state covariance P solving P = T P T' + R R'."""
    T, R = transition(phi, theta)
    r = T.shape[0]
    if r == 1:
        return np.array([[1.0 / (1.0 - T[0, 0] ** 2)]])
    lhs = np.eye(r * r) - np.kron(T, T)
    vec = np.linalg.solve(lhs, np.outer(R, R).copy().reshape(r * r))
    P = vec.reshape((r, r))
    return 0.5 * (P + P.T)


@njit(cache=True, nogil=True)
def partials_to_coefs(partials):  # pragma: no cover - compiled
    """Map partial autocorrelations in (-1, 1) to stationary AR coefficients."""
    k = partials.shape[0]
    phi = np.zeros(k)
    tmp = np.zeros(k)
    for m in range(k):
        a = partials[m]
        for j in range(m):
            tmp[j] = phi[j] - a * phi[m - 1 - j]
        for j in range(m):
            phi[j] = tmp[j]
        phi[m] = a
    return phi


@njit(cache=True, nogil=True)
def innovations(w, phi, theta, P0):  # pragma: no cover - compiled
    """One-step prediction errors ``v``, their relative variances ``F`` and the
    predicted state for the first time point past the data.

    ``F[t] <= 0`` signals a numerically singular filter; callers must check.
    """
    n = w.shape[0]
    r = P0.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    Rv = np.zeros(r)
    Rv[0] = 1.0
    for j in range(q):
        Rv[j + 1] = theta[j]
    a = np.zeros(r)
    P = P0.copy()
    M = np.empty((r, r))
    TM = np.empty((r, r))
    v = np.empty(n)
    F = np.empty(n)
    for t in range(n):
        f = P[0, 0]
        e = w[t] - a[0]
        v[t] = e
        F[t] = f
        if not f > 0.0:
            for s in range(t + 1, n):
                v[s] = 0.0
                F[s] = -1.0
            return v, F, a
        # measurement update
        for i in range(r):
            a[i] += P[i, 0] * e / f
        for i in range(r):
            for j in range(r):
                M[i, j] = P[i, j] - P[i, 0] * P[0, j] / f
        # time update: a <- T a, P <- T M T' + R R'
        a0 = a[0]
        for i in range(r):
            nxt = a[i + 1] if i < r - 1 else 0.0
            a[i] = (phi[i] * a0 if i < p else 0.0) + nxt
        for i in range(r):
            for j in range(r):
                val = M[i + 1, j] if i < r - 1 else 0.0
                if i < p:
                    val += phi[i] * M[0, j]
                TM[i, j] = val
        for i in range(r):
            for j in range(r):
                val = TM[i, j + 1] if j < r - 1 else 0.0
                if j < p:
                    val += phi[j] * TM[i, 0]
                P[i, j] = val + Rv[i] * Rv[j]
    return v, F, a


@njit(cache=True, nogil=True)
def css_residuals(w, phi, theta):  # pragma: no cover - compiled
    """Conditional residuals, conditioning on the first p observations."""
    n = w.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    e = np.zeros(n)
    for t in range(p, n):
        val = w[t]
        for i in range(p):
            val -= phi[i] * w[t - i - 1]
        for j in range(q):
            if t - j - 1 >= 0:
                val -= theta[j] * e[t - j - 1]
        e[t] = val
    return e


@njit(cache=True, nogil=True)
def arma_filter(eps, phi, theta):  # pragma: no cover - compiled
    """Run the ARMA recursion forward from zero initial conditions."""
    n = eps.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    x = np.zeros(n)
    for t in range(n):
        val = eps[t]
        for i in range(p):
            if t - i - 1 >= 0:
                val += phi[i] * x[t - i - 1]
        for j in range(q):
            if t - j - 1 >= 0:
                val += theta[j] * eps[t - j - 1]
        x[t] = val
    return x


@njit(cache=True, nogil=True)
def concentrated_loglik(w, phi, theta):  # pragma: no cover - compiled
    """Exact log-likelihood with sigma^2 profiled out; -inf if singular.

    Returns (loglik, sigma2_hat)."""
    n = w.shape[0]
    P0 = stationary_covariance(phi, theta)
    v, F, _ = innovations(w, phi, theta, P0)
    ssq = 0.0
    sumlog = 0.0
    for t in range(n):
        if not F[t] > 0.0:
            return -np.inf, np.nan
        ssq += v[t] * v[t] / F[t]
        sumlog += np.log(F[t])
    s2 = ssq / n
    if not s2 > 0.0:
        return -np.inf, np.nan
    ll = -0.5 * (n * (np.log(2.0 * np.pi) + np.log(s2)) + sumlog + n)
    return ll, s2


@njit(cache=True, nogil=True)
def negative_loglik(x, w, p, q, has_mean, center, scale):  # pragma: no cover - compiled
    """Optimizer objective over the unconstrained parameter vector ``x``."""
    phi = partials_to_coefs(np.tanh(x[:p]))
    theta = -partials_to_coefs(np.tanh(x[p : p + q]))
    if has_mean:
        wc = w - (center + scale * x[p + q])
    else:
        wc = w
    ll, _ = concentrated_loglik(wc, phi, theta)
    if not np.isfinite(ll):
        return 1e300
    return -ll
