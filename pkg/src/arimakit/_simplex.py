"""Compiled Nelder-Mead simplex search over the two ARMA objectives.

Stops when the spread of function values across the simplex drops below
``fatol`` or after ``max_iter`` iterations. Dimensions above four use the
Gao-Han adaptive coefficients.
"""

import numpy as np
from numba import njit

from ._kalman import css_residuals, negative_loglik

EXACT = 0
CSS = 1


@njit(cache=True, nogil=True)
def css_objective(x, w, p, q, has_mean, center, scale):  # pragma: no cover - compiled
    """Half log mean square of conditional residuals over raw coefficients."""
    phi = x[:p]
    theta = x[p : p + q]
    for j in range(q):
        if abs(theta[j]) > 10.0:
            return 1e300
    mu = center + scale * x[p + q] if has_mean else 0.0
    e = css_residuals(w - mu, phi, theta)
    m = w.shape[0] - p
    ssq = 0.0
    for t in range(p, w.shape[0]):
        ssq += e[t] * e[t]
    val = ssq / m
    if not (val > 0.0 and np.isfinite(val)):
        return 1e300
    return 0.5 * np.log(val)


@njit(cache=True, nogil=True)
def _evaluate(kind, x, w, p, q, has_mean, center, scale):  # pragma: no cover - compiled
    if kind == EXACT:
        return negative_loglik(x, w, p, q, has_mean, center, scale)
    return css_objective(x, w, p, q, has_mean, center, scale)


@njit(cache=True, nogil=True)
def _order(sim, fsim):  # pragma: no cover - compiled
    idx = np.argsort(fsim, kind="mergesort")
    return sim[idx].copy(), fsim[idx].copy()


@njit(cache=True, nogil=True)
def minimize(kind, x0, step, fatol, max_iter, w, p, q, has_mean, center, scale):  # pragma: no cover - compiled
    """Return (x_best, f_best, iterations, converged)."""
    n = x0.shape[0]
    if n > 4:
        rho, chi = 1.0, 1.0 + 2.0 / n
        psi, sigma = 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n
    else:
        rho, chi, psi, sigma = 1.0, 2.0, 0.5, 0.5
    sim = np.empty((n + 1, n))
    fsim = np.empty(n + 1)
    for i in range(n + 1):
        sim[i] = x0
        if i > 0:
            sim[i, i - 1] += step
        fsim[i] = _evaluate(kind, sim[i], w, p, q, has_mean, center, scale)
    sim, fsim = _order(sim, fsim)
    it = 0
    converged = False
    while it < max_iter:
        spread = 0.0
        for i in range(1, n + 1):
            spread = max(spread, abs(fsim[i] - fsim[0]))
        if spread <= fatol:
            converged = True
            break
        xbar = np.zeros(n)
        for i in range(n):
            xbar += sim[i]
        xbar /= n
        worst = sim[n]
        xr = (1.0 + rho) * xbar - rho * worst
        fxr = _evaluate(kind, xr, w, p, q, has_mean, center, scale)
        shrink = False
        if fxr < fsim[0]:
            xe = (1.0 + rho * chi) * xbar - rho * chi * worst
            fxe = _evaluate(kind, xe, w, p, q, has_mean, center, scale)
            if fxe < fxr:
                sim[n] = xe
                fsim[n] = fxe
            else:
                sim[n] = xr
                fsim[n] = fxr
        elif fxr < fsim[n - 1]:
            sim[n] = xr
            fsim[n] = fxr
        elif fxr < fsim[n]:
            xc = (1.0 + psi * rho) * xbar - psi * rho * worst
            fxc = _evaluate(kind, xc, w, p, q, has_mean, center, scale)
            if fxc <= fxr:
                sim[n] = xc
                fsim[n] = fxc
            else:
                shrink = True
        else:
            xcc = (1.0 - psi) * xbar + psi * worst
            fxcc = _evaluate(kind, xcc, w, p, q, has_mean, center, scale)
            if fxcc < fsim[n]:
                sim[n] = xcc
                fsim[n] = fxcc
            else:
                shrink = True
        if shrink:
            for j in range(1, n + 1):
                sim[j] = sim[0] + sigma * (sim[j] - sim[0])
                fsim[j] = _evaluate(kind, sim[j], w, p, q, has_mean, center, scale)
        it += 1
        sim, fsim = _order(sim, fsim)
    return sim[0].copy(), fsim[0], it, converged
