"""Residual hypothesis tests: Ljung-Box, Shapiro-Wilk and KPSS."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, UnsupportedSampleSize
from .series import acf, as_array
from .special import chi2_sf, norm_ppf, norm_sf

CLIP_NONE = "none"
CLIP_LOWER = "at_lower"
CLIP_UPPER = "at_upper"

# Kwiatkowski et al. level-stationarity critical values (upper tail).
KPSS_CRITICAL = np.array([0.347, 0.463, 0.574, 0.739])
KPSS_PVALUES = np.array([0.10, 0.05, 0.025, 0.01])


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df_or_n: int
    clipped: str = CLIP_NONE
    name: str = ""
    lags: int | None = None

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "df_or_n": self.df_or_n,
            "clipped": self.clipped,
            "lags": self.lags,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TestResult":
        return cls(
            statistic=d["statistic"],
            p_value=d["p_value"],
            df_or_n=d["df_or_n"],
            clipped=d.get("clipped", CLIP_NONE),
            name=d.get("name", ""),
            lags=d.get("lags"),
        )


def default_lb_lags(n: int) -> int:
    return max(1, min(10, n // 5))


def ljung_box(residuals, lags: int, fitdf: int = 0) -> TestResult:
    """Ljung-Box portmanteau test on the first ``lags`` autocorrelations."""
    x = as_array(residuals)
    n = x.size
    if fitdf < 0 or fitdf >= lags:
        raise DegenerateInput(f"fitdf must be in [0, lags), got fitdf={fitdf}, lags={lags}")
    if not 0 < lags < n:
        raise DegenerateInput(f"lags must be in [1, {n - 1}], got {lags}")
    rho = acf(x, lags)[1:]
    k = np.arange(1, lags + 1)
    q = float(n * (n + 2) * np.sum(rho**2 / (n - k)))
    df = lags - fitdf
    return TestResult(q, chi2_sf(q, df), df, name="ljung_box", lags=lags)


# Royston (1995) polynomial approximations.
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)


def _poly(coefs, x):
    return sum(c * x**i for i, c in enumerate(coefs))


def normal_scores(n: int) -> np.ndarray:
    """Blom-style approximate expected normal order statistics m_i."""
    return np.array([norm_ppf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)])


def shapiro_wilk_weights(n: int) -> np.ndarray:
    """Antisymmetric Shapiro-Wilk coefficients a_1..a_n (ascending order)."""
    if n < 3:
        raise UnsupportedSampleSize(f"Shapiro-Wilk needs n >= 3, got {n}")
    half = n // 2
    a = np.zeros(half)
    if n == 3:
        a[0] = math.sqrt(0.5)
    else:
        m = normal_scores(n)[:half]
        summ2 = 2.0 * float(np.dot(m, m))
        ssumm2 = math.sqrt(summ2)
        rsn = 1.0 / math.sqrt(n)
        a1 = _poly(_C1, rsn) - m[0] / ssumm2
        if n > 5:
            first = 2
            a2 = -m[1] / ssumm2 + _poly(_C2, rsn)
            fac = math.sqrt(
                (summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
                / (1.0 - 2.0 * a1**2 - 2.0 * a2**2)
            )
            a[1] = a2
        else:
            first = 1
            fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1**2))
        a[0] = a1
        a[first:] = -m[first:] / fac
    full = np.zeros(n)
    full[:half] = -a
    full[n - half :] = a[::-1]
    return full


def _sw_pvalue(w: float, n: int) -> float:
    if n == 3:
        # exact null distribution
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.pi / 3.0)
        return min(max(p, 0.0), 1.0)
    y = math.log1p(-w) if w < 1.0 else -math.inf
    if y == -math.inf:
        return 1.0
    if n <= 11:
        gamma = _poly(_G, n)
        if y >= gamma:
            return 1e-99
        y = -math.log(gamma - y)
        m = _poly(_C3, n)
        s = math.exp(_poly(_C4, n))
    else:
        xx = math.log(n)
        m = _poly(_C5, xx)
        s = math.exp(_poly(_C6, xx))
    return norm_sf((y - m) / s)


def shapiro_wilk(x) -> TestResult:
    """Shapiro-Wilk W with Royston's normalizing approximation for the p-value."""
    x = np.sort(as_array(x))
    n = x.size
    if n < 3 or n > 5000:
        raise UnsupportedSampleSize(f"Shapiro-Wilk supports 3 <= n <= 5000, got {n}")
    if x[-1] - x[0] <= 1e-19 * max(1.0, abs(x[-1])):
        raise DegenerateInput("Shapiro-Wilk is undefined for a constant sample")
    a = shapiro_wilk_weights(n)
    xc = (x - x.mean()) / (x[-1] - x[0])
    ac = a - a.mean()
    sax = float(np.dot(ac, xc))
    ssa = float(np.dot(ac, ac))
    ssx = float(np.dot(xc, xc))
    root = math.sqrt(ssa * ssx)
    one_minus_w = (root - sax) * (root + sax) / (ssa * ssx)
    w = 1.0 - one_minus_w
    w = min(w, 1.0)
    return TestResult(w, _sw_pvalue(w, n), n, name="shapiro_wilk")


def kpss_bandwidth(n: int, kind: str = "short") -> int:
    if kind == "short":
        return int(4.0 * (n / 100.0) ** 0.25)
    if kind == "long":
        return int(12.0 * (n / 100.0) ** 0.25)
    if kind == "none":
        return 0
    raise ValueError(f"unknown bandwidth rule {kind!r}")


def long_run_variance(e: np.ndarray, lags: int) -> float:
    """Bartlett-kernel long-run variance of an already centered series."""
    n = e.size
    s = float(np.dot(e, e)) / n
    for j in range(1, lags + 1):
        weight = 1.0 - j / (lags + 1.0)
        s += 2.0 * weight * float(np.dot(e[j:], e[:-j])) / n
    return s


def kpss_pvalue(stat: float) -> tuple[float, str]:
    if stat < KPSS_CRITICAL[0]:
        return float(KPSS_PVALUES[0]), CLIP_UPPER
    if stat > KPSS_CRITICAL[-1]:
        return float(KPSS_PVALUES[-1]), CLIP_LOWER
    return float(np.interp(stat, KPSS_CRITICAL, KPSS_PVALUES)), CLIP_NONE


def kpss(x, lags: int | None = None, bandwidth: str = "short") -> TestResult:
    """KPSS test of level stationarity; p-value read off the critical table."""
    x = as_array(x)
    n = x.size
    if n < 10:
        raise DegenerateInput(f"KPSS needs at least 10 observations, got {n}")
    e = x - x.mean()
    if np.ptp(x) == 0 or not np.dot(e, e) > 0:
        raise DegenerateInput("KPSS is undefined for a constant series")
    if lags is None:
        lags = kpss_bandwidth(n, bandwidth)
    lags = min(int(lags), n - 1)
    s = np.cumsum(e)
    eta = float(np.dot(s, s)) / (n * n * long_run_variance(e, lags))
    p, clipped = kpss_pvalue(eta)
    return TestResult(eta, p, n, clipped, name="kpss", lags=lags)
