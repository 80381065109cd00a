"""Information criteria. ``k`` counts every estimated parameter, the
innovation variance included."""

import math

from .errors import DegenerateInput


def aic(loglik: float, k: int) -> float:
    return 2.0 * k - 2.0 * loglik


def aicc(loglik: float, k: int, n: int) -> float:
    if n <= k + 1:
        raise DegenerateInput(f"AICc needs n > k + 1 (n={n}, k={k})")
    return aic(loglik, k) + 2.0 * k * (k + 1) / (n - k - 1)


def bic(loglik: float, k: int, n: int) -> float:
    return k * math.log(n) - 2.0 * loglik
