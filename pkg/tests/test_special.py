import math

import numpy as np
import pytest

from arimakit.special import chi2_sf, gamma_q, norm_cdf, norm_ppf
from oracles import chi2_sf_mp, norm_ppf_mp

CHI2_GRID = [
    (df, x)
    for df in (1, 2, 3, 4, 5, 7, 10, 15, 25, 50)
    for x in (0.05, 0.7, 2.5, 9.0, 40.0)
]


@pytest.mark.parametrize("df,x", CHI2_GRID)
def test_chi2_tail_against_mpmath(df, x):
    assert chi2_sf(x, df) == pytest.approx(chi2_sf_mp(x, df), abs=1e-10)


def test_chi2_tail_at_zero():
    for df in (1, 3, 8):
        assert chi2_sf(0.0, df) == 1.0


def test_chi2_tail_strictly_decreasing():
    for df in (1, 4, 9):
        xs = np.linspace(0.01, 60, 300)
        vals = [chi2_sf(x, df) for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]) if b > 1e-300)


def test_chi2_known_value():
    # P(chi2_1 > 3.841458820694124) = 0.05
    assert chi2_sf(3.841458820694124, 1) == pytest.approx(0.05, abs=1e-12)


def test_gamma_q_rejects_bad_shape():
    with pytest.raises(ValueError):
        gamma_q(0.0, 1.0)


@pytest.mark.parametrize("p", np.linspace(0.005, 0.995, 50))
def test_norm_ppf_against_mpmath(p):
    assert norm_ppf(p) == pytest.approx(norm_ppf_mp(p), abs=1e-12)


@pytest.mark.parametrize("p", [1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 1 - 1e-12])
def test_norm_ppf_tails(p):
    assert norm_ppf(p) == pytest.approx(norm_ppf_mp(p), rel=1e-12)


def test_norm_round_trip_grid():
    for p in np.linspace(0.001, 0.999, 100):
        assert norm_cdf(norm_ppf(p)) == pytest.approx(p, abs=1e-10)


def test_norm_ppf_edges():
    assert norm_ppf(0.0) == -math.inf
    assert norm_ppf(1.0) == math.inf
    assert norm_ppf(0.5) == 0.0
    with pytest.raises(ValueError):
        norm_ppf(1.5)
