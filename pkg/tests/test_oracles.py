import math

import numpy as np
import pytest
from scipy import stats

from difading import oracles


def test_chi2_cdf_closed_form_df2():
    # df = 2 is the exponential law: F(x) = 1 - exp(-x/2)
    for x in (0.1, 1.5, 4.0, 20.0):
        assert oracles.chi2_cdf(x, 2) == pytest.approx(1.0 - math.exp(-x / 2.0), rel=1e-13)


def test_chi2_cdf_closed_form_df4():
    for x in (0.5, 3.0, 9.0):
        expected = 1.0 - math.exp(-x / 2.0) * (1.0 + x / 2.0)
        assert oracles.chi2_cdf(x, 4) == pytest.approx(expected, rel=1e-13)


def test_chi2_cdf_closed_form_df1():
    for x in (0.2, 1.0, 6.25):
        assert oracles.chi2_cdf(x, 1) == pytest.approx(math.erf(math.sqrt(x / 2.0)), rel=1e-13)


def test_chi2_reference_point():
    # the worked type-I oracle value at n = 16, threshold 20
    assert oracles.chi2_sf(20.0, 16) == pytest.approx(0.22022064660169924, abs=1e-14)


@pytest.mark.parametrize("df", [1, 2, 3, 8, 16, 32, 100, 255])
def test_chi2_matches_scipy(df):
    for x in (0.01, 0.5 * df, float(df), 1.5 * df, 3.0 * df):
        assert oracles.chi2_cdf(x, df) == pytest.approx(stats.chi2.cdf(x, df), abs=1e-12)
        assert oracles.chi2_sf(x, df) == pytest.approx(stats.chi2.sf(x, df), abs=1e-12)


def test_chi2_sf_complements_cdf():
    for df in (3, 17):
        for x in (0.2, 5.0, 40.0):
            assert oracles.chi2_cdf(x, df) + oracles.chi2_sf(x, df) == pytest.approx(1.0, abs=1e-12)


def test_noncentral_reduces_to_central_at_zero():
    for df in (2, 9, 64):
        for x in (1.0, float(df), 2.5 * df):
            assert oracles.noncentral_chi2_cdf(x, df, 0.0) == pytest.approx(
                oracles.chi2_cdf(x, df), rel=1e-12
            )


@pytest.mark.parametrize(
    "df,nc",
    [(1, 0.5), (4, 2.0), (16, 16.0), (16, 1600.0), (64, 0.007), (256, 1.0), (100, 350.0)],
)
def test_noncentral_matches_scipy(df, nc):
    center = df + nc
    for x in (0.2 * center, 0.8 * center, center, 1.3 * center, 2.0 * center):
        assert oracles.noncentral_chi2_cdf(x, df, nc) == pytest.approx(
            stats.ncx2.cdf(x, df, nc), abs=1e-11
        )


def test_noncentral_cdf_monotone():
    xs = np.linspace(0.5, 80.0, 40)
    values = [oracles.noncentral_chi2_cdf(x, 10, 12.0) for x in xs]
    assert all(b >= a for a, b in zip(values, values[1:]))
    # raising the noncentrality shifts mass right, lowering the cdf
    lowered = [oracles.noncentral_chi2_cdf(x, 10, 20.0) for x in xs]
    assert all(lo <= hi + 1e-12 for lo, hi in zip(lowered, values))


def test_noncentral_sf_complement():
    assert oracles.noncentral_chi2_sf(12.0, 8, 3.0) == pytest.approx(
        1.0 - oracles.noncentral_chi2_cdf(12.0, 8, 3.0), abs=1e-13
    )


def test_reg_gamma_bounds_and_errors():
    assert oracles.reg_gamma_lower(2.5, 0.0) == 0.0
    assert oracles.reg_gamma_upper(2.5, 0.0) == 1.0
    with pytest.raises(ValueError):
        oracles.reg_gamma_lower(0.0, 1.0)
    with pytest.raises(ValueError):
        oracles.chi2_cdf(1.0, 0)
    with pytest.raises(ValueError):
        oracles.noncentral_chi2_cdf(1.0, 4, -0.1)
