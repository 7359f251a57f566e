"""Closed-form distribution oracles used as ground truth for the simulators.

Central and noncentral chi-square tails are evaluated here from scratch
(regularized incomplete gamma by series / continued fraction, Poisson mixture
for the noncentral case) so that Monte-Carlo estimates are checked against an
implementation that shares no code with the sampling path.
"""

import math

_MAX_ITER = 10_000
_EPS = 1e-15
_TINY = 1e-300


def _lower_gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series (x < a + 1)."""
    if x <= 0.0:
        return 0.0
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def reg_gamma_lower(a: float, x: float) -> float:
    """P(a, x), the regularized lower incomplete gamma function."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _lower_gamma_series(a, x)
    return 1.0 - _upper_gamma_cf(a, x)


def reg_gamma_upper(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _lower_gamma_series(a, x)
    return _upper_gamma_cf(a, x)


def chi2_cdf(x: float, df: float) -> float:
    """Pr(chi2_df <= x)."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if x <= 0.0:
        return 0.0
    return reg_gamma_lower(0.5 * df, 0.5 * x)


def chi2_sf(x: float, df: float) -> float:
    """Pr(chi2_df > x)."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if x <= 0.0:
        return 1.0
    return reg_gamma_upper(0.5 * df, 0.5 * x)


def _log_poisson_pmf(j: int, mean: float) -> float:
    return -mean + j * math.log(mean) - math.lgamma(j + 1.0)


def noncentral_chi2_cdf(x: float, df: float, noncentrality: float) -> float:
    """Pr(X <= x) for X noncentral chi-square with given df and noncentrality.

    Poisson mixture over central chi-square terms, expanded outward from the
    mixture mode; the gamma terms are advanced by the stable recurrence
    P(a+1, y) = P(a, y) - y^a e^-y / Gamma(a+1).
    """
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if noncentrality < 0:
        raise ValueError(f"noncentrality must be nonnegative, got {noncentrality}")
    if x <= 0.0:
        return 0.0
    if noncentrality == 0.0:
        return chi2_cdf(x, df)
    half_nc = 0.5 * noncentrality
    y = 0.5 * x
    j0 = int(half_nc)

    def log_gamma_term(j):
        # log of y^(df/2 + j - 1 + 1) e^-y / Gamma(df/2 + j + 1): the step between
        # consecutive regularized lower gammas.
        a = 0.5 * df + j
        return a * math.log(y) - y - math.lgamma(a + 1.0)

    p_center = reg_gamma_lower(0.5 * df + j0, y)
    total = math.exp(_log_poisson_pmf(j0, half_nc)) * p_center

    # upward from the mode: P(a+1) = P(a) - t(a)
    p = p_center
    for j in range(j0, j0 + _MAX_ITER):
        t = math.exp(log_gamma_term(j))
        p = max(p - t, 0.0)
        w = math.exp(_log_poisson_pmf(j + 1, half_nc))
        contrib = w * p
        total += contrib
        if contrib < total * _EPS and j > j0 + 2:
            break

    # downward from the mode: P(a) = P(a+1) + t(a)
    p = p_center
    for j in range(j0 - 1, -1, -1):
        p = min(p + math.exp(log_gamma_term(j)), 1.0)
        w = math.exp(_log_poisson_pmf(j, half_nc))
        contrib = w * p
        total += contrib
        if contrib < total * _EPS and j < j0 - 2:
            break

    return min(total, 1.0)


def noncentral_chi2_sf(x: float, df: float, noncentrality: float) -> float:
    """Pr(X > x) for the noncentral chi-square law."""
    return max(1.0 - noncentral_chi2_cdf(x, df, noncentrality), 0.0)
