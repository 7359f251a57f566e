"""Fading and noise sampling plus the fading Gaussian channel laws.

Fast fading draws a fresh i.i.d. gain per channel use; slow fading holds one
gain for the whole block.  Three bounded gain families are provided (uniform
interval, Rayleigh truncated to an interval, finite discrete support), each
carrying its infimum gamma, supremum g_max and closed-form first two moments.
Supports touching zero are refused unless explicitly opted in, since every
constructive decoder bound divides by gamma.

The channel can be run on the natural scale (noise variance sigma_z2) or the
normalized scale (inputs divided by sqrt(n), noise variance sigma_z2 / n);
both paths use the same underlying draws, so normalizing after the fact and
running normalized agree to floating-point accuracy.
"""

import math
from dataclasses import dataclass

import numpy as np

from .seeding import substream

FAMILIES = ("uniform", "truncated_rayleigh", "discrete")
FLAVORS = ("fast", "slow")

_POWER_SLACK = 1.0 + 1e-12


def _rayleigh_sf(x: float, scale: float) -> float:
    return math.exp(-0.5 * (x / scale) ** 2)


def _truncated_rayleigh_moments(scale: float, lo: float, hi: float):
    """Mean and second moment of a Rayleigh(scale) conditioned on [lo, hi]."""
    s_lo = _rayleigh_sf(lo, scale)
    s_hi = _rayleigh_sf(hi, scale)
    z = s_lo - s_hi
    if z <= 0:
        raise ValueError(f"truncation interval [{lo}, {hi}] has zero mass")
    root_half_pi = math.sqrt(0.5 * math.pi)
    erf_term = math.erf(hi / (scale * math.sqrt(2.0))) - math.erf(lo / (scale * math.sqrt(2.0)))
    mean = (lo * s_lo - hi * s_hi + scale * root_half_pi * erf_term) / z
    second = ((lo**2 + 2.0 * scale**2) * s_lo - (hi**2 + 2.0 * scale**2) * s_hi) / z
    return mean, second


@dataclass(frozen=True)
class FadingSpec:
    """Bounded fading-gain distribution with its support edges and moments."""

    family: str
    gamma: float  # essential infimum of |G|
    g_max: float
    mean: float
    second_moment: float
    degenerate_zero: bool = False
    scale: float | None = None  # truncated_rayleigh only
    values: tuple | None = None  # discrete only
    weights: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown fading family {self.family!r}")
        if not math.isfinite(self.g_max):
            raise ValueError("fading support must be bounded")
        if self.degenerate_zero:
            if self.gamma != 0.0:
                raise ValueError("degenerate_zero requires the support to reach 0")
        elif not self.gamma > 0.0:
            raise ValueError(
                "support infimum must be positive (pass allow_zero=True for the "
                "degenerate experiment)"
            )
        if self.gamma > self.g_max:
            raise ValueError(f"gamma={self.gamma} exceeds g_max={self.g_max}")
        if self.second_moment < self.mean**2 - 1e-15:
            raise ValueError("second moment below squared mean")

    @classmethod
    def uniform(cls, lo: float, hi: float, allow_zero: bool = False) -> "FadingSpec":
        """Uniform gains on [lo, hi], 0 <= lo <= hi."""
        if lo < 0 or hi < lo:
            raise ValueError(f"need 0 <= lo <= hi, got [{lo}, {hi}]")
        return cls(
            family="uniform",
            gamma=lo,
            g_max=hi,
            mean=0.5 * (lo + hi),
            second_moment=(lo * lo + lo * hi + hi * hi) / 3.0,
            degenerate_zero=(lo == 0.0) and allow_zero,
        )

    @classmethod
    def truncated_rayleigh(
        cls, scale: float, lo: float, hi: float, allow_zero: bool = False
    ) -> "FadingSpec":
        """Rayleigh(scale) amplitude conditioned on lo <= G <= hi."""
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        if lo < 0 or hi <= lo:
            raise ValueError(f"need 0 <= lo < hi, got [{lo}, {hi}]")
        mean, second = _truncated_rayleigh_moments(scale, lo, hi)
        return cls(
            family="truncated_rayleigh",
            gamma=lo,
            g_max=hi,
            mean=mean,
            second_moment=second,
            degenerate_zero=(lo == 0.0) and allow_zero,
            scale=scale,
        )

    @classmethod
    def discrete(cls, values, weights=None, allow_zero: bool = False) -> "FadingSpec":
        """Finite weighted support; weights default to uniform."""
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError("discrete support is empty")
        if weights is None:
            wts = tuple(1.0 / len(vals) for _ in vals)
        else:
            wts = tuple(float(w) for w in weights)
            if len(wts) != len(vals):
                raise ValueError("values and weights differ in length")
            if any(w < 0 for w in wts):
                raise ValueError("weights must be nonnegative")
            total = sum(wts)
            if total <= 0:
                raise ValueError("weights sum to zero")
            wts = tuple(w / total for w in wts)
        mean = sum(v * w for v, w in zip(vals, wts))
        second = sum(v * v * w for v, w in zip(vals, wts))
        gamma = min(abs(v) for v in vals)
        g_max = max(abs(v) for v in vals)
        return cls(
            family="discrete",
            gamma=gamma,
            g_max=g_max,
            mean=mean,
            second_moment=second,
            degenerate_zero=(gamma == 0.0) and allow_zero,
            values=vals,
            weights=wts,
        )

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2

    def contains(self, g: float) -> bool:
        """Whether a gain value lies in the support."""
        if self.family == "discrete":
            return float(g) in self.values
        return self.gamma <= g <= self.g_max

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """size i.i.d. gains from the family."""
        if self.family == "uniform":
            return rng.uniform(self.gamma, self.g_max, size)
        if self.family == "truncated_rayleigh":
            s_lo = _rayleigh_sf(self.gamma, self.scale)
            s_hi = _rayleigh_sf(self.g_max, self.scale)
            u = rng.random(size)
            survival = s_lo - u * (s_lo - s_hi)
            return self.scale * np.sqrt(-2.0 * np.log(survival))
        return rng.choice(np.asarray(self.values), size=size, p=np.asarray(self.weights))

    def support_grid(self, resolution: int = 33) -> np.ndarray:
        """Finite grid over the support for sup-approximation (endpoints included)."""
        if resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {resolution}")
        if self.family == "discrete":
            return np.array(sorted(set(self.values)), dtype=np.float64)
        return np.linspace(self.gamma, self.g_max, resolution)


@dataclass(frozen=True)
class ChannelModel:
    """Fast or slow fading Gaussian channel with optional 1/sqrt(n) normalization."""

    flavor: str
    noise_variance: float
    fading: FadingSpec
    normalized: bool = True

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if not self.noise_variance > 0:
            raise ValueError(f"noise variance must be positive, got {self.noise_variance}")


@dataclass(frozen=True)
class ChannelRealization:
    """One realized channel: gains (vector for fast, scalar for slow) and noise."""

    gains: object
    noise: np.ndarray

    def __post_init__(self):
        noise = np.asarray(self.noise, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(noise)):
            raise ValueError("noise entries must be finite")
        object.__setattr__(self, "noise", noise)


def sample_fading(spec: FadingSpec, flavor: str, n: int, rng: np.random.Generator):
    """Fast: n i.i.d. gains; slow: one gain held for the whole block (scalar)."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    if flavor == "fast":
        return spec.sample(rng, n)
    return float(spec.sample(rng, 1)[0])


def sample_noise(
    noise_variance: float, n: int, normalized: bool, rng: np.random.Generator
) -> np.ndarray:
    """n i.i.d. zero-mean Gaussians, variance sigma_z2 (or sigma_z2/n if normalized)."""
    if not noise_variance > 0:
        raise ValueError(f"noise variance must be positive, got {noise_variance}")
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    scale = math.sqrt(noise_variance)
    if normalized:
        scale /= math.sqrt(n)
    return rng.standard_normal(n) * scale


def realize(model: ChannelModel, n: int, seed: int, trial: int | None = None) -> ChannelRealization:
    """Draw gains and noise from disjoint labeled substreams of the seed."""
    indices = () if trial is None else (trial,)
    gains = sample_fading(model.fading, model.flavor, n, substream(seed, "gains", *indices))
    noise = sample_noise(
        model.noise_variance, n, model.normalized, substream(seed, "noise", *indices)
    )
    return ChannelRealization(gains=gains, noise=noise)


def apply_channel(
    model: ChannelModel, x, realization: ChannelRealization, power_budget: float
) -> np.ndarray:
    """Channel output gains*x + noise after validating shape and transmit power.

    The power constraint is ||x||^2 <= n * power_budget on the natural scale
    and ||x|| <= sqrt(power_budget) on the normalized scale.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    n = x.shape[0]
    if realization.noise.shape[0] != n:
        raise ValueError(
            f"noise length {realization.noise.shape[0]} does not match input length {n}"
        )
    if model.flavor == "fast":
        gains = np.asarray(realization.gains, dtype=np.float64).reshape(-1)
        if gains.shape[0] != n:
            raise ValueError(f"gain length {gains.shape[0]} does not match input length {n}")
    else:
        if np.ndim(realization.gains) != 0:
            raise ValueError("slow fading expects a scalar gain")
        gains = float(realization.gains)
    if not power_budget > 0:
        raise ValueError(f"power budget must be positive, got {power_budget}")
    norm_sq = float(x @ x)
    if model.normalized:
        if norm_sq > power_budget * _POWER_SLACK:
            raise ValueError(
                f"invalid codeword: ||x||^2 = {norm_sq} exceeds power budget {power_budget}"
            )
    else:
        if norm_sq > n * power_budget * _POWER_SLACK:
            raise ValueError(
                f"invalid codeword: ||x||^2 = {norm_sq} exceeds n * power budget "
                f"{n * power_budget}"
            )
    return gains * x + realization.noise
