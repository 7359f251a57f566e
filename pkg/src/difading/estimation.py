"""Monte-Carlo estimation of identification error probabilities.

Type I (missed identification) transmits codeword i and counts rejections of
the test "was i sent?"; type II (false identification) transmits i and counts
acceptances of a different message j.  Estimates come with binomial standard
errors and, where defined, the closed-form Chebyshev reference bounds

    type I:  27 sigma_z2^2 / (n^b A^2 gamma^4)
    type II: the same term + 144 sigma_z2 (sigma_G^2 + mu_G^2) / (gamma^4 A n^b)

Slow-fading errors are worst cases over the gain support; the sup is
approximated on a finite grid with common random numbers, so per-gain
estimates differ only through the gain (paired trials).

Trials are simulated in fixed-size chunks whose random streams derive from
(seed, label, chunk index); reductions are plain sums of acceptance counts,
so estimates are reproducible no matter how chunks are distributed across
workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import oracles
from .channel import ChannelModel, FadingSpec
from .codec import Codebook, delta_n, epsilon_schedule
from .seeding import substream

_CHUNK = 4096

CSV_HEADER = (
    "n",
    "A",
    "b",
    "flavor",
    "family",
    "gamma",
    "g_max",
    "sigma_z2",
    "delta_n",
    "i",
    "j",
    "trials",
    "p_hat",
    "stderr",
    "bound",
    "argmax_g",
)


@dataclass(frozen=True)
class TrialPlan:
    """Trial count, master seed and confidence multiplier for one estimate."""

    trials: int
    seed: int = 0
    message_pair: tuple | None = None
    confidence: float = 3.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.confidence > 0:
            raise ValueError(f"confidence multiplier must be positive, got {self.confidence}")


@dataclass(frozen=True)
class ErrorReport:
    """One error-probability estimate with its context echoed for reporting."""

    error_type: str  # "type1" | "type2"
    estimate: float
    stderr: float
    chebyshev_bound: float | None
    trials: int
    flavor: str
    family: str
    n: int
    power_budget: float
    slack: float
    gamma: float
    g_max: float
    noise_variance: float
    delta: float
    i: int
    j: int | None = None
    gain: float | None = None
    argmax_gain: float | None = None
    per_gain: tuple = ()

    def confidence_interval(self, multiplier: float = 3.0):
        half = multiplier * self.stderr
        return (max(self.estimate - half, 0.0), min(self.estimate + half, 1.0))

    def csv_rows(self):
        """Rows matching CSV_HEADER; worst-case reports expand per grid point."""
        if self.per_gain:
            return [rep._csv_row(rep.gain) for rep in self.per_gain]
        return [self._csv_row(self.argmax_gain if self.argmax_gain is not None else self.gain)]

    def _csv_row(self, gain_value):
        return (
            str(self.n),
            repr(self.power_budget),
            repr(self.slack),
            self.flavor,
            self.family,
            repr(self.gamma),
            repr(self.g_max),
            repr(self.noise_variance),
            repr(self.delta),
            str(self.i),
            "" if self.j is None else str(self.j),
            str(self.trials),
            repr(self.estimate),
            repr(self.stderr),
            "" if self.chebyshev_bound is None else repr(self.chebyshev_bound),
            "" if gain_value is None else repr(float(gain_value)),
        )


def type1_chebyshev_bound(
    n: int, b: float, power_budget: float, gamma: float, noise_variance: float
) -> float:
    """27 sigma_z2^2 / (n^b A^2 gamma^4), the type-I reference bound."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return 27.0 * noise_variance**2 / (n**b * power_budget**2 * gamma**4)


def type2_chebyshev_bound(
    n: int,
    b: float,
    power_budget: float,
    gamma: float,
    noise_variance: float,
    second_moment: float,
) -> float:
    """Type-I term plus the cross-term bound 144 sigma_z2 E[G^2] / (gamma^4 A n^b)."""
    eta1 = 144.0 * noise_variance * second_moment / (gamma**4 * power_budget * n**b)
    return type1_chebyshev_bound(n, b, power_budget, gamma, noise_variance) + eta1


def _chunks(trials: int):
    full, rem = divmod(trials, _CHUNK)
    for k in range(full):
        yield k, _CHUNK
    if rem:
        yield full, rem


def _accept_count(
    codebook: Codebook,
    model: ChannelModel,
    transmit: int,
    test: int,
    delta: float,
    plan: TrialPlan,
    fixed_gain: float | None = None,
    workers: int = 1,
) -> int:
    """Number of trials in which the decoder accepts message `test`."""
    if not model.normalized:
        raise ValueError("estimators run on the normalized scale; build the model normalized")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    u_tx = codebook.codeword(transmit)
    u_te = codebook.codeword(test)
    n = codebook.dimension
    threshold = model.noise_variance + delta
    noise_scale = math.sqrt(model.noise_variance / n)

    def run_chunk(item):
        index, size = item
        z = substream(plan.seed, "noise", index).standard_normal((size, n)) * noise_scale
        if fixed_gain is not None:
            gains = float(fixed_gain)
        else:  # fast fading: fresh per-symbol gains each trial
            grng = substream(plan.seed, "gains", index)
            gains = model.fading.sample(grng, size * n).reshape(size, n)
        y = gains * u_tx + z
        resid = y - gains * u_te
        stat = np.einsum("ij,ij->i", resid, resid)
        return int((stat <= threshold).sum())

    items = list(_chunks(plan.trials))
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(run_chunk, items))
    return sum(run_chunk(item) for item in items)


def _binomial_stderr(p: float, trials: int) -> float:
    return math.sqrt(p * (1.0 - p) / trials)


def _base_report(codebook, model, error_type, estimate, plan, delta, i, j, gain, bound):
    return ErrorReport(
        error_type=error_type,
        estimate=estimate,
        stderr=_binomial_stderr(estimate, plan.trials),
        chebyshev_bound=bound,
        trials=plan.trials,
        flavor=model.flavor,
        family=model.fading.family,
        n=codebook.dimension,
        power_budget=codebook.power_budget,
        slack=codebook.slack,
        gamma=model.fading.gamma,
        g_max=model.fading.g_max,
        noise_variance=model.noise_variance,
        delta=delta,
        i=i,
        j=j,
        gain=gain,
    )


def _reference_bound(codebook, model, error_type):
    gamma = model.fading.gamma
    if gamma <= 0:
        return None
    if error_type == "type1":
        return type1_chebyshev_bound(
            codebook.dimension, codebook.slack, codebook.power_budget, gamma,
            model.noise_variance,
        )
    return type2_chebyshev_bound(
        codebook.dimension, codebook.slack, codebook.power_budget, gamma,
        model.noise_variance, model.fading.second_moment,
    )


def _check_gain_argument(model: ChannelModel, gain):
    if model.flavor == "fast":
        if gain is not None:
            raise ValueError("fast fading draws per-symbol gains; do not pass a fixed gain")
    elif gain is None:
        raise ValueError(
            "slow-fading errors are worst cases over the gain; pass gain=... for a "
            "conditional estimate or use estimate_worst_case"
        )
    elif not model.fading.contains(gain):
        raise ValueError(f"gain {gain} lies outside the fading support")


def estimate_type1(
    codebook: Codebook,
    model: ChannelModel,
    i: int,
    delta: float,
    plan: TrialPlan,
    gain: float | None = None,
    workers: int = 1,
) -> ErrorReport:
    """Missed-identification rate: transmit u_i, count rejections of message i."""
    _check_gain_argument(model, gain)
    accepts = _accept_count(codebook, model, i, i, delta, plan, fixed_gain=gain, workers=workers)
    p = 1.0 - accepts / plan.trials
    bound = _reference_bound(codebook, model, "type1")
    return _base_report(codebook, model, "type1", p, plan, delta, i, None, gain, bound)


def estimate_type2(
    codebook: Codebook,
    model: ChannelModel,
    i: int,
    j: int,
    delta: float,
    plan: TrialPlan,
    gain: float | None = None,
    workers: int = 1,
) -> ErrorReport:
    """False-identification rate: transmit u_i, count acceptances of message j != i."""
    if i == j:
        raise ValueError(f"type II error needs distinct messages, got i = j = {i}")
    _check_gain_argument(model, gain)
    accepts = _accept_count(codebook, model, i, j, delta, plan, fixed_gain=gain, workers=workers)
    p = accepts / plan.trials
    bound = _reference_bound(codebook, model, "type2")
    return _base_report(codebook, model, "type2", p, plan, delta, i, j, gain, bound)


def estimate_worst_case(
    codebook: Codebook,
    model: ChannelModel,
    i: int,
    j: int | None,
    delta: float,
    g_grid,
    plan: TrialPlan,
    workers: int = 1,
) -> ErrorReport:
    """Sup over the gain grid of the per-gain error (slow fading).

    All grid points reuse the same plan seed, so the noise draws are common
    random numbers and the per-point estimates differ only through the gain.
    Returns the maximum with its argmax gain; per-point reports are attached.
    """
    if model.flavor != "slow":
        raise ValueError("worst-case estimation applies to slow fading")
    grid = [float(g) for g in np.atleast_1d(np.asarray(g_grid, dtype=np.float64))]
    if not grid:
        raise ValueError("gain grid is empty")
    reports = []
    for g in grid:
        if j is None:
            rep = estimate_type1(codebook, model, i, delta, plan, gain=g, workers=workers)
        else:
            rep = estimate_type2(codebook, model, i, j, delta, plan, gain=g, workers=workers)
        reports.append(rep)
    worst_index = int(np.argmax([rep.estimate for rep in reports]))
    worst = reports[worst_index]
    return replace(worst, argmax_gain=grid[worst_index], per_gain=tuple(reports))


@dataclass(frozen=True)
class NearCodewordReport:
    """Outcome of the two-near-codewords experiment at one block length."""

    n: int
    power_budget: float
    slack: float
    noise_variance: float
    delta: float
    alpha_n: float  # codeword separation on the natural scale
    normalized_distance: float
    type1: ErrorReport
    type2: ErrorReport
    error_sum: float
    joint_stderr: float
    oracle_type1: float | None
    oracle_type2: float | None
    oracle_sum: float | None


def near_codeword_experiment(
    n: int,
    power_budget: float,
    b: float,
    noise_variance: float,
    fading: FadingSpec,
    plan: TrialPlan,
    normalized_distance: float | None = None,
    workers: int = 1,
) -> NearCodewordReport:
    """Two codewords at the converse-schedule spacing, probed with the standard decoder.

    The codewords sit at natural-scale distance alpha_n = sqrt(n * eps_n) with
    eps_n = A / n^(2(1+b)) (overridable via normalized_distance).  Type I is
    estimated for the first codeword and type II for the pair (2 -> 1); as the
    spacing vanishes the two hypotheses merge and the error sum approaches 1.
    For constant-gain fading the exact sum is reported alongside as a
    noncentral chi-square witness.
    """
    eps_converse = epsilon_schedule(n, power_budget, b, "converse_spacing")
    alpha_n = math.sqrt(n * eps_converse)
    d_norm = alpha_n / math.sqrt(n) if normalized_distance is None else float(normalized_distance)
    if not d_norm > 0:
        raise ValueError(f"codeword distance must be positive, got {d_norm}")
    half = 0.5 * d_norm
    if half > math.sqrt(power_budget):
        raise ValueError(
            f"distance {d_norm} places codewords outside the power ball "
            f"(half-distance {half} > sqrt(A) = {math.sqrt(power_budget)})"
        )
    words = np.zeros((2, n))
    words[0, 0] = half
    words[1, 0] = -half
    codebook = Codebook(
        dimension=n,
        power_budget=power_budget,
        slack=b,
        schedule="converse_spacing",
        epsilon_n=eps_converse,
        codewords=words,
    )
    delta = delta_n(fading.gamma, epsilon_schedule(n, power_budget, b, "achievability"))
    model = ChannelModel(flavor="fast", noise_variance=noise_variance, fading=fading)
    rep1 = estimate_type1(codebook, model, 1, delta, plan, workers=workers)
    rep2 = estimate_type2(codebook, model, 2, 1, delta, plan, workers=workers)
    error_sum = rep1.estimate + rep2.estimate
    joint = math.sqrt(rep1.stderr**2 + rep2.stderr**2)

    oracle1 = oracle2 = oracle_sum = None
    if fading.variance <= 1e-15:  # constant gain: closed-form witness
        g0 = fading.mean
        x = n * (noise_variance + delta) / noise_variance
        oracle1 = oracles.chi2_sf(x, n)
        lam = n * (g0 * d_norm) ** 2 / noise_variance
        oracle2 = oracles.noncentral_chi2_cdf(x, n, lam)
        oracle_sum = oracle1 + oracle2

    return NearCodewordReport(
        n=n,
        power_budget=power_budget,
        slack=b,
        noise_variance=noise_variance,
        delta=delta,
        alpha_n=alpha_n,
        normalized_distance=d_norm,
        type1=rep1,
        type2=rep2,
        error_sum=error_sum,
        joint_stderr=joint,
        oracle_type1=oracle1,
        oracle_type2=oracle2,
        oracle_sum=oracle_sum,
    )
