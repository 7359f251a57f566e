"""Identification codebooks from sphere packings and the CSI threshold decoder.

Codewords are the centers of a saturated packing of radius-sqrt(eps_n)
spheres with centers inside the ball of radius sqrt(A) - sqrt(eps_n), stored
on the normalized scale (||u_i|| <= sqrt(A)); the natural scale is obtained by
multiplying with sqrt(n) at the boundary.  Two shrinking-radius schedules are
provided:

* ``achievability``:    eps_n = A / n^((1-b)/2), used to build codebooks;
* ``converse_spacing``: eps_n = A / n^(2(1+b)), used only for minimum-distance
  checks and the near-codeword experiment.

The decoder answers "was message j sent?" by comparing the squared distance
between the (normalized) output and gain-scaled codeword against
sigma_z2 + delta_n, with slack delta_n = gamma^2 * eps_n / 3.  Ties at the
threshold accept (closed decision region).  Message indices are 1-based.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    PackingConfig,
    _format_float,
    generate_saturated_packing,
    min_pairwise_distance,
    parse_header_lines,
)

SCHEDULES = ("achievability", "converse_spacing")

_NORM_SLACK = 1.0 + 1e-12


def epsilon_schedule(n: int, power_budget: float, b: float, schedule: str) -> float:
    """Codeword-sphere radius-squared parameter eps_n for the given schedule."""
    if n < 2:
        raise ValueError(f"block length must be >= 2, got {n}")
    if not power_budget > 0:
        raise ValueError(f"power budget must be positive, got {power_budget}")
    if not 0.0 <= b < 1.0:
        raise ValueError(f"slack exponent b must lie in [0, 1), got {b}")
    if schedule == "achievability":
        return power_budget / n ** (0.5 * (1.0 - b))
    if schedule == "converse_spacing":
        return power_budget / n ** (2.0 * (1.0 + b))
    raise ValueError(f"unknown schedule {schedule!r}")


def delta_n(gamma: float, epsilon_n: float) -> float:
    """Decoder threshold slack gamma^2 * eps_n / 3."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not epsilon_n > 0:
        raise ValueError(f"epsilon_n must be positive, got {epsilon_n}")
    return gamma * gamma * epsilon_n / 3.0


@dataclass(frozen=True)
class Codebook:
    """Codeword list on the normalized scale plus its construction metadata."""

    dimension: int
    power_budget: float
    slack: float
    schedule: str
    epsilon_n: float
    codewords: np.ndarray
    seed: int | None = None
    saturated: bool | None = None

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}")
        words = np.asarray(self.codewords, dtype=np.float64)
        if words.ndim != 2 or words.shape[1] != self.dimension:
            raise ValueError("codewords must be a (count, dimension) array")
        if words.shape[0] < 1:
            raise ValueError("codebook is empty")
        root_a = math.sqrt(self.power_budget)
        norms = np.linalg.norm(words, axis=1)
        if norms.max() > root_a * _NORM_SLACK:
            raise ValueError(
                f"codeword norm {norms.max()} exceeds sqrt(power budget) = {root_a}"
            )
        object.__setattr__(self, "codewords", words)

    @property
    def size(self) -> int:
        return self.codewords.shape[0]

    @property
    def min_distance(self) -> float:
        """Smallest pairwise codeword distance (nan for a single codeword)."""
        if self.size < 2:
            return math.nan
        return min_pairwise_distance(self.codewords)

    def codeword(self, i: int) -> np.ndarray:
        """Codeword of message i (messages are numbered 1..size)."""
        if not 1 <= i <= self.size:
            raise IndexError(f"message index {i} outside 1..{self.size}")
        return self.codewords[i - 1]

    def unnormalized_codewords(self) -> np.ndarray:
        return self.codewords * math.sqrt(self.dimension)


def build_codebook(
    n: int,
    power_budget: float,
    b: float,
    schedule: str = "achievability",
    seed: int = 0,
    patience: int = 100_000,
    max_codewords: int = 100_000,
) -> Codebook:
    """Saturated-packing codebook: r0 = sqrt(eps_n), r1 = sqrt(A) - sqrt(eps_n)."""
    eps = epsilon_schedule(n, power_budget, b, schedule)
    root_a = math.sqrt(power_budget)
    r0 = math.sqrt(eps)
    r1 = root_a - r0
    if r1 <= 0:
        raise ValueError(
            f"degenerate geometry: sqrt(eps_n) = {r0} is not below sqrt(A) = {root_a}"
        )
    packing = generate_saturated_packing(
        PackingConfig(
            dimension=n,
            r0=r0,
            r1=r1,
            seed=seed,
            saturation_patience=patience,
            max_codewords=max_codewords,
        )
    )
    if packing.count == 0:  # unreachable: the first candidate is always accepted
        raise ValueError("packing produced no codewords")
    return Codebook(
        dimension=n,
        power_budget=power_budget,
        slack=b,
        schedule=schedule,
        epsilon_n=eps,
        codewords=packing.centers,
        seed=seed,
        saturated=packing.saturated,
    )


def encode(codebook: Codebook, i: int) -> np.ndarray:
    """Transmit codeword of message i unchanged (normalized scale)."""
    return codebook.codeword(i)


@dataclass(frozen=True)
class DecoderRule:
    """Distance threshold test for one codebook at one noise level."""

    codebook: Codebook
    noise_variance: float
    delta: float
    flavor: str

    def __post_init__(self):
        if not self.noise_variance > 0:
            raise ValueError(f"noise variance must be positive, got {self.noise_variance}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.flavor not in ("fast", "slow"):
            raise ValueError(f"unknown flavor {self.flavor!r}")

    @property
    def threshold(self) -> float:
        """Acceptance radius sqrt(sigma_z2 + delta) on the normalized scale."""
        return math.sqrt(self.noise_variance + self.delta)


def identify(rule: DecoderRule, y, j: int, csi) -> bool:
    """True iff ||y - csi o u_j||^2 <= sigma_z2 + delta (ties accept).

    csi is the realized gain vector (fast) or scalar (slow); y is the
    normalized channel output.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    u = rule.codebook.codeword(j)
    if y.shape[0] != u.shape[0]:
        raise ValueError(f"output length {y.shape[0]} does not match block length {u.shape[0]}")
    if rule.flavor == "fast":
        gains = np.asarray(csi, dtype=np.float64).reshape(-1)
        if gains.shape[0] != u.shape[0]:
            raise ValueError(
                f"CSI length {gains.shape[0]} does not match block length {u.shape[0]}"
            )
    else:
        if np.ndim(csi) != 0:
            raise ValueError("slow fading expects scalar CSI")
        gains = float(csi)
    diff = y - gains * u
    return float(diff @ diff) <= rule.noise_variance + rule.delta


# ---------------------------------------------------------------------------
# Codebook files: packing serialization plus schedule metadata
# ---------------------------------------------------------------------------

CODEBOOK_FORMAT = "difading-codebook-v1"


def codebook_to_text(codebook: Codebook) -> str:
    lines = [
        f"format = {CODEBOOK_FORMAT}",
        f"dimension = {codebook.dimension}",
        f"power_budget = {_format_float(codebook.power_budget)}",
        f"slack = {_format_float(codebook.slack)}",
        f"schedule = {codebook.schedule}",
        f"epsilon_n = {_format_float(codebook.epsilon_n)}",
        f"seed = {'none' if codebook.seed is None else codebook.seed}",
        f"saturated = {'none' if codebook.saturated is None else str(codebook.saturated).lower()}",
        f"min_distance = {_format_float(codebook.min_distance)}",
        f"count = {codebook.size}",
        "centers:",
    ]
    for row in codebook.codewords:
        lines.append(" ".join(_format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def codebook_from_text(text: str) -> Codebook:
    lines = text.splitlines()
    header, body_start = parse_header_lines(lines)
    if header.get("format") != CODEBOOK_FORMAT:
        raise ValueError(f"unsupported format {header.get('format')!r}")
    count = int(header["count"])
    rows = [line.split() for line in lines[body_start:] if line.strip()]
    if len(rows) != count:
        raise ValueError(f"expected {count} codeword rows, found {len(rows)}")
    dimension = int(header["dimension"])
    words = np.array([[float(v) for v in row] for row in rows], dtype=np.float64)
    words = words.reshape(count, dimension)
    seed = None if header["seed"] == "none" else int(header["seed"])
    saturated = None if header["saturated"] == "none" else header["saturated"] == "true"
    return Codebook(
        dimension=dimension,
        power_budget=float(header["power_budget"]),
        slack=float(header["slack"]),
        schedule=header["schedule"],
        epsilon_n=float(header["epsilon_n"]),
        codewords=words,
        seed=seed,
        saturated=saturated,
    )


def save_codebook(codebook: Codebook, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(codebook_to_text(codebook))


def load_codebook(path) -> Codebook:
    with open(path, "r", encoding="utf-8") as fh:
        return codebook_from_text(fh.read())
