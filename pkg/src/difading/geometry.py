"""Hypersphere volume arithmetic and saturated sphere packings in a ball.

Codebooks are built from packings of non-overlapping radius-``r0`` spheres
whose centers lie in the ball of radius ``r1`` around the origin (the spheres
themselves may overhang the ball).  A greedy rejection sampler generates the
packing; a run is declared *saturated* once ``saturation_patience``
consecutive candidates have been rejected.  A truly saturated packing covers
at least the fraction ``2^-n`` of the big ball with small spheres (doubling
the small radius covers everything, and doubling multiplies volumes by
``2^n``), hence contains at least ``2^-n * (r1/r0)^n`` spheres.

All volume computations run in the log domain to stay finite for large
dimensions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .seeding import substream

_BATCH = 2048
_CENTER_BLOCK = 4096
# Microscopic slack for re-verifying distances computed through BLAS reductions.
_FP_GUARD = 1e-12


def log_sphere_volume(n: int, r: float) -> float:
    """Natural log of the volume of the n-dimensional ball of radius r."""
    if n < 1 or int(n) != n:
        raise ValueError(f"dimension must be a positive integer, got {n}")
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    if r == 0:
        return -math.inf
    return 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0) + n * math.log(r)


def sphere_volume(n: int, r: float) -> float:
    """Volume of the n-dimensional ball of radius r.

    Evaluated as exp(log-volume); returns inf when the result exceeds the
    floating-point range.
    """
    logv = log_sphere_volume(n, r)
    if logv == -math.inf:
        return 0.0
    try:
        return math.exp(logv)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class Ball:
    """Ball of given radius around a center point in R^n."""

    dimension: int
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.dimension < 1 or int(self.dimension) != self.dimension:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension}")
        center = np.asarray(self.center, dtype=np.float64).reshape(-1)
        if center.shape[0] != self.dimension:
            raise ValueError(
                f"center has {center.shape[0]} coordinates, expected {self.dimension}"
            )
        if self.radius < 0:
            raise ValueError(f"radius must be nonnegative, got {self.radius}")
        object.__setattr__(self, "center", center)

    def volume(self) -> float:
        return sphere_volume(self.dimension, self.radius)

    def contains(self, points) -> np.ndarray:
        """Boolean mask of which points (rows) lie inside the closed ball."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if pts.shape[1] != self.dimension:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {self.dimension}")
        d2 = ((pts - self.center) ** 2).sum(axis=1)
        return d2 <= self.radius**2


@dataclass(frozen=True)
class PackingConfig:
    """Parameters of a greedy saturated packing run."""

    dimension: int
    r0: float
    r1: float
    seed: int = 0
    saturation_patience: int = 100_000
    max_codewords: int = 1_000_000

    def __post_init__(self):
        if self.dimension < 1 or int(self.dimension) != self.dimension:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension}")
        if not self.r0 > 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if not self.r1 > 0:
            raise ValueError(f"degenerate geometry: r1 must be positive, got {self.r1}")
        if self.saturation_patience < 1:
            raise ValueError(f"saturation_patience must be >= 1, got {self.saturation_patience}")
        if self.max_codewords < 1:
            raise ValueError(f"max_codewords must be >= 1, got {self.max_codewords}")


@dataclass(frozen=True)
class Packing:
    """Accepted sphere centers plus the saturation verdict of the run."""

    config: PackingConfig
    centers: np.ndarray
    saturated: bool

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64)
        if centers.ndim != 2 or centers.shape[1] != self.config.dimension:
            raise ValueError("centers must be a (count, dimension) array")
        object.__setattr__(self, "centers", centers)

    @property
    def count(self) -> int:
        return self.centers.shape[0]

    def check_invariants(self):
        """Raise if any center leaves the r1-ball or any pair is closer than 2*r0."""
        cfg = self.config
        if self.count == 0:
            raise AssertionError("packing is empty")
        norms = np.linalg.norm(self.centers, axis=1)
        if norms.max() > cfg.r1 * (1.0 + _FP_GUARD):
            raise AssertionError(f"center norm {norms.max()} exceeds r1={cfg.r1}")
        if self.count >= 2:
            dmin = min_pairwise_distance(self.centers)
            if dmin < 2.0 * cfg.r0 * (1.0 - _FP_GUARD):
                raise AssertionError(f"pairwise distance {dmin} below 2*r0={2 * cfg.r0}")


def sample_in_ball(n: int, radius: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """size points uniform in the n-ball of given radius (direction x U^(1/n) law)."""
    x = rng.standard_normal((size, n))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    u = rng.random((size, 1))
    return radius * u ** (1.0 / n) * (x / norms)


def _min_dist_sq(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Per-point squared distance to the nearest center, blockwise over centers."""
    pn = np.einsum("ij,ij->i", points, points)
    best = np.full(points.shape[0], np.inf)
    for start in range(0, centers.shape[0], _CENTER_BLOCK):
        blk = centers[start : start + _CENTER_BLOCK]
        cn = np.einsum("ij,ij->i", blk, blk)
        d2 = pn[:, None] + cn[None, :] - 2.0 * (points @ blk.T)
        np.minimum(best, d2.min(axis=1), out=best)
    return np.maximum(best, 0.0)


def generate_saturated_packing(config: PackingConfig) -> Packing:
    """Greedy packing by rejection sampling, deterministic in config.seed.

    Candidates are drawn uniformly in the r1-ball; a candidate is accepted iff
    it keeps distance >= 2*r0 to every accepted center.  The run stops with
    saturated=True after ``saturation_patience`` consecutive rejections, or
    with saturated=False once ``max_codewords`` centers are accepted.
    """
    n = config.dimension
    rng = substream(config.seed, "packing")
    centers = np.empty((min(config.max_codewords, 4096), n))
    count = 0
    rejects = 0
    saturated = False
    min_gap_sq = (2.0 * config.r0) ** 2
    done = False
    while not done:
        batch = sample_in_ball(n, config.r1, rng, _BATCH)
        if count:
            alive = _min_dist_sq(batch, centers[:count]) >= min_gap_sq
        else:
            alive = np.ones(_BATCH, dtype=bool)
        pos = 0
        while True:
            rest = alive[pos:]
            idx = pos + int(np.argmax(rest)) if rest.any() else None
            gap = (idx if idx is not None else _BATCH) - pos
            if rejects + gap >= config.saturation_patience:
                saturated = True
                done = True
                break
            if idx is None:
                rejects += gap
                break
            rejects = 0
            if count == centers.shape[0]:  # grow storage
                centers = np.vstack([centers, np.empty_like(centers)])
            centers[count] = batch[idx]
            count += 1
            if count >= config.max_codewords:
                done = True
                break
            tail = batch[idx + 1 :]
            if tail.size:
                diff = tail - batch[idx]
                alive[idx + 1 :] &= np.einsum("ij,ij->i", diff, diff) >= min_gap_sq
            pos = idx + 1
    packing = Packing(config=config, centers=centers[:count].copy(), saturated=saturated)
    packing.check_invariants()
    return packing


def min_pairwise_distance(points) -> float:
    """Minimum Euclidean distance over all distinct pairs (exact O(L^2) scan)."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a (count, dimension) array of equal-length vectors")
    if pts.shape[0] < 2:
        raise ValueError(f"need at least 2 points, got {pts.shape[0]}")
    norms = np.einsum("ij,ij->i", pts, pts)
    best = np.inf
    for start in range(0, pts.shape[0], 1024):
        blk = pts[start : start + 1024]
        d2 = norms[start : start + 1024, None] + norms[None, :] - 2.0 * (blk @ pts.T)
        rows = np.arange(start, start + blk.shape[0])
        d2[np.arange(blk.shape[0]), rows] = np.inf  # mask self-distances
        best = min(best, float(d2.min()))
    return math.sqrt(max(best, 0.0))


@dataclass(frozen=True)
class DensityEstimate:
    """Monte-Carlo covered-volume fraction with its binomial standard error."""

    density: float
    stderr: float
    samples: int


def estimate_packing_density(packing: Packing, samples: int, seed: int = 0) -> DensityEstimate:
    """Fraction of the r1-ball covered by the packing's r0-spheres.

    Uniform samples in the r1-ball are tested against all centers; per-chunk
    substreams derive from (seed, "density", chunk) so the estimate is
    reproducible under any parallel split.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if packing.count == 0:
        raise ValueError("packing is empty")
    cfg = packing.config
    r0_sq = cfg.r0**2
    chunk = 16384
    covered = 0
    done = 0
    index = 0
    while done < samples:
        size = min(chunk, samples - done)
        rng = substream(seed, "density", index)
        pts = sample_in_ball(cfg.dimension, cfg.r1, rng, size)
        covered += int((_min_dist_sq(pts, packing.centers) <= r0_sq).sum())
        done += size
        index += 1
    p = covered / samples
    return DensityEstimate(density=p, stderr=math.sqrt(p * (1.0 - p) / samples), samples=samples)


# ---------------------------------------------------------------------------
# Serialization: self-describing text, 17 significant digits (round-trip exact)
# ---------------------------------------------------------------------------

PACKING_FORMAT = "difading-packing-v1"


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def packing_to_text(packing: Packing) -> str:
    cfg = packing.config
    lines = [
        f"format = {PACKING_FORMAT}",
        f"dimension = {cfg.dimension}",
        f"r0 = {_format_float(cfg.r0)}",
        f"r1 = {_format_float(cfg.r1)}",
        f"seed = {cfg.seed}",
        f"saturation_patience = {cfg.saturation_patience}",
        f"max_codewords = {cfg.max_codewords}",
        f"saturated = {'true' if packing.saturated else 'false'}",
        f"count = {packing.count}",
        "centers:",
    ]
    for row in packing.centers:
        lines.append(" ".join(_format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_header_lines(lines):
    """Split 'key = value' lines (until a 'centers:' sentinel) into a dict."""
    header = {}
    body_start = None
    for pos, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "centers:":
            body_start = pos + 1
            break
        if "=" not in stripped:
            raise ValueError(f"malformed header line: {line!r}")
        key, _, value = stripped.partition("=")
        header[key.strip()] = value.strip()
    if body_start is None:
        raise ValueError("missing 'centers:' section")
    return header, body_start


def packing_from_text(text: str) -> Packing:
    lines = text.splitlines()
    header, body_start = parse_header_lines(lines)
    if header.get("format") != PACKING_FORMAT:
        raise ValueError(f"unsupported format {header.get('format')!r}")
    cfg = PackingConfig(
        dimension=int(header["dimension"]),
        r0=float(header["r0"]),
        r1=float(header["r1"]),
        seed=int(header["seed"]),
        saturation_patience=int(header["saturation_patience"]),
        max_codewords=int(header["max_codewords"]),
    )
    count = int(header["count"])
    rows = [line.split() for line in lines[body_start:] if line.strip()]
    if len(rows) != count:
        raise ValueError(f"expected {count} center rows, found {len(rows)}")
    centers = np.array([[float(v) for v in row] for row in rows], dtype=np.float64)
    centers = centers.reshape(count, cfg.dimension)
    return Packing(config=cfg, centers=centers, saturated=header["saturated"] == "true")


def save_packing(packing: Packing, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(packing_to_text(packing))


def load_packing(path) -> Packing:
    with open(path, "r", encoding="utf-8") as fh:
        return packing_from_text(fh.read())
