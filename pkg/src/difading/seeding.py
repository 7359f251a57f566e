"""Labeled, replayable random substreams.

Every source of randomness in the package (packing candidates, fading gains,
channel noise, density samples, ...) draws from its own named substream so
that experiments are modular yet bit-reproducible: the codebook stream is
untouched by how many noise samples a simulation consumes, and parallel
workers can derive per-chunk streams from (seed, label, chunk) without
coordination.
"""

import hashlib

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def label_entropy(label: str) -> int:
    """Stable 64-bit integer derived from a stream label (not Python hash())."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, label: str, *indices: int) -> np.random.Generator:
    """Generator for the (seed, label, *indices) substream.

    The same arguments always yield the same stream; distinct labels or
    indices yield statistically independent streams.
    """
    entropy = [int(seed) & _MASK64, label_entropy(label)]
    entropy.extend(int(i) for i in indices)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(seed: int, label: str, *indices: int) -> int:
    """64-bit sub-seed for handing to components that take a plain seed."""
    parts = [str(int(seed) & _MASK64), label]
    parts.extend(str(int(i)) for i in indices)
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
