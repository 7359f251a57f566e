#!/usr/bin/env python3
"""Identification codebooks from packings and the threshold distance decoder.

The codebook at block length n packs spheres of radius sqrt(eps_n),
eps_n = A / n^((1-b)/2), with centers inside the ball of radius
sqrt(A) - sqrt(eps_n); codewords are the centers, so codeword norms never
exceed sqrt(A) and pairwise distances never fall below 2 sqrt(eps_n).

The decoder answers "was message j sent?" by testing whether the output lies
within sqrt(sigma_z2 + delta_n) of the gain-scaled codeword, where
delta_n = gamma^2 eps_n / 3.  Decoding regions of different messages may
overlap; that is allowed for identification, and only encoder overlap is
fatal.
"""

import math

import numpy as np

from difading import (
    DecoderRule,
    build_codebook,
    delta_n,
    encode,
    identify,
    min_pairwise_distance,
    save_codebook,
)

n, power, b = 100, 1.0, 0.0
codebook = build_codebook(n, power, b, seed=11, patience=20_000, max_codewords=200)
print(f"block length n={n}, power budget A={power}, slack b={b}:")
print(f"  eps_n = {codebook.epsilon_n:.4f}  -> r0 = {math.sqrt(codebook.epsilon_n):.4f}, "
      f"r1 = {math.sqrt(power) - math.sqrt(codebook.epsilon_n):.4f}")
print(f"  codewords: {codebook.size}  saturated: {codebook.saturated}")
print(f"  max codeword norm: {np.linalg.norm(codebook.codewords, axis=1).max():.4f} "
      f"(budget {math.sqrt(power):.4f})")
print(f"  min pairwise distance: {min_pairwise_distance(codebook.codewords):.4f} "
      f"(construction floor {2 * math.sqrt(codebook.epsilon_n):.4f})")

gamma = 0.5
sigma_z2 = 0.05
delta = delta_n(gamma, codebook.epsilon_n)
rule = DecoderRule(codebook, sigma_z2, delta, flavor="fast")
print(f"\ndecoder: accept when ||y - g o u_j|| <= {rule.threshold:.4f} "
      f"(sigma_z2={sigma_z2}, delta_n={delta:.4f})")

rng = np.random.default_rng(5)
gains = rng.uniform(0.5, 1.5, n)
noise = rng.standard_normal(n) * math.sqrt(sigma_z2 / n)
y = gains * encode(codebook, 3) + noise
print("  sent message 3; decoder CSI = realized gains")
print("  identify(3)?", identify(rule, y, 3, gains), "   identify(7)?", identify(rule, y, 7, gains))

print("\noverlapping decoding regions (legal for identification):")
# any pair closer than 2x the threshold is claimed by both messages at once
from difading import Codebook

close = np.zeros((2, n))
close[0, 0], close[1, 0] = 0.9 * rule.threshold, -0.9 * rule.threshold
close_book = Codebook(n, power, b, "achievability", codebook.epsilon_n, close)
close_rule = DecoderRule(close_book, sigma_z2, delta, flavor="fast")
midpoint = np.zeros(n)  # halfway between the two codewords, unit gain
both = identify(close_rule, midpoint, 1, np.ones(n)) and identify(
    close_rule, midpoint, 2, np.ones(n)
)
print(f"  codewords at distance {1.8 * rule.threshold:.4f} < 2*threshold = "
      f"{2 * rule.threshold:.4f}")
print(f"  midpoint accepted by both messages: {both}")

save_codebook(codebook, "/tmp/difading_demo_codebook.txt")
print("\ncodebook serialized to /tmp/difading_demo_codebook.txt (17 significant digits)")
