import math

import numpy as np
import pytest

from difading import (
    Codebook,
    DecoderRule,
    build_codebook,
    codebook_from_text,
    codebook_to_text,
    delta_n,
    encode,
    epsilon_schedule,
    identify,
    min_pairwise_distance,
)
from helpers import two_codeword_codebook


def test_epsilon_schedule_values():
    assert epsilon_schedule(16, 1.0, 0.0, "achievability") == pytest.approx(0.25, rel=1e-12)
    assert epsilon_schedule(4, 1.0, 0.0, "achievability") == pytest.approx(0.5, rel=1e-12)
    assert epsilon_schedule(16, 1.0, 0.1, "converse_spacing") == pytest.approx(
        16.0 ** (-2.2), rel=1e-12
    )


def test_epsilon_schedule_validation():
    with pytest.raises(ValueError):
        epsilon_schedule(1, 1.0, 0.0, "achievability")
    with pytest.raises(ValueError):
        epsilon_schedule(16, 0.0, 0.0, "achievability")
    with pytest.raises(ValueError):
        epsilon_schedule(16, 1.0, 1.0, "achievability")
    with pytest.raises(ValueError):
        epsilon_schedule(16, 1.0, 0.0, "nonsense")


def test_build_codebook_radii_and_invariants():
    cb = build_codebook(16, 1.0, 0.0, seed=5, patience=2000)
    assert cb.epsilon_n == pytest.approx(0.25, rel=1e-12)
    root_a = math.sqrt(cb.power_budget)
    assert math.sqrt(cb.epsilon_n) == pytest.approx(0.5, rel=1e-12)  # r0
    assert root_a - math.sqrt(cb.epsilon_n) == pytest.approx(0.5, rel=1e-12)  # r1
    assert np.linalg.norm(cb.codewords, axis=1).max() <= root_a * (1 + 1e-12)
    assert cb.size >= 1


def test_build_codebook_small_n_still_valid():
    cb = build_codebook(4, 1.0, 0.0, seed=9, patience=500)
    assert cb.epsilon_n == pytest.approx(0.5, rel=1e-12)
    assert cb.size >= 1  # r1 = 1 - sqrt(0.5) > 0, first candidate accepted


def test_achievability_min_distance_property():
    cb = build_codebook(48, 1.0, 0.0, seed=12, patience=3000, max_codewords=50)
    assert cb.size >= 2
    spacing = min_pairwise_distance(cb.codewords)
    assert spacing >= 2.0 * math.sqrt(cb.epsilon_n) * (1 - 1e-12)
    assert spacing >= math.sqrt(cb.epsilon_n)  # the weaker bound the analysis uses


def test_codebook_rejects_overweight_codewords():
    words = np.zeros((1, 4))
    words[0, 0] = 1.5
    with pytest.raises(ValueError, match="norm"):
        Codebook(4, 1.0, 0.0, "achievability", 0.5, words)


def test_encode_returns_stored_codeword_one_based():
    cb = build_codebook(32, 1.0, 0.0, seed=3, patience=2000)
    assert np.array_equal(encode(cb, 1), cb.codewords[0])
    with pytest.raises(IndexError):
        encode(cb, cb.size + 1)
    with pytest.raises(IndexError):
        encode(cb, 0)


def test_noiseless_round_trip_accepts():
    cb = two_codeword_codebook(8, 1.0, 0.0, distance=0.8)
    rule = DecoderRule(cb, noise_variance=0.5, delta=0.1, flavor="fast")
    gains = np.full(8, 1.3)
    y = gains * encode(cb, 1)
    assert identify(rule, y, 1, gains)


def test_delta_n_values_and_identity():
    assert delta_n(1.0, 0.25) == pytest.approx(1.0 / 12.0, rel=1e-12)
    assert delta_n(1.0, 3.0) == pytest.approx(1.0, rel=1e-12)
    for gamma in (0.3, 1.0, 2.5):
        for eps in (0.01, 0.25, 3.0, 7.5):
            d = delta_n(gamma, eps)
            assert 2.0 * d - gamma**2 * eps == pytest.approx(-d, rel=1e-14, abs=1e-18)
    with pytest.raises(ValueError):
        delta_n(0.0, 0.25)
    with pytest.raises(ValueError):
        delta_n(1.0, 0.0)


def test_identify_threshold_and_tie():
    cb = two_codeword_codebook(4, 4.0, 0.0, distance=1.0)
    rule = DecoderRule(cb, noise_variance=0.75, delta=0.25, flavor="fast")
    assert rule.threshold == pytest.approx(1.0, rel=1e-12)
    gains = np.ones(4)
    u = encode(cb, 1)
    bump = np.zeros(4)
    bump[1] = 1.0  # exactly at the threshold: ties accept
    assert identify(rule, gains * u + bump, 1, gains)
    over = math.sqrt(0.75 + 0.25 + 1.0)  # ||v||^2 = threshold^2 + 1
    assert not identify(rule, gains * u + over * bump, 1, gains)


def test_identify_wrong_codeword_rejection_condition():
    # two codewords at distance sqrt(eps), zero noise, unit gain: the wrong
    # message is rejected exactly when eps * (1 - gamma^2/3) > sigma_z2
    for eps, sigma_z2 in ((0.3, 0.1), (0.3, 0.25)):
        cb = two_codeword_codebook(16, 1.0, 0.0, distance=math.sqrt(eps))
        rule = DecoderRule(cb, sigma_z2, delta_n(1.0, eps), flavor="fast")
        gains = np.ones(16)
        y = gains * encode(cb, 1)
        rejected = not identify(rule, y, 2, gains)
        assert rejected == (eps * (1.0 - 1.0 / 3.0) > sigma_z2)


def test_decoding_sets_overlap_for_close_codewords():
    sigma_z2, delta = 0.5, 0.1
    cb = two_codeword_codebook(8, 1.0, 0.0, distance=1.0)  # 1.0 < 2 sqrt(0.6)
    rule = DecoderRule(cb, sigma_z2, delta, flavor="fast")
    gains = np.ones(8)
    midpoint = gains * 0.5 * (encode(cb, 1) + encode(cb, 2))
    assert identify(rule, midpoint, 1, gains)
    assert identify(rule, midpoint, 2, gains)


def test_identify_slow_flavor_broadcasts_and_validates():
    cb = two_codeword_codebook(6, 1.0, 0.0, distance=0.5)
    rule = DecoderRule(cb, 0.2, 0.05, flavor="slow")
    y = 1.5 * encode(cb, 1)
    assert identify(rule, y, 1, 1.5)
    with pytest.raises(ValueError):
        identify(rule, y, 1, np.ones(6))
    fast_rule = DecoderRule(cb, 0.2, 0.05, flavor="fast")
    with pytest.raises(ValueError):
        identify(fast_rule, y, 1, 1.5)


def test_identify_dimension_mismatch():
    cb = two_codeword_codebook(6, 1.0, 0.0, distance=0.5)
    rule = DecoderRule(cb, 0.2, 0.05, flavor="fast")
    with pytest.raises(ValueError):
        identify(rule, np.zeros(5), 1, np.ones(6))
    with pytest.raises(ValueError):
        identify(rule, np.zeros(6), 1, np.ones(5))


def test_identify_invariant_under_simultaneous_permutation():
    rng = np.random.default_rng(17)
    n = 12
    words = rng.standard_normal((3, n))
    words /= np.linalg.norm(words, axis=1, keepdims=True) * 2.0
    eps = epsilon_schedule(n, 1.0, 0.0, "achievability")
    cb = Codebook(n, 1.0, 0.0, "achievability", eps, words)
    rule = DecoderRule(cb, 0.3, 0.1, flavor="fast")
    for trial in range(20):
        perm = rng.permutation(n)
        y = rng.standard_normal(n)
        gains = rng.uniform(0.5, 1.5, n)
        permuted_cb = Codebook(n, 1.0, 0.0, "achievability", eps, words[:, perm])
        permuted_rule = DecoderRule(permuted_cb, 0.3, 0.1, flavor="fast")
        for j in (1, 2, 3):
            assert identify(rule, y, j, gains) == identify(
                permuted_rule, y[perm], j, gains[perm]
            )


def test_decoder_rule_validation():
    cb = two_codeword_codebook(4, 1.0, 0.0, distance=0.5)
    with pytest.raises(ValueError):
        DecoderRule(cb, 0.0, 0.1, "fast")
    with pytest.raises(ValueError):
        DecoderRule(cb, 1.0, 0.0, "fast")
    with pytest.raises(ValueError):
        DecoderRule(cb, 1.0, 0.1, "medium")


def test_codebook_serialization_round_trip():
    cb = build_codebook(24, 2.0, 0.3, seed=8, patience=1500, max_codewords=40)
    text = codebook_to_text(cb)
    loaded = codebook_from_text(text)
    assert loaded.dimension == cb.dimension
    assert loaded.power_budget == cb.power_budget
    assert loaded.slack == cb.slack
    assert loaded.schedule == cb.schedule
    assert loaded.epsilon_n == cb.epsilon_n
    assert loaded.seed == cb.seed
    assert loaded.saturated == cb.saturated
    assert np.array_equal(loaded.codewords, cb.codewords)
    assert codebook_to_text(loaded) == text


def test_codebook_determinism_in_seed():
    a = build_codebook(32, 1.0, 0.0, seed=4, patience=1000)
    b = build_codebook(32, 1.0, 0.0, seed=4, patience=1000)
    c = build_codebook(32, 1.0, 0.0, seed=5, patience=1000)
    assert np.array_equal(a.codewords, b.codewords)
    assert not np.array_equal(a.codewords, c.codewords)


def test_unnormalized_codewords_scale():
    cb = two_codeword_codebook(9, 1.0, 0.0, distance=0.5)
    assert np.allclose(cb.unnormalized_codewords(), cb.codewords * 3.0, rtol=1e-15)
    assert (np.linalg.norm(cb.unnormalized_codewords(), axis=1) ** 2).max() <= 9 * 1.0
