import math

import numpy as np
import pytest

from difading import (
    Ball,
    DensityEstimate,
    Packing,
    PackingConfig,
    estimate_packing_density,
    generate_saturated_packing,
    log_sphere_volume,
    min_pairwise_distance,
    packing_from_text,
    packing_to_text,
    sample_in_ball,
    sphere_volume,
)


def test_sphere_volume_known_values():
    assert sphere_volume(2, 1.0) == pytest.approx(math.pi, rel=1e-12)
    assert sphere_volume(1, 2.0) == pytest.approx(4.0, rel=1e-12)
    assert sphere_volume(3, 1.0) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)
    assert sphere_volume(5, 0.0) == 0.0


def test_sphere_volume_rejects_bad_inputs():
    with pytest.raises(ValueError):
        sphere_volume(0, 1.0)
    with pytest.raises(ValueError):
        sphere_volume(3, -0.5)


@pytest.mark.parametrize("n", range(1, 51))
def test_log_volume_matches_direct_formula(n):
    # direct-domain evaluation stays finite up to n = 50 for these radii
    for r in (0.5, 1.0, 2.5):
        direct = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * r**n
        assert sphere_volume(n, r) == pytest.approx(direct, rel=1e-12)
        assert math.exp(log_sphere_volume(n, r)) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 30])
def test_volume_doubles_radius_multiplies_by_2_to_n(n):
    for r in (0.3, 1.0, 4.0):
        assert sphere_volume(n, 2.0 * r) == pytest.approx(2.0**n * sphere_volume(n, r), rel=1e-12)


def test_ball_validation_and_contains():
    ball = Ball(2, [0.0, 0.0], 1.0)
    assert ball.volume() == pytest.approx(math.pi, rel=1e-12)
    inside = ball.contains([[0.5, 0.5], [1.5, 0.0]])
    assert inside.tolist() == [True, False]
    with pytest.raises(ValueError):
        Ball(2, [0.0], 1.0)
    with pytest.raises(ValueError):
        Ball(2, [0.0, 0.0], -1.0)


def test_sample_in_ball_is_inside_and_covers_shell():
    rng = np.random.default_rng(0)
    pts = sample_in_ball(3, 2.0, rng, 20000)
    norms = np.linalg.norm(pts, axis=1)
    assert norms.max() <= 2.0
    # radial cdf is (r/R)^n: median radius should be near 2 * 0.5^(1/3)
    assert np.median(norms) == pytest.approx(2.0 * 0.5 ** (1.0 / 3.0), rel=0.02)


def test_saturated_packing_2d_meets_doubling_bound():
    config = PackingConfig(2, 1.0, 10.0, seed=424242, saturation_patience=100_000)
    packing = generate_saturated_packing(config)
    assert packing.saturated
    assert packing.count >= 25  # 2^-n (r1/r0)^n = 25
    assert np.linalg.norm(packing.centers, axis=1).max() <= 10.0
    assert min_pairwise_distance(packing.centers) >= 2.0


def test_packing_single_center_cases():
    tight = generate_saturated_packing(PackingConfig(1, 1.0, 1.0, seed=3, saturation_patience=1000))
    assert tight.count >= 1
    oversized = generate_saturated_packing(PackingConfig(3, 2.0, 1.0, seed=5, saturation_patience=10))
    assert oversized.count >= 1  # the first candidate is always accepted
    assert oversized.saturated


@pytest.mark.parametrize("n,ratio", [(1, 5.0), (2, 5.0), (3, 4.0), (4, 3.0)])
def test_saturated_count_bound_small_dimensions(n, ratio):
    bound = 2.0**-n * ratio**n
    packing = generate_saturated_packing(
        PackingConfig(n, 1.0, ratio, seed=n * 100 + 7, saturation_patience=20_000)
    )
    assert packing.saturated
    if bound >= 1.0:
        assert packing.count >= bound


def test_packing_determinism_and_seed_sensitivity():
    config = PackingConfig(2, 1.0, 6.0, seed=11, saturation_patience=5000)
    first = generate_saturated_packing(config)
    second = generate_saturated_packing(config)
    assert np.array_equal(first.centers, second.centers)
    assert first.saturated == second.saturated
    other = generate_saturated_packing(
        PackingConfig(2, 1.0, 6.0, seed=12, saturation_patience=5000)
    )
    assert not np.array_equal(first.centers, other.centers)


def test_max_codewords_cap_disables_saturation_flag():
    packing = generate_saturated_packing(
        PackingConfig(2, 1.0, 20.0, seed=1, saturation_patience=100_000, max_codewords=10)
    )
    assert packing.count == 10
    assert not packing.saturated


def test_packing_config_validation():
    with pytest.raises(ValueError):
        PackingConfig(2, 0.0, 1.0)
    with pytest.raises(ValueError, match="degenerate"):
        PackingConfig(2, 1.0, -0.5)
    with pytest.raises(ValueError):
        PackingConfig(2, 1.0, 1.0, saturation_patience=0)


def test_min_pairwise_distance_examples():
    assert min_pairwise_distance([[0.0, 0.0], [3.0, 4.0]]) == pytest.approx(5.0, rel=1e-12)
    assert min_pairwise_distance([[0.0], [1.0], [10.0]]) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        min_pairwise_distance([[1.0, 2.0]])
    with pytest.raises(ValueError):
        min_pairwise_distance([[1.0, 2.0], [1.0]])


def test_density_single_sphere_covers_everything():
    packing = Packing(PackingConfig(2, 1.0, 1.0, seed=0), np.zeros((1, 2)), True)
    est = estimate_packing_density(packing, samples=5000, seed=2)
    assert isinstance(est, DensityEstimate)
    assert est.density >= 1.0 - 3.0 * max(est.stderr, 1e-12)


def test_density_one_dimensional_tiling():
    r1 = 2.0
    centers = np.array([[-r1], [0.0], [r1]])
    packing = Packing(PackingConfig(1, r1 / 2.0, r1, seed=0), centers, True)
    est = estimate_packing_density(packing, samples=20000, seed=7)
    # intervals of half-width r1/2 around -r1, 0, r1 tile [-r1, r1] exactly
    assert est.density >= 1.0 - 3.0 * max(est.stderr, 1e-12)


def test_density_of_saturated_packing_meets_quarter_bound():
    packing = generate_saturated_packing(
        PackingConfig(2, 1.0, 10.0, seed=99, saturation_patience=100_000)
    )
    est = estimate_packing_density(packing, samples=40000, seed=5)
    assert est.density >= 0.25 - 3.0 * est.stderr


def test_density_rejects_zero_samples():
    packing = Packing(PackingConfig(2, 1.0, 1.0, seed=0), np.zeros((1, 2)), True)
    with pytest.raises(ValueError):
        estimate_packing_density(packing, samples=0)


def test_density_split_is_deterministic_in_seed():
    packing = generate_saturated_packing(
        PackingConfig(2, 1.0, 8.0, seed=21, saturation_patience=3000)
    )
    a = estimate_packing_density(packing, samples=30000, seed=13)
    b = estimate_packing_density(packing, samples=30000, seed=13)
    assert a == b


def test_serialization_round_trip_is_bitwise_exact():
    packing = generate_saturated_packing(
        PackingConfig(3, 0.7, 5.0, seed=31, saturation_patience=2000)
    )
    text = packing_to_text(packing)
    loaded = packing_from_text(text)
    assert loaded.config == packing.config
    assert loaded.saturated == packing.saturated
    assert np.array_equal(loaded.centers, packing.centers)
    assert packing_to_text(loaded) == text


def test_serialization_rejects_malformed_documents():
    packing = Packing(PackingConfig(2, 1.0, 1.0, seed=0), np.zeros((1, 2)), True)
    text = packing_to_text(packing)
    with pytest.raises(ValueError):
        packing_from_text(text.replace("difading-packing-v1", "unknown-v9"))
    with pytest.raises(ValueError):
        packing_from_text(text.replace("count = 1", "count = 4"))
    with pytest.raises(ValueError):
        packing_from_text("just some text")
