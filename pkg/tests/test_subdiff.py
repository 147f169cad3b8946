"""Subdifferential sampling and support-inequality membership."""
import numpy as np
import pytest

from clarke_kkt.gendir import GenDirConfig
from clarke_kkt.problem import parse_problem
from clarke_kkt.subdiff import membership_test, sample_subdifferential

ABS = parse_problem("dim 1\nobjective abs(x1)")
AFFINE = parse_problem("dim 1\nobjective 3 * x1")
CONST = parse_problem("dim 1\nobjective 7")


def test_abs_samples_both_signs():
    sd = sample_subdifferential(ABS, [0.0], seed=42)
    points = sd.points.ravel()
    assert np.all(points >= -1.0 - 1e-3)
    assert np.all(points <= 1.0 + 1e-3)
    assert points.min() <= -0.9
    assert points.max() >= 0.9


def test_affine_samples_are_exact():
    sd = sample_subdifferential(AFFINE, [2.0], seed=0)
    np.testing.assert_allclose(sd.points, 3.0, atol=1e-9)


def test_constant_samples_are_zero():
    sd = sample_subdifferential(CONST, [1.0], seed=0)
    np.testing.assert_allclose(sd.points, 0.0, atol=1e-12)


def test_sampling_deterministic():
    a = sample_subdifferential(ABS, [0.0], seed=3)
    b = sample_subdifferential(ABS, [0.0], seed=3)
    np.testing.assert_array_equal(a.points, b.points)


def test_scaling_coherence():
    scaled = parse_problem("dim 1\nobjective 2 * abs(x1)")
    base = sample_subdifferential(ABS, [0.0], seed=5)
    doubled = sample_subdifferential(scaled, [0.0], seed=5)
    np.testing.assert_allclose(doubled.points, 2.0 * base.points, rtol=1e-12)


def test_default_count():
    sd = sample_subdifferential(ABS, [0.0])
    assert sd.points.shape == (32, 1)  # 30 + 2n


def test_membership_zero_in_abs():
    member, worst_gap = membership_test(ABS, [0.0], [0.0])
    assert member
    assert worst_gap <= 0.05


def test_membership_rejects_outside_point():
    member, worst_gap = membership_test(ABS, [0.0], [2.0])
    assert not member
    assert worst_gap == pytest.approx(1.0, abs=0.05)


def test_membership_affine():
    member, _ = membership_test(AFFINE, [0.7], [3.0])
    assert member
    member, worst_gap = membership_test(AFFINE, [0.7], [4.0])
    assert not member
    assert worst_gap >= 0.9


def test_membership_requires_enough_directions():
    with pytest.raises(ValueError):
        membership_test(ABS, [0.0], [0.0], directions=1)


def test_sampled_gradients_are_members():
    # cross-module consistency: each sampled gradient lies in the estimated
    # subgradient set up to the membership tolerance
    prob = parse_problem("dim 2\nobjective max(x1, x2)")
    u = [0.0, 0.0]
    sd = sample_subdifferential(prob, u, seed=42)
    cfg = GenDirConfig(seed=42)
    for g in sd.points:
        member, worst_gap = membership_test(prob, u, g, cfg)
        assert member, f"gradient {g} rejected with gap {worst_gap}"
