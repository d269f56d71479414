import math

import numpy as np
import pytest
from scipy import stats

from slidestats import (
    BadSpec,
    SourceSpec,
    cantor_points,
    cos_walk,
    derive_seed,
    nn_distances_1d,
    primes,
    rho1,
    rho2,
    sample,
    sample_stable,
    sierpinski_points,
)

KS_BOUND = 0.01
KS_SIZE = 100_000


def test_spec_validation():
    with pytest.raises(BadSpec):
        SourceSpec("pareto", 100, seed=1)
    with pytest.raises(BadSpec):
        SourceSpec("normal", 1, seed=1)
    with pytest.raises(BadSpec):
        SourceSpec("uniform-cube", 10, seed=1, m=0)
    with pytest.raises(BadSpec):
        SourceSpec("stable", 10, seed=1, alpha=2.5)
    with pytest.raises(BadSpec):
        SourceSpec("stable", 10, seed=1, alpha=1.5, beta=2.0)


def test_sample_requires_seed_for_random_kinds():
    with pytest.raises(BadSpec):
        sample(SourceSpec("normal", 100))
    with pytest.raises(BadSpec):
        sample(SourceSpec("stable", 100, seed=3))  # alpha/beta missing


def test_seed_determinism():
    for kind in ("uniform-cube", "normal", "exponential", "sqrt-power",
                 "laplace", "cauchy", "cantor", "sierpinski"):
        a = sample(SourceSpec(kind, 500, seed=11))
        b = sample(SourceSpec(kind, 500, seed=11))
        c = sample(SourceSpec(kind, 500, seed=12))
        assert np.array_equal(a.points, b.points)
        assert not np.array_equal(a.points, c.points)


def test_shapes():
    assert sample(SourceSpec("uniform-cube", 64, seed=1, m=3)).points.shape == (64, 3)
    assert sample(SourceSpec("bivariate-normal", 64, seed=1)).points.shape == (64, 2)
    assert sample(SourceSpec("normal", 64, seed=1)).points.shape == (64, 1)


@pytest.mark.parametrize("kind,cdf", [
    ("uniform-cube", stats.uniform.cdf),
    ("normal", stats.norm.cdf),
    ("exponential", stats.expon.cdf),
    ("sqrt-power", lambda x: np.sqrt(np.clip(x, 0.0, 1.0))),
    ("laplace", stats.laplace.cdf),
    ("cauchy", stats.cauchy.cdf),
])
def test_distributional_sanity(kind, cdf):
    x = sample(SourceSpec(kind, KS_SIZE, seed=123)).points[:, 0]
    assert stats.kstest(x, cdf).statistic < KS_BOUND


def test_uniform_rho1_near_one():
    x = sample(SourceSpec("uniform-cube", 10_000, seed=5)).points[:, 0]
    assert 0.95 <= rho1(nn_distances_1d(x)) <= 1.05


def test_sqrt_power_rho1():
    vals = [rho1(nn_distances_1d(
        sample(SourceSpec("sqrt-power", 10_000, seed=derive_seed(5, i))).points[:, 0]))
        for i in range(5)]
    assert np.mean(vals) == pytest.approx(1.2817, abs=0.03)


# ------------------------------------------------------------------- stable

def test_stable_alpha2_is_normal_sqrt2():
    x = sample_stable(2.0, 0.0, KS_SIZE, 5).points[:, 0]
    res = stats.kstest(x, "norm", args=(0.0, math.sqrt(2.0)))
    assert res.pvalue > 0.01


def test_stable_cauchy_reduction():
    x = sample_stable(1.0, 0.0, KS_SIZE, 5).points[:, 0]
    assert stats.kstest(x, "cauchy").statistic < KS_BOUND


def test_stable_skewed_runs():
    x = sample_stable(1.0, 0.7, 5000, 9).points[:, 0]
    assert np.all(np.isfinite(x))
    y = sample_stable(0.8, -0.4, 5000, 9).points[:, 0]
    assert np.all(np.isfinite(y))


def test_stable_spec_dispatch():
    a = sample(SourceSpec("stable", 200, seed=1, alpha=1.5, beta=0.5))
    b = sample_stable(1.5, 0.5, 200, 1)
    assert np.array_equal(a.points, b.points)


def test_stable_param_validation():
    with pytest.raises(BadSpec):
        sample_stable(0.0, 0.0, 100, 1)
    with pytest.raises(BadSpec):
        sample_stable(1.5, 1.5, 100, 1)


def test_cauchy_rho2_positive():
    x = sample(SourceSpec("cauchy", 10_000, seed=21)).points[:, 0]
    assert rho2(nn_distances_1d(x)) > 0.0


# ------------------------------------------------------------------ fractals

def test_cantor_bounds_and_digits():
    pts = cantor_points(2000, 7).points[:, 0]
    assert pts.min() >= 0.0
    assert pts.max() <= 1.0 - 3.0 ** -40
    # base-3 expansion uses digits 0 and 2 only (first 12 digits checked)
    x = pts.copy()
    for _ in range(12):
        digit = np.floor(x * 3.0 + 1e-9)
        assert set(np.unique(digit)) <= {0.0, 2.0}
        x = x * 3.0 - digit


def test_cantor_distinct():
    pts = cantor_points(5000, 3).points[:, 0]
    assert np.unique(pts).size == pts.size


def test_sierpinski_inside_triangle():
    pts = sierpinski_points(3000, 11).points
    x, y = pts[:, 0], pts[:, 1]
    assert np.all(y >= -1e-12)
    assert np.all(y <= math.sqrt(3.0) * np.minimum(x, 1.0 - x) + 1e-12)


def test_sierpinski_burn_in_shifts_stream():
    a = sierpinski_points(100, 5, burn_in=100).points
    b = sierpinski_points(100, 5, burn_in=101).points
    assert not np.array_equal(a, b)


# -------------------------------------------------------------- deterministic

def test_cos_walk_first_values():
    pts = cos_walk(4).points[:, 0]
    assert pts[0] == 0.0
    assert pts[1] == 1.0
    assert pts[2] == pytest.approx(1.0 + math.cos(1.0), abs=1e-15)
    assert pts[3] == pytest.approx(1.0 + math.cos(1.0) + math.cos(2.0), abs=1e-15)


def test_cos_walk_bitwise_deterministic():
    assert np.array_equal(cos_walk(5000).points, cos_walk(5000).points)


def test_primes_first_values():
    assert np.array_equal(primes(3).points[:, 0], [2.0, 3.0, 5.0])


def test_primes_against_trial_division():
    def trial(k):
        out, cand = [], 2
        while len(out) < k:
            if all(cand % q for q in out if q * q <= cand):
                out.append(cand)
            cand += 1
        return out

    assert np.array_equal(primes(200).points[:, 0], trial(200))


def test_primes_crosses_segment_boundary():
    pts = primes(90_000).points[:, 0]
    assert pts.size == 90_000
    assert pts[-1] > 1 << 20  # forces at least two sieve segments


def test_deterministic_kinds_ignore_seed():
    a = sample(SourceSpec("cos-walk", 100))
    b = sample(SourceSpec("cos-walk", 100, seed=9))
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(sample(SourceSpec("primes", 50)).points,
                          primes(50).points)


def test_size_validation_direct_calls():
    for fn in (cos_walk, primes):
        with pytest.raises(BadSpec):
            fn(1)
    with pytest.raises(BadSpec):
        cantor_points(1, 0)
    with pytest.raises(BadSpec):
        sierpinski_points(1, 0)
