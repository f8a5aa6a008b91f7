import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glorentz.verify.hardy import (
    hardy1_check,
    hardy6_check,
    nested_sum,
    oracle_constant,
    premise_constant,
)

GEOM_A = [2.0**k for k in range(31)]
GEOM_B = [2.0 ** (-2 * k) for k in range(31)]


def _brute_1d(a, b, theta, variant):
    n = len(a)
    lhs = 0.0
    for i in range(n):
        inner = sum(b[k] for k in (range(i, n) if variant == "a" else range(i + 1)))
        lhs += a[i] * inner**theta
    rhs = sum(a[i] * b[i] ** theta for i in range(n))
    return lhs, rhs


def test_geometric_oracle_variant_a():
    rep = hardy1_check(GEOM_A, GEOM_B, 1.0, "a", 30)
    for row in rep.rows:
        n = row.scale
        # Σ_{i≤n} 2^i Σ_{k=i}^{n} 4^{-k} and Σ_{i≤n} 2^{-i}
        lhs = sum(2.0**i * (4.0**-i - 4.0 ** -(n + 1)) * 4 / 3 for i in range(n + 1))
        rhs = 2 - 2.0**-n
        assert row.lhs == pytest.approx(lhs, rel=1e-12)
        assert row.rhs == pytest.approx(rhs, rel=1e-12)
    assert rep.max_ratio <= 4 / 3
    assert rep.rows[-1].ratio == pytest.approx(4 / 3, rel=1e-9)


def test_zero_b_sentinel():
    rep = hardy1_check(GEOM_A, [0.0] * 31, 2.0, "a", 5)
    assert all(math.isnan(r) for r in rep.ratios())


def test_variant_b_brute_force():
    a = [2.0**-k for k in range(16)]
    b = [1.0 if k <= 5 else 0.0 for k in range(16)]
    rep = hardy1_check(a, b, 2.0, "b", 15)
    for row in rep.rows:
        lhs, rhs = _brute_1d(a[: row.scale + 1], b[: row.scale + 1], 2.0, "b")
        assert row.lhs == pytest.approx(lhs, rel=1e-12)
        assert row.rhs == pytest.approx(rhs, rel=1e-12)


def test_premise_constants():
    assert premise_constant(GEOM_A, "a") == pytest.approx(2.0, rel=1e-8)
    assert premise_constant([2.0**-k for k in range(31)], "b") == pytest.approx(2.0, rel=1e-8)
    with pytest.raises(ValueError):
        premise_constant(GEOM_A, "c")


def test_premise_flag():
    rep = hardy1_check([1.0] * 31, [1.0] * 31, 1.0, "a", 30)
    assert rep.ok
    a = [1.0] + [1e-7] * 30
    rep = hardy1_check(a, [1.0] * 31, 1.0, "a", 30)
    assert not rep.ok


def test_input_validation():
    with pytest.raises(ValueError):
        hardy1_check([1.0, -1.0], [1.0, 1.0], 1, "a", 1)
    with pytest.raises(ValueError):
        hardy1_check([1.0], [1.0], 1, "a", 3)


def test_hardy6_separable_geometric():
    a = [2.0**k for k in range(13)]
    b1 = np.array([4.0**-k for k in range(13)])
    rep = hardy6_check([a, a], np.outer(b1, b1), [1, 1], "a", 12)
    assert rep.max_ratio <= (4 / 3) ** 2
    n = 12
    lhs1 = sum(2.0**i * (4.0**-i - 4.0 ** -(n + 1)) * 4 / 3 for i in range(n + 1))
    rhs1 = 2 - 2.0**-n
    assert rep.rows[-1].ratio == pytest.approx((lhs1 / rhs1) ** 2, rel=1e-12)


def test_hardy6_separability_matches_1d():
    rng = np.random.default_rng(3)
    a1, a2 = rng.uniform(1, 2, 9) * 2.0 ** np.arange(9), rng.uniform(1, 2, 9) * 3.0 ** np.arange(9)
    u, v = rng.random(9), rng.random(9)
    thetas = [1.5, 2.0]
    rep = hardy6_check([a1, a2], np.outer(u, v), thetas, "a", 8)
    # θ_1 inner: nested sums of a separable array factor into powered 1-D sums
    for row in rep.rows:
        n = row.scale + 1
        r1 = hardy1_check(a1[:n], u[:n], thetas[0], "a", n - 1).rows[-1]
        r2 = hardy1_check(a2[:n], v[:n], thetas[1], "a", n - 1).rows[-1]
        assert row.lhs == pytest.approx(r1.lhs ** (1 / thetas[0]) * r2.lhs ** (1 / thetas[1]), rel=1e-12)
        assert row.rhs == pytest.approx(r1.rhs ** (1 / thetas[0]) * r2.rhs ** (1 / thetas[1]), rel=1e-12)


def test_hardy6_zero_and_validation():
    a = [2.0**k for k in range(5)]
    rep = hardy6_check([a, a], np.zeros((5, 5)), [1, 1], "a", 4)
    assert all(math.isnan(r) for r in rep.ratios())
    with pytest.raises(ValueError):
        hardy6_check([a, a], np.ones((5, 5)), [0.5, 1], "a", 4)
    with pytest.raises(ValueError):
        hardy6_check([a], np.ones((5, 5)), [1, 1], "a", 4)


def test_nested_sum_two_orders():
    # summing axis 1 first by tensordot vs explicit loops
    rng = np.random.default_rng(0)
    v = rng.random((6, 7))
    w1, w2 = rng.random(6) + 0.1, rng.random(7) + 0.1
    t1, t2 = 1.5, 2.5
    explicit = sum(w2[j] * sum(w1[i] * v[i, j] ** t1 for i in range(6)) ** (t2 / t1) for j in range(7))
    assert nested_sum(v, [w1, w2], [t1, t2]) == pytest.approx(explicit ** (1 / t2), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 2**31),
    st.floats(0.3, 4.0),
    st.sampled_from(["a", "b"]),
    st.floats(1.1, 4.0),
)
def test_random_premise_sequences_respect_oracle(seed, theta, variant, growth):
    rng = np.random.default_rng(seed)
    k = np.arange(31)
    jitter = rng.uniform(0.5, 1.0, 31)
    a = growth**k * jitter if variant == "a" else growth ** (-k) * jitter
    b = rng.random(31)
    rep = hardy1_check(a, b, theta, variant, 30)
    assert rep.max_ratio <= oracle_constant(rep.notes["premise_constant"], theta) * (1 + 1e-12)


def test_brute_force_agrees_random():
    rng = np.random.default_rng(11)
    for variant in "ab":
        a, b = rng.random(12) + 0.1, rng.random(12)
        rep = hardy1_check(a, b, 1.7, variant, 11)
        lhs, rhs = _brute_1d(a, b, 1.7, variant)
        assert rep.rows[-1].lhs == pytest.approx(lhs, rel=1e-12)
        assert rep.rows[-1].rhs == pytest.approx(rhs, rel=1e-12)
