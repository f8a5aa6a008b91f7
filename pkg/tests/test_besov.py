import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glorentz import grid
from glorentz import phi as phimod
from glorentz.besov import (
    BesovParams,
    besov_seminorm,
    block_norms,
    class_norm,
    condition13_eval,
    mixed_norm,
    mu_weights,
    normalize_to_ball,
    summability_exponent,
)
from glorentz.errors import DomainError, PreconditionError
from glorentz.norms import LorentzParams, lorentz_norm_aniso

L2 = LorentzParams.power([0.5], [2])


def test_mixed_norm():
    a = np.array([[3.0, 0.0], [4.0, 0.0]])
    assert mixed_norm(a, [2, 2]) == pytest.approx(5.0)
    assert mixed_norm(a, [math.inf, 1]) == pytest.approx(4.0)
    assert mixed_norm(a, [1, math.inf]) == pytest.approx(7.0)
    with pytest.raises(DomainError):
        mixed_norm(a, [2])


@settings(max_examples=30)
@given(st.lists(st.floats(0, 10), min_size=6, max_size=6), st.floats(1, 5), st.floats(1, 5))
def test_mixed_norm_monotone_in_exponent(vals, p, q):
    a = np.array(vals).reshape(2, 3)
    lo, hi = sorted([p, q])
    assert mixed_norm(a, [hi, hi]) <= mixed_norm(a, [lo, lo]) * (1 + 1e-12) + 1e-12


def test_single_block_seminorm():
    params = BesovParams(L2, [0.5], [2])
    f = grid.block_function((64,), (3,))
    expected = 2**1.5 * lorentz_norm_aniso(f, L2)
    assert besov_seminorm(f, params) == pytest.approx(expected, rel=1e-12)
    assert class_norm(f, params) == pytest.approx(expected + lorentz_norm_aniso(f, L2), rel=1e-12)


def test_seminorm_l2_parseval():
    # r-weighted ℓ2 of block L2 norms equals Σ_k weights by Parseval
    f = grid.random_bandlimited((64,), 5, 5)
    params = BesovParams(L2, [1.0], [2])
    F = grid.analyze(f)
    k = np.abs(grid.frequencies(64))
    s = grid.axis_block_index(64)
    terms = np.where(s > 0, 4.0**s * np.abs(F.coefficients) ** 2, 0.0)
    assert besov_seminorm(f, params) == pytest.approx(math.sqrt(terms.sum()), rel=1e-10)
    assert k.size == 64


def test_seminorm_needs_zero_mean():
    params = BesovParams(L2, [0.5], [2])
    f = grid.random_bandlimited((32,), 1, 3, zero_mean=False)
    with pytest.raises(PreconditionError):
        besov_seminorm(f, params)


def test_params_validation():
    with pytest.raises(DomainError):
        BesovParams(L2, [0.5, 1], [2])
    with pytest.raises(DomainError):
        BesovParams(L2, [-1], [2])
    with pytest.raises(DomainError):
        BesovParams(L2, [1], [0.5])


def test_normalize_to_ball():
    params = BesovParams(L2, [0.5], [2])
    f = grid.random_bandlimited((64,), 2, 4)
    assert class_norm(normalize_to_ball(f, params), params) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        normalize_to_ball(grid.GridFunction(np.zeros(16)), params)


def test_block_norms_keys():
    f = grid.block_function((32,), (2,)) + grid.block_function((32,), (4,))
    assert set(block_norms(f, L2)) == {(2,), (4,)}


def test_mu_weights():
    w = mu_weights(phimod.power(0.55), phimod.power(0.7), 10)
    assert len(w) == 11
    assert w[3] == pytest.approx(2 ** (0.15 * 3))


def test_summability_exponent():
    assert summability_exponent(2, 2) == math.inf
    assert summability_exponent(2, 1) == math.inf
    assert summability_exponent(2, 4) == pytest.approx(4.0)
    assert summability_exponent(2, math.inf) == 2


def test_condition13():
    c = condition13_eval(phimod.power(0.55), phimod.power(0.7), 0.5, 2, 4)
    # x_s = 2^{-0.35 s}, ε = 4
    assert c.finite
    assert c.value == pytest.approx((1 / (1 - 2 ** (-1.4))) ** 0.25, rel=1e-9)
    bad = condition13_eval(phimod.power(0.3), phimod.power(0.7), 0.1, 2, 4)
    assert not bad.finite
    sup = condition13_eval(phimod.power(0.55), phimod.power(0.7), 0.5, 2, 2)
    assert sup.finite and sup.value == pytest.approx(1.0)
