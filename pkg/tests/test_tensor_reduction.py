import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qshje import (
    DegenerateGammas,
    DegenerateTensor,
    GammaExpansion,
    TensorAction,
    action_1d,
    assemble_separable,
    count_monomials,
    eval_tensor_action,
    expand_gammas,
    fit_gammas,
    momentum_1d,
    tensor_from_gammas,
    tensor_gradient_component,
)
from conftest import CONSTANTS, make_action, random_gammas

HBAR = CONSTANTS.hbar


def _mod_pi_hbar(delta):
    d = delta / (math.pi * HBAR)
    return abs(d - round(d)) * math.pi * HBAR


def _triple(pair):
    return (pair, pair, pair)


def test_expand_gammas_zero_case():
    # all gammas zero: tan(Sx+Sy+Sz) with each S = arctan(X1/X2)
    a, b = expand_gammas([0.0] * 6)
    expect_a = np.zeros((2, 2, 2))
    expect_a[0, 1, 1] = expect_a[1, 0, 1] = expect_a[1, 1, 0] = 1.0
    expect_a[0, 0, 0] = -1.0
    expect_b = np.zeros((2, 2, 2))
    expect_b[1, 1, 1] = 1.0
    expect_b[0, 0, 1] = expect_b[0, 1, 0] = expect_b[1, 0, 0] = -1.0
    assert np.array_equal(a, expect_a)
    assert np.array_equal(b, expect_b)


def test_expand_gammas_validation():
    with pytest.raises(ValueError):
        expand_gammas([0.0] * 5)
    with pytest.raises(DegenerateGammas):
        expand_gammas([2.0, 0.5, 0.0, 0.0, 0.0, 0.0])


def test_degenerate_tensor_rejected(free_pair):
    with pytest.raises(DegenerateTensor):
        TensorAction(a=np.zeros((2, 2, 2)), b=np.zeros((2, 2, 2)),
                     pairs=_triple(free_pair))


def test_tensor_matches_separable_sum(free_pair, constant_pair):
    rng = np.random.default_rng(42)
    pairs = (free_pair, constant_pair, free_pair)
    for g in random_gammas(rng, 4):
        t = tensor_from_gammas(g, pairs, additive=0.3)
        acts = [
            make_action(pairs[i], g[2 * i], g[2 * i + 1], axis=ax,
                        orientation=-1)
            for i, ax in enumerate("xyz")
        ]
        s3 = assemble_separable(*acts, lambda0=0.3)
        for pt in rng.uniform(-2.5, 2.5, (20, 3)):
            err = _mod_pi_hbar(eval_tensor_action(t, pt) - s3.value(pt))
            assert err < 1e-9


def test_tensor_gradient_matches_momentum(free_pair):
    g = (0.3, -0.2, 1.5, 0.1, 0.0, 0.7)
    t = tensor_from_gammas(g, _triple(free_pair))
    pt = (0.4, -1.1, 2.0)
    for i, ax in enumerate("xyz"):
        a = make_action(free_pair, g[2 * i], g[2 * i + 1], axis=ax,
                        orientation=-1)
        assert tensor_gradient_component(t, pt, i) == pytest.approx(
            momentum_1d(a, pt[i]), rel=1e-12
        )


def test_eval_unwraps_many_branches(free_pair):
    # a long path through many oscillations stays consistent with the
    # anchored 1D antiderivative
    g = (0.0,) * 6
    t = tensor_from_gammas(g, _triple(free_pair))
    acts = [make_action(free_pair, 0.0, 0.0, axis=ax, orientation=-1)
            for ax in "xyz"]
    s3 = assemble_separable(*acts)
    pt = (7.5, -7.5, 6.2)
    assert eval_tensor_action(t, pt) == pytest.approx(s3.value(pt), abs=1e-9)


def test_count_monomials():
    full = GammaExpansion(np.ones((2, 2)), np.ones((2, 2)))
    assert count_monomials(full) == (5, 5)
    sparse = GammaExpansion(np.zeros((2, 2)), np.ones((2, 2)))
    assert count_monomials(sparse) == (1, 5)
    rng = np.random.default_rng(0)
    t = TensorAction(a=rng.normal(size=8).reshape(2, 2, 2),
                     b=rng.normal(size=8).reshape(2, 2, 2),
                     pairs=None)
    assert count_monomials(t) == (8, 8)
    with pytest.raises(TypeError):
        count_monomials(object())


def test_fit_recovers_planted_gammas(free_pair):
    g = (0.3, -0.2, 1.5, 0.1, 0.0, 0.7)
    t = tensor_from_gammas(g, _triple(free_pair))
    fit = fit_gammas(t, seed=0)
    assert fit.separable
    assert np.max(np.abs(np.array(fit.gammas) - np.array(g))) < 1e-6
    assert fit.residual < fit.threshold


def test_fit_scale_invariance(free_pair):
    # the quotient is projective: scaling both tensors changes nothing
    g = (0.3, -0.2, 1.5, 0.1, 0.0, 0.7)
    a, b = expand_gammas(g)
    t = TensorAction(a=-3.7 * a, b=-3.7 * b, pairs=_triple(free_pair))
    fit = fit_gammas(t, seed=0)
    assert fit.separable
    assert np.max(np.abs(np.array(fit.gammas) - np.array(g))) < 1e-6


def test_fit_rejects_generic_tensor(free_pair):
    rng = np.random.default_rng(99)
    t = TensorAction(a=rng.uniform(-1, 1, (2, 2, 2)),
                     b=rng.uniform(-1, 1, (2, 2, 2)),
                     pairs=_triple(free_pair))
    fit = fit_gammas(t, restarts=8, seed=0)
    assert not fit.separable
    assert fit.gammas is None
    assert fit.residual > fit.threshold


def test_fit_deterministic(free_pair):
    rng = np.random.default_rng(7)
    t = TensorAction(a=rng.uniform(-1, 1, (2, 2, 2)),
                     b=rng.uniform(-1, 1, (2, 2, 2)),
                     pairs=_triple(free_pair))
    f1 = fit_gammas(t, restarts=6, seed=11)
    f2 = fit_gammas(t, restarts=6, seed=11)
    assert f1.residual == f2.residual
    assert f1.separable == f2.separable


@settings(max_examples=15, deadline=None)
@given(scale=st.floats(0.1, 10.0), flip=st.booleans())
def test_projective_invariance(free_pair, scale, flip):
    s = -scale if flip else scale
    g = (0.3, -0.2, 1.5, 0.1, 0.0, 0.7)
    a, b = expand_gammas(g)
    t1 = TensorAction(a=a, b=b, pairs=_triple(free_pair))
    t2 = TensorAction(a=s * a, b=s * b, pairs=_triple(free_pair))
    pt = (0.9, -0.4, 1.7)
    assert eval_tensor_action(t2, pt) == pytest.approx(
        eval_tensor_action(t1, pt), abs=1e-10
    )
