import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qshje import (
    EmptyDomain,
    EnergySplit,
    NonFiniteSolution,
    OutOfDomain,
    PhysicalConstants,
    Potential1D,
    solve_pair,
    wronskian,
)


def test_constants_validation():
    with pytest.raises(ValueError):
        PhysicalConstants(hbar=0.0)
    with pytest.raises(ValueError):
        PhysicalConstants(mass=-1.0)


def test_potential_kinds():
    assert Potential1D.zero()(3.7) == 0.0
    assert Potential1D.constant(2.5)(-1.0) == 2.5
    assert Potential1D.harmonic(2.0)(1.5) == pytest.approx(0.5 * 4.0 * 2.25)
    pw = Potential1D.piecewise_linear([(-1.0, 0.0), (0.0, 1.0), (2.0, 1.0)])
    assert pw(-0.5) == pytest.approx(0.5)
    assert pw(-10.0) == 0.0  # held constant beyond the breakpoints
    assert pw(5.0) == 1.0
    tab = Potential1D.tabulated(np.linspace(-2, 2, 41), np.linspace(-2, 2, 41) ** 2)
    assert tab(1.0) == pytest.approx(1.0, abs=1e-10)


def test_potential_validation():
    with pytest.raises(ValueError):
        Potential1D.piecewise_linear([(0.0, 1.0)])
    with pytest.raises(ValueError):
        Potential1D.piecewise_linear([(1.0, 0.0), (0.0, 1.0)])
    with pytest.raises(ValueError):
        Potential1D.tabulated([0.0, 1.0], [0.0, np.inf])


def test_energy_split():
    es = EnergySplit(0.1, 0.2, 0.3)
    assert es.total() == pytest.approx(0.6)
    assert es.component("y") == 0.2


def test_domain_validation():
    with pytest.raises(EmptyDomain):
        solve_pair(Potential1D.zero(), 0.5, (1.0, 1.0), 1.0)
    with pytest.raises(OutOfDomain):
        solve_pair(Potential1D.zero(), 0.5, (-1.0, 1.0), 2.0)


def test_catalog_trig_matches_closed_form(free_pair):
    # E = 0.5, m = hbar = 1 -> k = 1: X1 = cos x, X2 = sin x
    xs = np.linspace(-7, 7, 101)
    assert np.allclose(free_pair.x1(xs), np.cos(xs), atol=1e-14)
    assert np.allclose(free_pair.x2(xs), np.sin(xs), atol=1e-14)
    assert np.allclose(free_pair.dx2(xs), np.cos(xs), atol=1e-14)


def test_catalog_hyperbolic(barrier_pair):
    kp = math.sqrt(2.0 * (1.0 - 0.4))
    xs = np.linspace(-3, 3, 51)
    assert np.allclose(barrier_pair.x1(xs), np.cosh(kp * xs), rtol=1e-13)
    assert np.allclose(barrier_pair.x2(xs), np.sinh(kp * xs) / kp, rtol=1e-13)


def test_catalog_linear_at_zero_curvature():
    pair = solve_pair(Potential1D.constant(0.5), 0.5, (-2.0, 2.0), 0.5)
    xs = np.linspace(-2, 2, 21)
    assert np.allclose(pair.x1(xs), 1.0)
    assert np.allclose(pair.x2(xs), xs - 0.5)


def test_numerov_matches_trig_solution():
    # a tabulated zero potential exercises the Numerov path against the catalog
    grid = np.linspace(-5, 5, 201)
    pot = Potential1D.tabulated(grid, np.zeros_like(grid))
    pair = solve_pair(pot, 0.5, (-5.0, 5.0), 0.0, step=1e-3)
    xs = np.linspace(-4.9, 4.9, 97)
    assert np.max(np.abs(pair.x1(xs) - np.cos(xs))) < 1e-9
    assert np.max(np.abs(pair.x2(xs) - np.sin(xs))) < 1e-9
    assert np.max(np.abs(pair.dx1(xs) + np.sin(xs))) < 1e-8


def test_numerov_anchor_conditions(harmonic_pair):
    assert harmonic_pair.x1(0.0) == pytest.approx(1.0, abs=1e-14)
    assert harmonic_pair.dx1(0.0) == pytest.approx(0.0, abs=1e-14)
    assert harmonic_pair.x2(0.0) == pytest.approx(0.0, abs=1e-14)
    assert harmonic_pair.dx2(0.0) == pytest.approx(1.0, abs=1e-14)


def test_numerov_offcenter_anchor():
    pair = solve_pair(Potential1D.harmonic(1.0), 0.9, (-3.0, 3.0), -1.0)
    assert pair.x1(-1.0) == pytest.approx(1.0, abs=1e-14)
    w = wronskian(pair, np.linspace(-2.9, 2.9, 50))
    scale = 1.0 + np.abs(pair.x1(np.linspace(-2.9, 2.9, 50)))
    assert np.max(np.abs(w - 1.0) / scale) < 1e-7


def test_second_derivative_consistency(harmonic_pair):
    xs = np.linspace(-2, 2, 31)
    assert np.allclose(
        harmonic_pair.d2x1(xs),
        harmonic_pair.curvature(xs) * harmonic_pair.x1(xs),
    )


def test_overflow_raises():
    with pytest.raises(NonFiniteSolution):
        solve_pair(Potential1D.harmonic(5.0), 0.1, (-40.0, 40.0), 0.0,
                   step=5e-3)


@settings(max_examples=25, deadline=None)
@given(
    e=st.floats(-1.0, 2.0),
    v0=st.floats(-1.0, 1.0),
    x=st.floats(-5.0, 5.0),
)
def test_wronskian_constant_catalog(e, v0, x):
    pair = solve_pair(Potential1D.constant(v0), e, (-6.0, 6.0), 0.0)
    w = wronskian(pair, x)
    scale = 1.0 + abs(float(pair.x1(x))) ** 2
    assert abs(w - 1.0) / scale < 1e-9
