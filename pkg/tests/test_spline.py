import numpy as np
import pytest

from entropicemd import NaturalCubicSpline, BoundaryPolicy, spline_envelope
from entropicemd import TimeSeries, InsufficientExtremaError, StructuralError
from entropicemd.lib.spline import AugmentKnots


def dense_natural_spline(knots_x, knots_y, x):
    """Reference natural spline from a dense solve of the full system."""
    n = knots_x.shape[0]
    h = np.diff(knots_x)
    slope = np.diff(knots_y) / h
    a = np.zeros((n, n))
    rhs = np.zeros(n)
    a[0, 0] = a[-1, -1] = 1.
    for i in range(1, n - 1):
        a[i, i-1] = h[i-1]
        a[i, i] = 2 * (h[i-1] + h[i])
        a[i, i+1] = h[i]
        rhs[i] = 6 * (slope[i] - slope[i-1])
    m = np.linalg.solve(a, rhs)

    k = np.clip(np.searchsorted(knots_x, x, side='right') - 1, 0, n - 2)
    x0, x1, hk = knots_x[k], knots_x[k+1], h[k]
    left, right = x1 - x, x - x0
    return (m[k] * left**3 + m[k+1] * right**3) / (6 * hk) \
            + (knots_y[k] / hk - m[k] * hk / 6) * left \
            + (knots_y[k+1] / hk - m[k+1] * hk / 6) * right


@pytest.mark.parametrize("seed", range(100))
def test_matches_dense_solve(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(2, 13)
    knots_x = np.cumsum(rng.uniform(0.5, 2., size=n))
    knots_y = rng.normal(size=n)
    x = np.linspace(knots_x[0], knots_x[-1], 97)
    spline = NaturalCubicSpline(knots_x, knots_y)
    np.testing.assert_allclose(spline(x), dense_natural_spline(knots_x, knots_y, x),
                               rtol=0, atol=1e-9)


def test_passes_through_knots(rng):
    knots_x = np.cumsum(rng.uniform(0.5, 2., size=8))
    knots_y = rng.normal(size=8)
    spline = NaturalCubicSpline(knots_x, knots_y)
    np.testing.assert_array_equal(spline(knots_x), knots_y)


def test_two_knots_give_a_line():
    spline = NaturalCubicSpline([0., 2.], [1., 3.])
    np.testing.assert_allclose(spline([-1., 0.5, 1., 3.]), [0., 1.5, 2., 4.])


def test_natural_end_condition():
    spline = NaturalCubicSpline([0., 1., 2., 3.], [0., 1., 0., 1.])
    m = spline.second_derivatives(np.array([0., 1., 2., 3.]),
                                  np.array([0., 1., 0., 1.]))
    assert m[0] == 0 and m[-1] == 0
    assert m[1] < 0 < m[2]


def test_invalid_knots():
    with pytest.raises(InsufficientExtremaError):
        NaturalCubicSpline([1.], [1.])
    with pytest.raises(StructuralError):
        NaturalCubicSpline([0., 1., 1.], [0., 1., 2.])
    with pytest.raises(StructuralError):
        NaturalCubicSpline([0., 1.], [0., 1., 2.])


def test_mirror_reflects_about_the_end_samples():
    samples = np.arange(10.)
    knots_x, knots_y = AugmentKnots(samples, [2, 5, 8])(BoundaryPolicy.MIRROR)
    np.testing.assert_array_equal(knots_x, [-5, -2, 2, 5, 8, 10, 13])
    np.testing.assert_array_equal(knots_y, [5, 2, 2, 5, 8, 8, 5])


def test_mirror_drops_reflections_inside_the_series():
    samples = np.arange(10.)
    knots_x, _ = AugmentKnots(samples, [0, 4, 9])(BoundaryPolicy.MIRROR)
    np.testing.assert_array_equal(knots_x, [-4, 0, 4, 9, 14])


def test_clamp_pins_the_end_samples():
    samples = np.arange(10.) ** 2
    knots_x, knots_y = AugmentKnots(samples, [2, 5, 8])(BoundaryPolicy.CLAMP)
    np.testing.assert_array_equal(knots_x, [0, 2, 5, 8, 9])
    np.testing.assert_array_equal(knots_y, [0, 4, 25, 64, 81])


def test_envelope_without_extension_matches_dense_solve(rng):
    samples = rng.normal(size=60)
    knots = np.array([3, 11, 20, 26, 37, 45, 58])
    envelope = spline_envelope(TimeSeries(samples), knots, BoundaryPolicy.NONE)
    x = np.arange(knots[0], knots[-1] + 1, dtype=float)
    expected = dense_natural_spline(knots.astype(float), samples[knots], x)
    np.testing.assert_allclose(envelope.samples[knots[0]:knots[-1]+1], expected,
                               rtol=0, atol=1e-9)


def test_envelope_needs_two_knots():
    with pytest.raises(InsufficientExtremaError):
        spline_envelope(TimeSeries(np.zeros(10)), [4], BoundaryPolicy.NONE)


def test_parabola_knots_match_dense_solve():
    knots = np.arange(4.)
    x = np.linspace(0, 3, 31)
    spline = NaturalCubicSpline(knots, knots**2)
    np.testing.assert_allclose(spline(x), dense_natural_spline(knots, knots**2, x),
                               rtol=0, atol=1e-9)


def test_knots_on_every_sample_reproduce_the_series(rng):
    samples = rng.normal(size=25)
    envelope = spline_envelope(TimeSeries(samples), np.arange(25),
                               BoundaryPolicy.NONE)
    np.testing.assert_array_equal(envelope.samples, samples)
