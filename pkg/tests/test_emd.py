import functools

import numpy as np
import pytest

from entropicemd import TimeSeries, IntermittencyScenario, make_intermittent_signal
from entropicemd import SiftConfig, Decomposition, decompose, extract_imf
from entropicemd import find_extrema, spline_envelope, local_mean, sift_once, is_imf
from entropicemd import reconstruct, orthogonality_index, correlation
from entropicemd import ParameterError, StructuralError, ResidueCondition
from entropicemd.util.emd import sift_deviation, has_enough_extrema
from entropicemd.util.emd import IMF_BOUNDARY_EXTREMA


def sine(n=6000, frequency=1., sampling_period=1e-3):
    t = np.arange(n) * sampling_period
    return TimeSeries(np.sin(2 * np.pi * frequency * t), sampling_period)


@pytest.mark.parametrize("samples, maxima, minima", [
    ([0, 1, 0, -1, 0, 1, 0], [1, 5], [3]),
    ([0, 1, 1, 1, 0], [2], []),
    ([0, 1, 1, 0], [1], []),
    ([1, 1, 0, 1], [], [2]),
    ([0, 1, 2, 3], [], []),
    ([2, 2, 2, 2], [], []),
    ])
def test_find_extrema(samples, maxima, minima):
    found_max, found_min = find_extrema(TimeSeries(samples))
    np.testing.assert_array_equal(found_max, maxima)
    np.testing.assert_array_equal(found_min, minima)


def test_extrema_of_one_sine_period():
    t = np.arange(1000) / 1000
    maxima, minima = find_extrema(np.sin(2 * np.pi * t))
    assert maxima.size == 1 and abs(maxima[0] - 250) <= 1
    assert minima.size == 1 and abs(minima[0] - 750) <= 1


def test_find_extrema_needs_three_samples():
    with pytest.raises(StructuralError):
        find_extrema(TimeSeries([0., 1.]))


def test_local_mean():
    mean = local_mean(TimeSeries([1., 3.]), TimeSeries([-1., 1.]))
    np.testing.assert_array_equal(mean.samples, [0., 2.])
    with pytest.raises(StructuralError):
        local_mean(TimeSeries([1., 3.]), TimeSeries([1.]))


def test_sift_once_raises_residue_condition():
    with pytest.raises(ResidueCondition):
        sift_once(TimeSeries(np.linspace(0, 1, 50)))
    with pytest.raises(ResidueCondition):
        extract_imf(TimeSeries([0., 1., 0., 0.5, 0.2]))


def test_envelopes_enclose_the_signal():
    t = np.arange(6000) * 1e-3
    series = TimeSeries(0.5 * np.sin(2 * np.pi * 20 * t)
                        + np.sin(2 * np.pi * t), 1e-3)
    maxima, minima = find_extrema(series)
    upper = spline_envelope(series, maxima).samples
    lower = spline_envelope(series, minima).samples
    inner = slice(max(maxima[0], minima[0]), min(maxima[-1], minima[-1]) + 1)
    assert np.all(upper[inner] >= lower[inner] - 1e-9)


def test_envelope_mean_of_a_sinusoid_is_small():
    series = sine()
    maxima, minima = find_extrema(series)
    mean = local_mean(spline_envelope(series, maxima),
                      spline_envelope(series, minima)).samples
    inner = slice(min(maxima[0], minima[0]), max(maxima[-1], minima[-1]) + 1)
    assert np.abs(mean[inner]).max() <= 0.05


def test_sifting_a_sinusoid_changes_little():
    series = sine()
    change = (sift_once(series) - series).samples
    rms = np.sqrt(np.mean(change**2)) / np.sqrt(np.mean(series.samples**2))
    assert rms < 0.02


@pytest.mark.parametrize("offset", [0.5, -2.])
def test_sifting_removes_an_offset(offset):
    sifted = sift_once(sine() + offset).samples
    assert abs(sifted.mean()) < abs(offset)


def test_single_sift_cap_is_one_sift():
    t = np.arange(3000) * 1e-3
    series = TimeSeries(np.sin(2 * np.pi * 20 * t) + t, 1e-3)
    imf, iterations = extract_imf(series, SiftConfig(max_sift_iterations=1))
    assert iterations == 1
    np.testing.assert_array_equal(imf.samples, sift_once(series).samples)


def test_sift_deviation():
    assert sift_deviation(TimeSeries([0., 0.]), TimeSeries([1., 1.])) == 0.
    assert sift_deviation(TimeSeries([1., 1.]), TimeSeries([0., 1.])) == 0.5


@pytest.mark.parametrize("changes", [
    dict(sd_threshold=0.),
    dict(max_sift_iterations=0),
    dict(max_imfs=0),
    dict(boundary_policy='periodic'),
    ])
def test_sift_config_invariants(changes):
    with pytest.raises(ParameterError):
        SiftConfig(**changes)


def test_sift_config_to_dict():
    assert SiftConfig().to_dict() == dict(
            sd_threshold=0.2, max_sift_iterations=50, max_imfs=16,
            boundary_policy='mirror'
            )


def test_monotone_series_is_its_own_residue():
    ramp = TimeSeries(np.linspace(-1, 3, 40))
    decomposition = decompose(ramp)
    assert decomposition.n_imfs == 0
    np.testing.assert_array_equal(decomposition.residue.samples, ramp.samples)


def test_decompose_needs_four_samples():
    with pytest.raises(StructuralError):
        decompose(TimeSeries([0., 1., 0.]))


def test_sinusoid_is_its_first_imf():
    series = sine()
    decomposition = decompose(series)
    assert decomposition.n_imfs >= 1
    assert decomposition.sift_counts[0] >= 1
    assert correlation(decomposition.imfs[0].samples, series.samples) > 0.99
    ok, extrema, crossings = is_imf(decomposition.imfs[0],
                                    exclude_boundary_extrema=2)
    assert ok, (extrema, crossings)


def test_max_imfs_caps_the_decomposition(rng):
    noise = TimeSeries(rng.normal(size=500))
    decomposition = decompose(noise, SiftConfig(max_imfs=2))
    assert decomposition.n_imfs == 2
    np.testing.assert_allclose(reconstruct(decomposition).samples,
                               noise.samples, rtol=0, atol=1e-10)


@functools.lru_cache(maxsize=None)
def random_decomposition(seed):
    rng = np.random.default_rng(seed)
    onset = int(rng.integers(500, 3000))
    scenario = IntermittencyScenario(
            burst_frequency=float(rng.uniform(10, 40)),
            burst_amplitude=float(rng.uniform(0.1, 1.)),
            burst_onset=onset,
            burst_offset=onset + int(rng.integers(300, 2000)),
            noise_stddev=float(rng.uniform(0., 0.05))
            )
    signal, _ = make_intermittent_signal(scenario, seed=seed)
    return signal, decompose(signal)


@pytest.mark.parametrize("seed", range(50))
def test_reconstruction_identity(seed):
    signal, decomposition = random_decomposition(seed)
    assert decomposition.n_imfs == len(decomposition.sift_counts)
    error = np.abs(reconstruct(decomposition).samples - signal.samples)
    assert error.max() < 1e-10
    total = decomposition.to_array().sum(axis=0)
    assert np.abs(total - signal.samples).max() < 1e-10


@pytest.mark.parametrize("seed", range(50))
def test_every_component_is_an_imf(seed):
    _, decomposition = random_decomposition(seed)
    for k, imf in enumerate(decomposition.imfs):
        ok, extrema, crossings = is_imf(
                imf, exclude_boundary_extrema=IMF_BOUNDARY_EXTREMA)
        assert ok, (k, extrema, crossings)


def test_is_imf():
    assert is_imf(sine(2000))[0]
    # a sinusoid lifted off zero has extrema but no zero crossings
    ok, extrema, crossings = is_imf(sine(2000) + 2.)
    assert not ok and extrema == 4 and crossings == 0
    # zero samples do not count twice
    assert is_imf(TimeSeries([1., 0., -1., 0., 1.]))[2] == 2


def test_decomposition_validation():
    imf = TimeSeries(np.zeros(5))
    with pytest.raises(StructuralError):
        Decomposition((imf,), TimeSeries(np.zeros(6)), (1,))
    with pytest.raises(StructuralError):
        Decomposition((imf,), TimeSeries(np.zeros(5)), ())
    empty = Decomposition.empty(imf)
    assert empty.n_imfs == 0 and empty.to_array().shape == (1, 5)


def test_orthogonality_index():
    t = np.arange(1000) / 1000
    a = TimeSeries(np.sin(2 * np.pi * 5 * t))
    b = TimeSeries(np.cos(2 * np.pi * 5 * t))
    decomposition = Decomposition((a,), b, (1,))
    assert orthogonality_index(decomposition) == pytest.approx(0., abs=1e-10)
    same = Decomposition((a,), a, (1,))
    assert orthogonality_index(same) == pytest.approx(0.5)


def test_has_enough_extrema():
    assert has_enough_extrema(sine(3000))
    assert not has_enough_extrema(TimeSeries([0., 1.]))
    assert not has_enough_extrema(TimeSeries([0., 1., 0., 1.]))


def test_two_tones_separate():
    t = np.arange(6000) * 1e-3
    fast, slow = np.sin(2 * np.pi * 20 * t), np.sin(2 * np.pi * t)
    series = TimeSeries(fast + slow, 1e-3)
    decomposition = decompose(series)
    assert decomposition.n_imfs >= 2
    assert correlation(decomposition.imfs[0].samples, fast) > 0.95
    assert correlation(decomposition.imfs[1].samples, slow) > 0.95
    error = reconstruct(decomposition).samples - series.samples
    assert np.abs(error).max() < 1e-10
