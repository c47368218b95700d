# Copyright (c) 2024 The entropicemd developers

"""This is a module containing the core data types of the package.

The central type is `TimeSeries`, a uniformly sampled real signal with its
sampling period; every operation of the package takes and returns instances
of it. The module also defines `IntermittencyScenario` and the synthetic
generators that stand in for measured intermittent signals: a carrier tone
with a finer-scale burst switched on over a window, with the burst itself
returned as ground truth.

Numerical kernels of the package run on `torch` in double precision on the
CPU; `np`, `torch`, `torch_device` and `float_dtype` are exported from here
so that other modules share one backend setup.
"""


import dataclasses
import logging

import numpy as np
import torch

from ._generic import ParameterError, StructuralError


logger = logging.getLogger(__name__)


# =============================================================================
torch_device = 'cpu'  # bit-reproducible results are only promised on CPU
float_dtype = torch.float64
logger.debug("torch device: %s, dtype: %s", torch_device, float_dtype)


def as_tensor(x):
    """Return `x` as a float64 tensor on `torch_device`."""
    if isinstance(x, TimeSeries):
        x = x.samples
    # TimeSeries samples are read-only
    return torch.as_tensor(np.array(x, dtype=float), device=torch_device)


def grab(var):
    # `var.detach()` returns a new Tensor, detached from the current graph and
    # never require gradient. `var.cpu()` copies `var` from GPU to CPU.
    return var.detach().cpu().numpy()


# =============================================================================
@dataclasses.dataclass(frozen=True, eq=False)
class TimeSeries:
    """A uniformly sampled real-valued signal.

    Parameters
    ----------
    samples : array_like
        Sample values; stored as a read-only float64 array.
    sampling_period : float
        The sampling period in seconds; must be positive.

    The time axis is implicit: sample `k` sits at `k * sampling_period`.
    """

    samples: np.ndarray
    sampling_period: float = 1.

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float, copy=True).ravel()
        if samples.size < 1:
            raise StructuralError("a time series needs at least one sample")
        bad = np.flatnonzero(~np.isfinite(samples))
        if bad.size > 0:
            raise ParameterError(
                    f"samples must be finite; sample {bad[0]} is {samples[bad[0]]}"
                    )
        sampling_period = float(self.sampling_period)
        if not (np.isfinite(sampling_period) and sampling_period > 0):
            raise ParameterError(
                    f"sampling_period must be > 0, got {self.sampling_period}"
                    )
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sampling_period', sampling_period)

    def __len__(self):
        return self.samples.shape[0]

    def __getitem__(self, key):
        if isinstance(key, slice):
            return self.like(self.samples[key])
        return self.samples[key]

    def __add__(self, other):
        return self.like(self.samples + self._values_of(other))

    def __sub__(self, other):
        return self.like(self.samples - self._values_of(other))

    def _values_of(self, other):
        if isinstance(other, TimeSeries):
            if len(other) != len(self):
                raise StructuralError(
                        f"length mismatch: {len(self)} vs {len(other)}"
                        )
            return other.samples
        return other

    @property
    def time(self):
        """The implicit time axis in seconds."""
        return np.arange(len(self)) * self.sampling_period

    def like(self, samples):
        """Return a new series with the same sampling period."""
        return TimeSeries(samples, self.sampling_period)

    def to_dict(self):
        return dict(sampling_period=self.sampling_period,
                    samples=self.samples.tolist())

    @staticmethod
    def zeros(length, sampling_period=1.):
        return TimeSeries(np.zeros(length), sampling_period)


# =============================================================================
@dataclasses.dataclass(frozen=True)
class IntermittencyScenario:
    """Parameters of a carrier tone interrupted by a finer-scale burst.

    The burst is `burst_amplitude * sin(2 pi burst_frequency t)` switched on
    over the samples `[burst_onset, burst_offset)`; `extra_bursts` adds more
    `(onset, offset)` windows of the same tone. With `burst_taper > 0` the
    switch is a raised-cosine ramp of that many samples inside each window
    instead of a hard edge.
    """

    carrier_frequency: float = 1.
    carrier_amplitude: float = 1.
    burst_frequency: float = 20.
    burst_amplitude: float = 0.5
    burst_onset: int = 2000
    burst_offset: int = 3000
    noise_stddev: float = 0.
    length: int = 6000
    sampling_period: float = 1e-3
    extra_bursts: tuple = ()
    burst_taper: int = 0

    def __post_init__(self):
        object.__setattr__(
                self, 'extra_bursts',
                tuple(tuple(int(i) for i in pair) for pair in self.extra_bursts)
                )
        if self.length < 1:
            raise ParameterError(f"length must be >= 1, got {self.length}")
        if not self.sampling_period > 0:
            raise ParameterError(
                    f"sampling_period must be > 0, got {self.sampling_period}"
                    )
        if not self.noise_stddev >= 0:
            raise ParameterError(
                    f"noise_stddev must be >= 0, got {self.noise_stddev}"
                    )
        if not self.burst_frequency > self.carrier_frequency:
            raise ParameterError(
                    "burst_frequency must exceed carrier_frequency, got "
                    f"{self.burst_frequency} <= {self.carrier_frequency}"
                    )
        if self.burst_taper < 0:
            raise ParameterError(
                    f"burst_taper must be >= 0, got {self.burst_taper}"
                    )
        windows = sorted(self.burst_windows)
        for onset, offset in windows:
            if not 0 <= onset < offset <= self.length:
                raise ParameterError(
                        "0 <= burst_onset < burst_offset <= length violated by "
                        f"({onset}, {offset}) with length {self.length}"
                        )
        for (_, offset), (onset, _) in zip(windows[:-1], windows[1:]):
            if onset < offset:
                raise ParameterError("burst windows must not overlap")

    @property
    def burst_windows(self):
        return ((self.burst_onset, self.burst_offset), *self.extra_bursts)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        dict_ = dataclasses.asdict(self)
        dict_['extra_bursts'] = [list(pair) for pair in self.extra_bursts]
        return dict_


def make_intermittent_signal(scenario, seed=0):
    """Generate the signal of `scenario` and its burst ground truth.

    Parameters
    ----------
    scenario : IntermittencyScenario
    seed : int
        Seed of the Gaussian noise; irrelevant when `noise_stddev` is zero.

    Returns
    -------
    signal, ground_truth : TimeSeries
        `signal` is carrier + burst + noise and `ground_truth` the burst
        alone, exactly zero outside the burst windows.
    """
    n = scenario.length
    t = np.arange(n) * scenario.sampling_period

    carrier = scenario.carrier_amplitude \
            * np.sin(2 * np.pi * scenario.carrier_frequency * t)
    tone = scenario.burst_amplitude \
            * np.sin(2 * np.pi * scenario.burst_frequency * t)

    gate = np.zeros(n)
    for onset, offset in scenario.burst_windows:
        gate[onset:offset] = _taper_window(offset - onset, scenario.burst_taper)
    burst = np.where(gate > 0, tone * gate, 0.)

    signal = carrier + burst
    if scenario.noise_stddev > 0:
        gen = torch.Generator(device=torch_device).manual_seed(int(seed))
        noise = torch.randn(n, generator=gen, dtype=float_dtype)
        signal = signal + scenario.noise_stddev * grab(noise)

    dt = scenario.sampling_period
    return TimeSeries(signal, dt), TimeSeries(burst, dt)


def _taper_window(width, taper):
    """Rectangular window of `width` samples with raised-cosine edges."""
    window = np.ones(width)
    taper = min(taper, width // 2)
    if taper > 0:
        ramp = 0.5 * (1 - np.cos(np.pi * (np.arange(taper) + 0.5) / taper))
        window[:taper] = ramp
        window[width-taper:] = ramp[::-1]
    return window


def make_amplitude_step_signal(*, carrier_frequency=1., amplitude_before=1.,
        amplitude_after=2., step_index=3000, length=6000, sampling_period=1e-3
        ):
    """Return a constant-frequency sinusoid whose amplitude jumps from
    `amplitude_before` to `amplitude_after` at `step_index`.

    Only the amplitude changes, so a detector that responds to frequency
    changes alone should flag nothing here.
    """
    if not 0 <= step_index <= length:
        raise ParameterError(
                f"step_index must lie in [0, {length}], got {step_index}"
                )
    t = np.arange(length) * sampling_period
    amplitude = np.where(np.arange(length) < step_index,
                         amplitude_before, amplitude_after)
    signal = amplitude * np.sin(2 * np.pi * carrier_frequency * t)
    return TimeSeries(signal, sampling_period)
