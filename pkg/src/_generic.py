# Copyright (c) 2024 The entropicemd developers

"""Generic helpers: the exception hierarchy, resampling for error bars,
value(error) formatting and a plain Pearson correlation.
"""


import numpy as np


# =============================================================================
class EntropicEMDError(Exception):
    """Base class of all errors raised by this package."""


class ParameterError(EntropicEMDError, ValueError):
    """A configuration or scenario invariant is violated."""


class StructuralError(EntropicEMDError, ValueError):
    """Input has the wrong length or shape for the requested operation."""


class InsufficientExtremaError(StructuralError):
    """Fewer than two effective knots are available for a spline."""


class ResidueCondition(InsufficientExtremaError):
    """The input has fewer than 2 maxima or fewer than 2 minima; in the
    sifting loop this marks the remainder as the residue.
    """


class SeriesFormatError(EntropicEMDError, ValueError):
    """A file could not be parsed; `line` is 1-based (None if unknown)."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


class SeriesIOError(EntropicEMDError, OSError):
    """Reading or writing a file failed at the filesystem level."""


class StatisticalValidityWarning(UserWarning):
    """A window is too short for a statistically meaningful pattern
    distribution.
    """


# =============================================================================
class Resampler:
    """
    Parameters:
    -----------
    method : str (option)
       The default method of resampling is bootstrap, the other option is
       jackknife, which can be invoked with option set to 'jackknife'.
    seed : int (option)
       Seed of the bootstrap index generator.
    """
    def __init__(self, method='bootstrap', seed=None):
        self.method = method
        self.rng = np.random.default_rng(seed)

    def __call__(self, samples, n_resamples=100, binsize=1, batch_size=None):
        """
        Parameters:
        -----------
        samples: ndarray

        n_resamples: int (option)
            Irrelavant for the jackknife method.

        binsize: int (option)
            Bins the data before sampling from it.
        """
        samples = np.asarray(samples)
        l_b = samples.shape[0] // binsize  # length of binned samples
        resample_shape = (l_b * binsize, *samples.shape[1:])
        binned_samples = samples[:(l_b * binsize)].reshape(l_b, binsize, -1)

        if batch_size is None:
            batch_size = l_b

        if self.method == 'jackknife':
            n_resamples = l_b
            get_indices = lambda i: np.arange(l_b)[np.arange(l_b) != i]
            resample_shape = ((l_b - 1) * binsize, *samples.shape[1:])
        else:
            get_indices = lambda i: self.rng.integers(l_b, size=(batch_size,))

        for i in range(n_resamples):
            yield binned_samples[get_indices(i)].reshape(*resample_shape)

    def mean_std(self, samples, **kwargs):
        """Return the sample mean and the resampled spread of the mean."""
        samples = np.asarray(samples, dtype=float)
        mean = float(np.mean(samples))
        if samples.shape[0] < 2:
            return mean, 0.
        std = float(np.std([np.mean(x) for x in self(samples, **kwargs)]))
        return mean, std


# =============================================================================
def fmt_value_err(value, error, err_digits=1):
    try:
        digits = -int(np.floor(np.log10(error))) + err_digits - 1
        if digits < 0:
            digits = 0
        str_ = "{0:.{2}f}({1:.0f})".format(value, error * 10**digits, digits)
    except (ValueError, OverflowError):
        str_ = "{0}+-{1}".format(value, error)
    return str_


def correlation(x, y):
    """Pearson correlation of two equal-length arrays; 0 if either one is
    constant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise StructuralError(
                f"correlation needs equal shapes, got {x.shape} and {y.shape}"
                )
    dx = x - x.mean()
    dy = y - y.mean()
    norm = np.sqrt(np.sum(dx**2) * np.sum(dy**2))
    if norm == 0:
        return 0.
    return float(np.sum(dx * dy) / norm)
