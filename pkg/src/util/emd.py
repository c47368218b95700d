# Copyright (c) 2024 The entropicemd developers

"""Classical empirical mode decomposition.

A series is split into intrinsic mode functions (IMFs) by sifting: the mean
of the cubic-spline envelopes through its maxima and minima is subtracted
repeatedly until the result is an IMF (extrema and zero crossings differ
by at most one) and a Cauchy-type criterion is met; the IMF is removed and the
remainder sifted again, until it has too few extrema to build envelopes.
What is left is the residue, and

    x(t) = sum_i c_i(t) + r(t)

holds up to round-off.
"""


import dataclasses
import logging

import numpy as np

from .._signalcore import TimeSeries
from .._generic import ParameterError, StructuralError, ResidueCondition
from ..lib.spline import NaturalCubicSpline, AugmentKnots, BoundaryPolicy


logger = logging.getLogger(__name__)

IMF_BOUNDARY_EXTREMA = 2  # extrema per side left out of the IMF test


# =============================================================================
@dataclasses.dataclass(frozen=True)
class SiftConfig:
    """Knobs of the sifting process.

    Parameters
    ----------
    sd_threshold : float
        Sifting of one IMF stops once the candidate is an IMF and
        `sum((h_prev - h)**2) / sum(h_prev**2)` is below this value.
    max_sift_iterations : int
        Hard cap on the sifting iterations of one IMF.
    max_imfs : int
        Hard cap on the number of IMFs.
    boundary_policy : BoundaryPolicy or str
        How envelope knots are extended past the ends of the series.
    """

    sd_threshold: float = 0.2
    max_sift_iterations: int = 50
    max_imfs: int = 16
    boundary_policy: BoundaryPolicy = BoundaryPolicy.MIRROR

    def __post_init__(self):
        try:
            policy = BoundaryPolicy(self.boundary_policy)
        except ValueError:
            raise ParameterError(
                    f"boundary_policy must be one of "
                    f"{[p.value for p in BoundaryPolicy]}, "
                    f"got {self.boundary_policy!r}"
                    ) from None
        object.__setattr__(self, 'boundary_policy', policy)
        if not self.sd_threshold > 0:
            raise ParameterError(
                    f"sd_threshold must be > 0, got {self.sd_threshold}"
                    )
        if self.max_sift_iterations < 1:
            raise ParameterError(
                    f"max_sift_iterations must be >= 1, "
                    f"got {self.max_sift_iterations}"
                    )
        if self.max_imfs < 1:
            raise ParameterError(f"max_imfs must be >= 1, got {self.max_imfs}")

    def to_dict(self):
        dict_ = dataclasses.asdict(self)
        dict_['boundary_policy'] = self.boundary_policy.value
        return dict_


@dataclasses.dataclass(frozen=True, eq=False)
class Decomposition:
    """IMFs and residue of a series, with the sifting count of every IMF."""

    imfs: tuple
    residue: TimeSeries
    sift_counts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'imfs', tuple(self.imfs))
        object.__setattr__(self, 'sift_counts', tuple(self.sift_counts))
        n, dt = len(self.residue), self.residue.sampling_period
        for imf in self.imfs:
            if len(imf) != n or imf.sampling_period != dt:
                raise StructuralError(
                        "all IMFs and the residue must share length and "
                        "sampling period"
                        )
        if len(self.sift_counts) != len(self.imfs):
            raise StructuralError("one sift count is needed per IMF")

    def __len__(self):
        return len(self.imfs)

    @property
    def n_imfs(self):
        return len(self.imfs)

    @property
    def sampling_period(self):
        return self.residue.sampling_period

    def to_array(self):
        """Return an array of shape (n_imfs + 1, length); last row is the
        residue.
        """
        rows = [imf.samples for imf in self.imfs] + [self.residue.samples]
        return np.vstack(rows)

    def to_dict(self):
        return dict(
                sampling_period=self.sampling_period,
                imfs=[imf.samples.tolist() for imf in self.imfs],
                residue=self.residue.samples.tolist(),
                sift_counts=list(self.sift_counts)
                )

    @staticmethod
    def empty(series):
        """The decomposition of a series that is its own residue."""
        return Decomposition((), series, ())


# =============================================================================
def find_extrema(series):
    """Return the strict interior local maxima and minima of `series`.

    A flat run of equal values counts as one extremum placed at its
    midpoint, rounded down; runs touching either end never count.

    Returns
    -------
    maxima, minima : ndarray of int
        Strictly increasing sample indices.
    """
    x = _samples_of(series)
    if x.shape[0] < 3:
        raise StructuralError(
                f"find_extrema needs at least 3 samples, got {x.shape[0]}"
                )
    starts = np.concatenate(([0], np.flatnonzero(np.diff(x)) + 1))
    ends = np.concatenate((starts[1:] - 1, [x.shape[0] - 1]))
    values = x[starts]
    mids = (starts + ends) // 2

    # runs 0 and -1 touch the ends
    center, left, right = values[1:-1], values[:-2], values[2:]
    is_max = (center > left) & (center > right)
    is_min = (center < left) & (center < right)
    maxima = mids[1:-1][is_max]
    minima = mids[1:-1][is_min]
    logger.debug("found %d maxima and %d minima", maxima.size, minima.size)
    return maxima, minima


def spline_envelope(series, knots, boundary_policy=BoundaryPolicy.MIRROR):
    """Natural cubic spline through `(knot, series[knot])`, evaluated at
    every sample index.

    Parameters
    ----------
    series : TimeSeries
    knots : array_like of int
        Strictly increasing sample indices.
    boundary_policy : BoundaryPolicy or str
        `mirror` reflects the first and last two knots about the end
        samples, `clamp` adds the end samples as knots, `none` fits the
        knots as they are.

    Raises
    ------
    InsufficientExtremaError
        If fewer than 2 knots remain after the boundary extension.
    """
    x = _samples_of(series)
    knots_x, knots_y = AugmentKnots(x, knots)(boundary_policy)
    spline = NaturalCubicSpline(knots_x, knots_y)
    return _like(series, spline(np.arange(x.shape[0])))


def local_mean(upper, lower):
    """Return the element-wise mean of two envelopes."""
    if len(upper) != len(lower):
        raise StructuralError(
                f"envelope lengths differ: {len(upper)} vs {len(lower)}"
                )
    return _like(upper, 0.5 * (_samples_of(upper) + _samples_of(lower)))


def sift_once(series, boundary_policy=BoundaryPolicy.MIRROR):
    """Subtract the mean of the upper and lower envelopes from `series`.

    Raises
    ------
    ResidueCondition
        If `series` has fewer than 2 maxima or fewer than 2 minima.
    """
    maxima, minima = find_extrema(series)
    if maxima.size < 2 or minima.size < 2:
        raise ResidueCondition(
                f"not enough extrema to sift: {maxima.size} maxima, "
                f"{minima.size} minima"
                )
    upper = spline_envelope(series, maxima, boundary_policy)
    lower = spline_envelope(series, minima, boundary_policy)
    return series - local_mean(upper, lower)


def extract_imf(series, config=SiftConfig()):
    """Sift `series` until the candidate is an IMF and the SD criterion is
    met, or the iteration cap is reached.

    The IMF test leaves out the `IMF_BOUNDARY_EXTREMA` outermost extrema
    on either side (see `is_imf`).

    Returns
    -------
    imf : TimeSeries
    iterations : int
        Number of sifts performed.

    If a candidate loses its extrema half way, the last valid candidate is
    returned; a residue condition on the first sift propagates.
    """
    h_prev = series
    for iteration in range(1, config.max_sift_iterations + 1):
        try:
            h = sift_once(h_prev, config.boundary_policy)
        except ResidueCondition:
            if iteration == 1:
                raise
            logger.debug("candidate ran out of extrema after %d sifts",
                         iteration - 1)
            return h_prev, iteration - 1
        sd = sift_deviation(h_prev, h)
        logger.debug("sift %d: SD = %.3g", iteration, sd)
        if sd < config.sd_threshold \
                and is_imf(h, exclude_boundary_extrema=IMF_BOUNDARY_EXTREMA)[0]:
            break
        h_prev = h
    else:
        logger.debug("no IMF after %d sifts; keeping the last candidate",
                     config.max_sift_iterations)
    return h, iteration


def sift_deviation(h_prev, h):
    """Cauchy-type stopping measure between two successive candidates."""
    prev = _samples_of(h_prev)
    denom = np.sum(prev**2)
    if denom == 0:
        return 0.
    return float(np.sum((prev - _samples_of(h))**2) / denom)


def decompose(series, config=SiftConfig()):
    """Decompose `series` into IMFs and a residue.

    IMFs are extracted from the running remainder until it has fewer than
    2 maxima or fewer than 2 minima, or `config.max_imfs` is reached.
    """
    if len(series) < 4:
        raise StructuralError(
                f"decompose needs at least 4 samples, got {len(series)}"
                )
    imfs, sift_counts = [], []
    remainder = series
    while len(imfs) < config.max_imfs:
        if not has_enough_extrema(remainder):
            break
        imf, iterations = extract_imf(remainder, config)
        imfs.append(imf)
        sift_counts.append(iterations)
        remainder = remainder - imf
    logger.info("extracted %d IMFs (sift counts %s)", len(imfs), sift_counts)
    return Decomposition(imfs, remainder, sift_counts)


def has_enough_extrema(series):
    """True if `series` has at least 2 maxima and 2 minima."""
    if len(series) < 3:
        return False
    maxima, minima = find_extrema(series)
    return maxima.size >= 2 and minima.size >= 2


def is_imf(series, exclude_boundary_extrema=0):
    """Check the extrema/zero-crossing property of an IMF.

    Zero crossings are the sign changes between consecutive nonzero
    samples, so a zero sample between opposite signs counts once and a
    zero touched from one side does not count.

    Parameters
    ----------
    series : TimeSeries
    exclude_boundary_extrema : int, optional
        Restrict the count to the span between the k-th extremum from
        either end, leaving out the boundary-affected parts.

    Returns
    -------
    ok, extrema_count, zero_crossings : bool, int, int
    """
    x = _samples_of(series)
    maxima, minima = find_extrema(series)
    k = exclude_boundary_extrema
    if k > 0:
        extrema = np.sort(np.concatenate((maxima, minima)))
        if extrema.size <= 2 * k:
            return True, 0, 0
        lo, hi = extrema[k], extrema[-k-1]
        x = x[lo:hi+1]
        extrema_count = extrema.size - 2 * k
    else:
        extrema_count = maxima.size + minima.size
    signs = np.sign(x)
    signs = signs[signs != 0]
    zero_crossings = int(np.count_nonzero(np.diff(signs)))
    ok = abs(extrema_count - zero_crossings) <= 1
    return ok, int(extrema_count), zero_crossings


def reconstruct(decomposition):
    """Return the sum of all IMFs and the residue."""
    total = np.array(decomposition.residue.samples)
    for imf in decomposition.imfs:
        total = total + imf.samples
    return decomposition.residue.like(total)


def orthogonality_index(decomposition):
    """Return the overall index of orthogonality of the IMFs and residue,
    `sum_{i != j} <c_i, c_j> / <x, x>` where `x` is the reconstruction.
    Small values mean the components barely overlap.
    """
    components = decomposition.to_array()
    signal = components.sum(axis=0)
    energy = np.dot(signal, signal)
    if energy == 0:
        return 0.
    gram = components @ components.T
    cross = gram.sum() - np.trace(gram)
    return float(cross / energy)


# =============================================================================
def _samples_of(series):
    if isinstance(series, TimeSeries):
        return series.samples
    return np.asarray(series, dtype=float)


def _like(template, samples):
    if isinstance(template, TimeSeries):
        return template.like(samples)
    return TimeSeries(samples)
