# Copyright (c) 2024 The entropicemd developers

"""Entropy-guided repair of mode mixing.

The pipeline, run by `repair`, is:

1. Compute the permutation-entropy profile of the series (by default of
   its gradient, which keeps the profile blind to amplitude changes).
2. Take the maxima envelope of the profile and the statistical mode of that
   envelope; portions of the profile above the mode are the intermittent
   (high-entropy) segments.
3. Decompose every segment on its own and compute the entropy of each
   local IMF.
4. Split the local IMFs at the largest drop of their entropy; the
   high-entropy prefix is the intermittent content, which is cross-faded
   back into place and subtracted from the series.
5. Decompose both tracks: the repaired series and the intermittent
   component.
"""


import dataclasses
import logging

import numpy as np

from .._signalcore import TimeSeries
from .._generic import ParameterError, StructuralError
from ..lib.spline import BoundaryPolicy
from .emd import SiftConfig, Decomposition, find_extrema, spline_envelope
from .emd import decompose, has_enough_extrema
from .pentropy import PeConfig, EntropyProfile, entropy_profile
from .pentropy import permutation_entropy, gradient_transform, warn_validity


logger = logging.getLogger(__name__)

# envelopes flatter than this (relative) are treated as constant
_FLAT_SPREAD = 1e-12


# =============================================================================
@dataclasses.dataclass(frozen=True)
class DetectorConfig:
    """Parameters of the high-entropy segment detector.

    Parameters
    ----------
    pe_config : PeConfig
    mode_bins : int
        Histogram bins used to estimate the mode of the envelope.
    merge_gap : int, optional
        Segments closer than this many samples are merged; defaults to
        half the window length.
    min_segment_length : int, optional
        Shorter segments are dropped; defaults to the window length.
    use_gradient : bool
        Compute the profile on `gradient_transform(series)`.
    """

    pe_config: PeConfig = PeConfig()
    mode_bins: int = 64
    merge_gap: int = None
    min_segment_length: int = None
    use_gradient: bool = True

    def __post_init__(self):
        tau = self.pe_config.window_length
        if self.merge_gap is None:
            object.__setattr__(self, 'merge_gap', tau // 2)
        if self.min_segment_length is None:
            object.__setattr__(self, 'min_segment_length', tau)
        if self.mode_bins < 2:
            raise ParameterError(f"mode_bins must be >= 2, got {self.mode_bins}")
        if self.merge_gap < 0:
            raise ParameterError(f"merge_gap must be >= 0, got {self.merge_gap}")
        if self.min_segment_length < self.pe_config.order:
            raise ParameterError(
                    "min_segment_length must be >= pe_config.order, got "
                    f"{self.min_segment_length} < {self.pe_config.order}"
                    )

    @property
    def min_length(self):
        """Shortest series the detector accepts."""
        return self.pe_config.window_length + int(self.use_gradient)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dict(
                pe_config=self.pe_config.to_dict(),
                mode_bins=self.mode_bins,
                merge_gap=self.merge_gap,
                min_segment_length=self.min_segment_length,
                use_gradient=self.use_gradient
                )


@dataclasses.dataclass(frozen=True)
class Segment:
    """Half-open sample range `[start, end)` flagged as intermittent."""

    start: int
    end: int
    peak_entropy: float
    mean_entropy: float = None

    def __post_init__(self):
        object.__setattr__(self, 'start', int(self.start))
        object.__setattr__(self, 'end', int(self.end))
        object.__setattr__(self, 'peak_entropy', float(self.peak_entropy))
        if not 0 <= self.start < self.end:
            raise StructuralError(
                    f"segment needs 0 <= start < end, got [{self.start}, {self.end})"
                    )

    def __len__(self):
        return self.end - self.start

    @property
    def slice(self):
        return slice(self.start, self.end)

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True, eq=False)
class RepairReport:
    """Everything one run of `repair` produced."""

    segments: tuple
    threshold: float
    profile: EntropyProfile
    local_decompositions: tuple
    segment_entropies: tuple
    imf_entropies: tuple
    removed_imf_indices: tuple
    intermittent_component: TimeSeries
    repaired_series: TimeSeries
    final_repaired_decomposition: Decomposition
    final_intermittent_decomposition: Decomposition = None
    detector: DetectorConfig = None
    sift: SiftConfig = None

    def to_dict(self):
        final_intermittent = self.final_intermittent_decomposition
        return dict(
                detector=self.detector.to_dict() if self.detector else None,
                sift=self.sift.to_dict() if self.sift else None,
                threshold=self.threshold,
                segments=[seg.to_dict() for seg in self.segments],
                segment_entropies=list(self.segment_entropies),
                imf_entropies=[list(pe) for pe in self.imf_entropies],
                removed_imf_indices=[list(ind) for ind in self.removed_imf_indices],
                local_decompositions=[
                    d.to_dict() for d in self.local_decompositions
                    ],
                profile=self.profile.to_dict(),
                intermittent_component=self.intermittent_component.to_dict(),
                repaired_series=self.repaired_series.to_dict(),
                final_repaired_decomposition=
                    self.final_repaired_decomposition.to_dict(),
                final_intermittent_decomposition=
                    None if final_intermittent is None
                    else final_intermittent.to_dict()
                )


# =============================================================================
def pe_maxima_envelope(profile):
    """Natural cubic spline through the local maxima of `profile`,
    evaluated at every position; the profile itself if it has fewer than
    three values or fewer than two maxima.

    The spline is clipped to the range of the maxima it passes through.
    """
    values = profile.values
    if values.shape[0] < 3:
        return profile
    maxima, _ = find_extrema(values)
    if maxima.size < 2:
        return profile
    envelope = spline_envelope(values, maxima, BoundaryPolicy.MIRROR)
    peaks = values[maxima]
    return profile.like(np.clip(envelope.samples, peaks.min(), peaks.max()))


def envelope_mode(envelope, mode_bins=64):
    """Statistical mode of the envelope values, estimated as the center of
    the most populated of `mode_bins` equal-width bins over `[min, max]`
    (ties go to the lower bin).
    """
    values = envelope.values if isinstance(envelope, EntropyProfile) \
            else np.asarray(envelope, dtype=float)
    if values.size == 0:
        raise StructuralError("the envelope is empty")
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= _FLAT_SPREAD * max(1., abs(hi)):
        return hi
    counts, edges = np.histogram(values, bins=mode_bins, range=(lo, hi))
    k = int(np.argmax(counts))  # first maximum, i.e. the lower bin on ties
    return float(0.5 * (edges[k] + edges[k+1]))


def detect_segments(series, config=DetectorConfig()):
    """Find the high-entropy portions of `series`.

    Returns
    -------
    segments : list of Segment
        Disjoint, sorted sample ranges.
    threshold : float
        The mode of the maxima envelope of the profile.
    profile : EntropyProfile
    """
    if len(series) < config.min_length:
        raise StructuralError(
                f"series of length {len(series)} is shorter than the "
                f"{config.min_length} samples the detector needs"
                )
    source = gradient_transform(series) if config.use_gradient else series
    profile = entropy_profile(source, config.pe_config)
    threshold = envelope_mode(pe_maxima_envelope(profile), config.mode_bins)

    runs = _runs_above(profile.values, threshold)
    tau, step = config.pe_config.window_length, config.pe_config.step
    reach = tau + int(config.use_gradient)  # samples touched by one window
    candidates = []
    for j0, j1 in runs:
        start = int(j0 * step)
        end = int(min(j1 * step + reach, len(series)))
        run_values = profile.values[j0:j1+1]
        candidates.append([start, end, run_values])

    segments = []
    for start, end, run_values in _merge(candidates, config.merge_gap):
        if end - start < config.min_segment_length:
            logger.debug("dropping short segment [%d, %d)", start, end)
            continue
        segments.append(Segment(
                start, end,
                peak_entropy=float(run_values.max()),
                mean_entropy=float(run_values.mean())
                ))

    logger.info("threshold %.4g: %d segments %s", threshold, len(segments),
                [(seg.start, seg.end) for seg in segments])
    return segments, threshold, profile


def _runs_above(values, threshold):
    """Inclusive `(first, last)` positions of the runs strictly above
    `threshold`.
    """
    above = np.concatenate(([False], values > threshold, [False]))
    edges = np.flatnonzero(np.diff(above.astype(int)))
    return list(zip(edges[::2], edges[1::2] - 1))


def _merge(candidates, merge_gap):
    merged = []
    for start, end, run_values in candidates:
        if merged and start - merged[-1][1] < merge_gap:
            last = merged[-1]
            last[1] = max(last[1], end)
            last[2] = np.concatenate((last[2], run_values))
        else:
            merged.append([start, end, run_values])
    return merged


def local_decompose(series, segments, sift=SiftConfig()):
    """Decompose every segment slice on its own.

    A slice too short or with too few extrema yields an empty
    decomposition (the slice is its own residue).
    """
    decompositions = []
    for seg in segments:
        piece = series[seg.start:seg.end]
        if len(piece) < 4 or not has_enough_extrema(piece):
            decompositions.append(Decomposition.empty(piece))
        else:
            decompositions.append(decompose(piece, sift))
    return decompositions


def imf_entropies(local, pe_config=PeConfig()):
    """Mean permutation entropy of every IMF of a local decomposition."""
    return [mean_entropy(imf, pe_config) for imf in local.imfs]


def mean_entropy(series, pe_config=PeConfig()):
    """Mean of the entropy profile of `series`.

    Series shorter than the window are measured as one window of their own
    length.
    """
    if len(series) >= pe_config.window_length:
        return float(entropy_profile(series, pe_config).values.mean())
    short = pe_config.replace(window_length=max(len(series), pe_config.order))
    warn_validity(short)
    return permutation_entropy(series, short)


def select_removal(local, segment_pe, pe_config=PeConfig(), entropies=None):
    """Choose the local IMFs that carry the intermittent content.

    With two or more IMFs, they are split at the largest drop between the
    entropies of consecutive IMFs and the prefix before the drop is
    removed; at least the first IMF is removed and the last one is always
    kept. A lone IMF is removed only if the residue next to it is nonzero
    and less entropic, so the removal never empties the slice.

    Parameters
    ----------
    local : Decomposition
    segment_pe : float
        Entropy of the segment itself, kept for the comparison log.
    pe_config : PeConfig
    entropies : sequence of float, optional
        Mean entropies of the IMFs, as from `imf_entropies`; computed if
        omitted.

    Returns
    -------
    list of int
        Ascending indices of the IMFs to remove.
    """
    if entropies is None:
        entropies = imf_entropies(local, pe_config)
    if local.n_imfs >= 2:
        removed = split_at_largest_drop(entropies)
    elif local.n_imfs == 0 or not np.any(local.residue.samples):
        removed = []
    else:
        residue_pe = mean_entropy(local.residue, pe_config)
        removed = [0] if entropies[0] > residue_pe else []
    logger.debug("segment PE %.4g, IMF PEs %s: removing %s",
                 segment_pe, np.round(entropies, 4).tolist(), removed)
    return removed


def split_at_largest_drop(entropies):
    """Indices of the entries before the largest drop between consecutive
    `entropies`; `[0]` if no entry drops, `[]` for fewer than two entries.
    """
    entropies = np.asarray(entropies, dtype=float)
    if entropies.shape[0] < 2:
        return []
    drops = entropies[:-1] - entropies[1:]
    split = int(np.argmax(drops))  # first of the largest drops
    if drops[split] <= 0:
        split = 0
    return list(range(split + 1))


def repair(series, detector=DetectorConfig(), sift=SiftConfig()):
    """Run the whole pipeline on `series`; see the module docstring.

    Returns
    -------
    RepairReport
        `repaired_series + intermittent_component` reproduces `series`.
    """
    segments, threshold, profile = detect_segments(series, detector)
    pe_config = detector.pe_config
    locals_ = local_decompose(series, segments, sift)

    component = np.zeros(len(series))
    segment_pes, imf_pes, removals = [], [], []
    for seg, local in zip(segments, locals_):
        piece = series[seg.start:seg.end]
        segment_pe = _segment_entropy(piece, detector)
        entropies = imf_entropies(local, pe_config)
        logger.debug("segment [%d, %d)", seg.start, seg.end)
        removed = select_removal(local, segment_pe, pe_config, entropies)
        segment_pes.append(segment_pe)
        imf_pes.append(tuple(entropies))
        removals.append(tuple(removed))
        if removed:
            content = np.sum([local.imfs[i].samples for i in removed], axis=0)
            ramp = min(pe_config.window_length // 4, len(seg) // 4)
            component[seg.slice] += content * crossfade_weights(len(seg), ramp)

    intermittent = series.like(component)
    repaired = series - intermittent if segments else series

    final_repaired = decompose(repaired, sift)
    final_intermittent = None
    if has_enough_extrema(intermittent):
        final_intermittent = decompose(intermittent, sift)

    return RepairReport(
            segments=tuple(segments),
            threshold=threshold,
            profile=profile,
            local_decompositions=tuple(locals_),
            segment_entropies=tuple(segment_pes),
            imf_entropies=tuple(imf_pes),
            removed_imf_indices=tuple(removals),
            intermittent_component=intermittent,
            repaired_series=repaired,
            final_repaired_decomposition=final_repaired,
            final_intermittent_decomposition=final_intermittent,
            detector=detector,
            sift=sift
            )


def crossfade_weights(length, ramp):
    """Weights that rise linearly over `ramp` samples, stay at one, and
    fall back over the last `ramp` samples.
    """
    weights = np.ones(length)
    if ramp > 0:
        rise = (np.arange(ramp) + 0.5) / ramp
        weights[:ramp] = rise
        weights[length-ramp:] = rise[::-1]
    return weights


def _segment_entropy(piece, detector):
    pe_config = detector.pe_config
    source = gradient_transform(piece) if detector.use_gradient else piece
    if len(source) < pe_config.order:
        return 0.
    return mean_entropy(source, pe_config)
