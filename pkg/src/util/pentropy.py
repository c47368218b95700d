# Copyright (c) 2024 The entropicemd developers

"""Ordinal patterns and sliding-window permutation entropy.

Every run of `m` consecutive samples is mapped to the permutation that
sorts it (its ordinal pattern); the permutation entropy of a segment is the
Shannon entropy, in nats, of the distribution of its patterns. Sliding a
window of length `tau` along a series gives the entropy profile used to
localise intermittent portions.

Patterns are numbered by the lexicographic rank of their rank vectors, so
for `m = 3` pattern 0 is `(0, 1, 2)` (ascending, and all-ties) and pattern
5 is `(2, 1, 0)`.

The whole profile is computed at once: the pattern code of every m-tuple
is evaluated in a vectorised pass, and the pattern counts of all windows
come from differences of a cumulative one-hot count. The counts are exact
integers, so the profile does not depend on evaluation order.
"""


import dataclasses
import enum
import logging
import math
import warnings

import numpy as np

from .._signalcore import TimeSeries, torch, as_tensor, grab
from .._generic import ParameterError, StructuralError
from .._generic import StatisticalValidityWarning


logger = logging.getLogger(__name__)

MIN_SEQUENCES = 100  # a window needs more than this many m-tuples


class TieRule(str, enum.Enum):
    INDEX_ORDER = 'index_order'  # equal values rank by position


class Alignment(str, enum.Enum):
    WINDOW_CENTER = 'window_center'


# =============================================================================
@dataclasses.dataclass(frozen=True)
class PeConfig:
    """Parameters of permutation entropy.

    Parameters
    ----------
    window_length : int
        Length `tau` of the running windows.
    order : int
        Length `m` of the ordinal patterns.
    step : int
        Stride of the running windows.
    tie_rule : TieRule or str
    normalize : bool
        If True, entropies are divided by `ln(m!)`.
    """

    window_length: int = 120
    order: int = 3
    step: int = 1
    tie_rule: TieRule = TieRule.INDEX_ORDER
    normalize: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, 'tie_rule', TieRule(self.tie_rule))
        except ValueError:
            raise ParameterError(
                    f"tie_rule must be 'index_order', got {self.tie_rule!r}"
                    ) from None
        if self.order < 2:
            raise ParameterError(f"order must be >= 2, got {self.order}")
        if self.window_length - self.order + 1 < 1:
            raise ParameterError(
                    "window_length - order + 1 >= 1 violated: "
                    f"window_length={self.window_length}, order={self.order}"
                    )
        if self.step < 1:
            raise ParameterError(f"step must be >= 1, got {self.step}")

    @property
    def n_patterns(self):
        return math.factorial(self.order)

    @property
    def n_sequences(self):
        """Number of m-tuples in one window."""
        return self.window_length - self.order + 1

    @property
    def is_valid(self):
        """Whether a window holds enough m-tuples to be meaningful."""
        return self.n_sequences > MIN_SEQUENCES

    @property
    def max_entropy(self):
        return 1. if self.normalize else math.log(self.n_patterns)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        dict_ = dataclasses.asdict(self)
        dict_['tie_rule'] = self.tie_rule.value
        return dict_


@dataclasses.dataclass(frozen=True)
class OrdinalPattern:
    """The rank vector of `m` values; `ranks[k]` is the rank of value `k`."""

    ranks: tuple

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if sorted(ranks) != list(range(len(ranks))):
            raise StructuralError(f"{ranks} is not a permutation")
        object.__setattr__(self, 'ranks', ranks)

    @property
    def order(self):
        return len(self.ranks)

    @property
    def index(self):
        """Lexicographic rank of the pattern among all `m!` patterns."""
        return int(lehmer_code(torch.tensor([self.ranks]))[0])


@dataclasses.dataclass(frozen=True, eq=False)
class EntropyProfile:
    """Permutation entropy of every window position.

    `values[j]` belongs to the window starting at sample `j * step`, and is
    anchored at sample `first_index + j * step` (the window center).
    """

    values: np.ndarray
    config: PeConfig
    alignment: Alignment = Alignment.WINDOW_CENTER
    first_index: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'alignment', Alignment(self.alignment))

    def __len__(self):
        return self.values.shape[0]

    @property
    def indices(self):
        """Anchor sample index of every profile value."""
        return self.first_index + self.config.step * np.arange(len(self))

    def window_start(self, position):
        return position * self.config.step

    def like(self, values):
        return dataclasses.replace(self, values=values)

    def to_dict(self):
        return dict(
                config=self.config.to_dict(),
                alignment=self.alignment.value,
                first_index=self.first_index,
                index=self.indices.tolist(),
                entropy=self.values.tolist()
                )


# =============================================================================
def ordinal_pattern(window, tie_rule=TieRule.INDEX_ORDER):
    """Return the ordinal pattern of `window` (its `m` values)."""
    TieRule(tie_rule)
    window = np.asarray(window, dtype=float)
    if window.ndim != 1 or window.shape[0] < 2:
        raise StructuralError("a window needs at least 2 values")
    ranks = _ranks(as_tensor(window)[None, :])[0]
    return OrdinalPattern(tuple(grab(ranks).tolist()))


def pattern_distribution(segment, order=3, tie_rule=TieRule.INDEX_ORDER):
    """Return the probabilities of the `m!` patterns among the
    `len(segment) - m + 1` consecutive m-tuples of `segment`.
    """
    TieRule(tie_rule)
    x = _samples_of(segment)
    if x.shape[0] < order:
        raise StructuralError(
                f"segment of length {x.shape[0]} is shorter than order {order}"
                )
    codes = pattern_codes(x, order)
    counts = torch.bincount(codes, minlength=math.factorial(order))
    return grab(counts).astype(float) / codes.shape[0]


def shannon_entropy(probabilities):
    """`-sum p ln p` in nats, with `0 ln 0 = 0`."""
    p = torch.as_tensor(np.array(probabilities, dtype=float))
    return float(torch.special.entr(p).sum())


def permutation_entropy(segment, config=PeConfig()):
    """Permutation entropy of one segment (in nats unless normalized)."""
    dist = pattern_distribution(segment, config.order, config.tie_rule)
    entropy = shannon_entropy(dist)
    if config.normalize:
        entropy /= math.log(config.n_patterns)
    return entropy


def entropy_profile(series, config=PeConfig()):
    """Permutation entropy of every running window of `series`.

    Returns
    -------
    EntropyProfile
        `floor((N - tau) / step) + 1` values, anchored at window centers.

    Warns
    -----
    StatisticalValidityWarning
        If a window holds `MIN_SEQUENCES` m-tuples or fewer.
    """
    x = _samples_of(series)
    n, tau, m = x.shape[0], config.window_length, config.order
    if n < tau:
        raise StructuralError(
                f"series of length {n} is shorter than one window ({tau})"
                )
    warn_validity(config)

    codes = pattern_codes(x, m)
    one_hot = torch.nn.functional.one_hot(codes, config.n_patterns)
    cumulative = torch.cat((
            torch.zeros((1, config.n_patterns), dtype=one_hot.dtype),
            torch.cumsum(one_hot, dim=0)
            ))
    starts = torch.arange(0, n - tau + 1, config.step)
    counts = cumulative[starts + config.n_sequences] - cumulative[starts]
    probs = counts.to(torch.float64) / config.n_sequences
    values = torch.special.entr(probs).sum(dim=1)
    if config.normalize:
        values = values / math.log(config.n_patterns)

    logger.debug("entropy profile: %d windows of %d samples",
                 starts.shape[0], tau)
    return EntropyProfile(grab(values), config, Alignment.WINDOW_CENTER,
                          first_index=(tau - 1) // 2)


def gradient_transform(series):
    """Sign of the consecutive differences of `series`: +1 rising,
    -1 falling, 0 flat. The result has one sample fewer.
    """
    x = _samples_of(series)
    if x.shape[0] < 2:
        raise StructuralError(
                f"gradient_transform needs at least 2 samples, got {x.shape[0]}"
                )
    grad = np.sign(np.diff(x))
    if isinstance(series, TimeSeries):
        return series.like(grad)
    return TimeSeries(grad)


def warn_validity(config):
    if not config.is_valid:
        warnings.warn(
                f"window of {config.window_length} samples holds only "
                f"{config.n_sequences} patterns of order {config.order}; "
                f"more than {MIN_SEQUENCES} are needed for a reliable "
                "distribution",
                StatisticalValidityWarning, stacklevel=3
                )


# =============================================================================
def pattern_codes(x, order):
    """Lexicographic pattern code of every m-tuple of `x`."""
    windows = as_tensor(x).unfold(0, order, 1)
    return lehmer_code(_ranks(windows))


def _ranks(windows):
    # stable sort ranks equal values by position
    order = torch.argsort(windows, dim=-1, stable=True)
    return torch.argsort(order, dim=-1)


def lehmer_code(ranks):
    """Lexicographic index of each row of `ranks` among the permutations of
    its length.
    """
    m = ranks.shape[-1]
    code = torch.zeros(ranks.shape[:-1], dtype=torch.int64)
    for k in range(m - 1):
        smaller_after = (ranks[..., k+1:] < ranks[..., k:k+1]).sum(dim=-1)
        code = code + smaller_after * math.factorial(m - 1 - k)
    return code


def _samples_of(segment):
    if isinstance(segment, TimeSeries):
        return segment.samples
    return np.asarray(segment, dtype=float)
