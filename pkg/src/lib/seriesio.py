# Copyright (c) 2024 The entropicemd developers

"""Reading and writing series and results as CSV or JSON.

Formats
-------
series, CSV
    One sample per line, with an optional header line `value`; the sampling
    period is not stored and has to be passed in.
series, JSON
    `{"sampling_period": <number>, "samples": [<numbers>]}`.
decomposition, CSV
    Header `imf1,...,imfN,residue` and one row per sample.
profile, CSV
    Header `index,entropy`, `index` being the anchor sample of the window.
segments, CSV
    Header `start,end,peak_entropy`.

Numbers are written with `repr`, which round-trips float64 exactly.
"""


import json
import logging
import math
import pathlib
import sys

import numpy as np

from .._signalcore import TimeSeries
from .._generic import SeriesFormatError, SeriesIOError, StructuralError


logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')
STDOUT = '-'  # path that writes to the standard output


def resolve_format(path, format=None):
    """Return `format`, or guess it from the suffix of `path`."""
    if format is None:
        suffix = pathlib.Path(str(path)).suffix.lower().lstrip('.')
        format = suffix if suffix in FORMATS else 'csv'
    if format not in FORMATS:
        raise SeriesFormatError(f"unknown format {format!r}", path)
    return format


# =============================================================================
def load_series(path, format=None, sampling_period=1.):
    """Read a `TimeSeries` from `path`.

    Parameters
    ----------
    path : str or path-like
    format : {'csv', 'json'}, optional
        Guessed from the suffix if omitted.
    sampling_period : float
        Used for CSV files, which do not store it.

    Raises
    ------
    SeriesFormatError
        On a parse failure, a non-finite value, or an empty file; the error
        names the line.
    SeriesIOError
        If the file cannot be read.
    """
    format = resolve_format(path, format)
    text = _read_text(path)
    if format == 'json':
        return _parse_json_series(text, path)
    samples = _parse_csv_column(text, path)
    return TimeSeries(samples, sampling_period)


def _parse_csv_column(text, path):
    samples = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        field = line.strip()
        if not field:
            continue
        if not samples and field.lower() == 'value':
            continue  # header
        try:
            value = float(field)
        except ValueError:
            raise SeriesFormatError(
                    f"cannot parse {field!r} as a number", path, lineno
                    ) from None
        if not math.isfinite(value):
            raise SeriesFormatError(
                    f"non-finite value {field!r} in row", path, lineno
                    )
        samples.append(value)
    if not samples:
        raise SeriesFormatError("no samples found", path)
    return samples


def _parse_json_series(text, path):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise SeriesFormatError(err.msg, path, err.lineno) from None
    if not isinstance(obj, dict) or 'samples' not in obj \
            or 'sampling_period' not in obj:
        raise SeriesFormatError(
                "expected an object with 'sampling_period' and 'samples'", path
                )
    samples = obj['samples']
    if not isinstance(samples, list) or not samples:
        raise SeriesFormatError("'samples' must be a non-empty list", path)
    for row, value in enumerate(samples):
        if isinstance(value, bool) or not isinstance(value, (int, float)) \
                or not math.isfinite(value):
            raise SeriesFormatError(
                    f"sample {row} is not a finite number: {value!r}", path
                    )
    try:
        return TimeSeries(samples, obj['sampling_period'])
    except (TypeError, ValueError) as err:
        raise SeriesFormatError(str(err), path) from None


# =============================================================================
def write_series(series, path, format=None, extra=None):
    """Write `series` to `path`; see the module docstring for formats.
    `extra` entries are added to the JSON object.
    """
    format = resolve_format(path, format)
    if format == 'json':
        obj = series.to_dict()
        obj.update(extra or {})
        _write_text(path, dump_json(obj))
    else:
        _write_text(path, format_csv(['value'], [series.samples]))


def write_decomposition(decomposition, path, format=None, extra=None):
    """Write a decomposition; `extra` entries are added to the JSON object."""
    format = resolve_format(path, format)
    if format == 'json':
        obj = decomposition.to_dict()
        obj.update(extra or {})
        _write_text(path, dump_json(obj))
    else:
        header = [f"imf{i+1}" for i in range(decomposition.n_imfs)]
        header.append('residue')
        _write_text(path, format_csv(header, decomposition.to_array()))


def write_profile(profile, path, format=None, extra=None):
    format = resolve_format(path, format)
    if format == 'json':
        obj = profile.to_dict()
        obj.update(extra or {})
        _write_text(path, dump_json(obj))
    else:
        columns = [profile.indices, profile.values]
        _write_text(path, format_csv(['index', 'entropy'], columns))


def write_segments(segments, path):
    """Write segments as CSV `start,end,peak_entropy`."""
    lines = ["start,end,peak_entropy"]
    for seg in segments:
        lines.append(f"{seg.start},{seg.end},{_fmt(seg.peak_entropy)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_report(report, path):
    """Write a repair report as JSON."""
    _write_text(path, dump_json(report.to_dict()))


def dump_json(obj):
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def format_csv(header, columns):
    """Format equal-length columns under `header` as CSV text."""
    columns = [np.asarray(col) for col in columns]
    lengths = {col.shape[0] for col in columns}
    if len(lengths) > 1:
        raise StructuralError(f"columns have different lengths: {lengths}")
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(value) for value in row))
    return "\n".join(lines) + "\n"


def _fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


# =============================================================================
def _read_text(path):
    try:
        return pathlib.Path(path).read_text()
    except OSError as err:
        raise SeriesIOError(f"cannot read {path}: {err.strerror or err}") from err


def _write_text(path, text):
    if str(path) == STDOUT:
        sys.stdout.write(text)
        return
    try:
        pathlib.Path(path).write_text(text)
    except OSError as err:
        raise SeriesIOError(
                f"cannot write {path}: {err.strerror or err}"
                ) from err
    logger.debug("wrote %s", path)
