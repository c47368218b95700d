#!/usr/bin/env python3

"""Command-line front end of `entropicemd`.

Sub-commands::

    entropic-emd synth     [scenario flags] --seed S --output signal.csv
    entropic-emd decompose in.csv --ts 1e-3 [sift flags] --output imfs.csv
    entropic-emd entropy   in.csv --tau 120 --m 3 --step 1 [--gradient]
    entropic-emd repair    in.csv [detector flags] [sift flags] --output r.json

`synth` writes the signal to `--output` and the ground-truth burst next to
it (`<stem>_truth<suffix>`). `repair` writes the JSON report to `--output`
and the component series next to it. Without `--output` the data goes to
the standard output (for `synth` and `repair` only the main artifact).

Exit status: 0 on success, 1 on a usage or parameter error, 2 on a data or
structural error. Diagnostics go to the standard error only.
"""


import argparse
import logging
import pathlib
import sys

from .._generic import EntropicEMDError, ParameterError
from .._signalcore import IntermittencyScenario, make_intermittent_signal
from ..lib.seriesio import load_series, write_series, write_decomposition
from ..lib.seriesio import write_profile, write_report, write_segments, STDOUT
from ..lib.spline import BoundaryPolicy
from ..util.emd import SiftConfig, decompose
from ..util.pentropy import PeConfig, entropy_profile, gradient_transform
from ..util.mixfix import DetectorConfig, repair


logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """An `argparse.ArgumentParser` that raises instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_help()}")


# =============================================================================
def build_parser():
    parser = ArgumentParser(prog='entropic-emd',
            description="Entropy-guided empirical mode decomposition.")
    add = parser.add_argument
    add("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True,
                                     parser_class=ArgumentParser)

    synth = commands.add_parser("synth", help="generate an intermittent signal")
    add = synth.add_argument
    default = IntermittencyScenario()
    add("--carrier-frequency", type=float, default=default.carrier_frequency)
    add("--carrier-amplitude", type=float, default=default.carrier_amplitude)
    add("--burst-frequency", type=float, default=default.burst_frequency)
    add("--burst-amplitude", type=float, default=default.burst_amplitude)
    add("--burst-onset", type=int, default=default.burst_onset)
    add("--burst-offset", type=int, default=default.burst_offset)
    add("--noise", dest="noise_stddev", type=float, default=default.noise_stddev)
    add("--length", type=int, default=default.length)
    add("--ts", dest="sampling_period", type=float,
        default=default.sampling_period)
    add("--seed", type=int, default=0)
    _add_output(synth)

    decomp = commands.add_parser("decompose", help="decompose a series")
    _add_input(decomp)
    _add_sift(decomp)
    _add_output(decomp)

    entropy = commands.add_parser("entropy", help="permutation-entropy profile")
    _add_input(entropy)
    _add_pe(entropy)
    entropy.add_argument("--gradient", action=argparse.BooleanOptionalAction,
                         default=False,
                         help="profile the sign of the differences")
    _add_output(entropy)

    rep = commands.add_parser("repair", help="run the full repair pipeline")
    _add_input(rep)
    _add_pe(rep)
    add = rep.add_argument
    add("--gradient", action=argparse.BooleanOptionalAction, default=True,
        help="detect on the sign of the differences (default)")
    add("--mode-bins", type=int, default=64)
    add("--merge-gap", type=int, default=None)
    add("--min-segment", type=int, default=None)
    _add_sift(rep)
    add("--seed", type=int, default=0, help="accepted for symmetry; unused")
    _add_output(rep)
    return parser


def _add_input(parser):
    add = parser.add_argument
    add("input", help="CSV or JSON series")
    add("--ts", dest="sampling_period", type=float, default=1.,
        help="sampling period of CSV input (seconds)")


def _add_output(parser):
    add = parser.add_argument
    add("--format", choices=("csv", "json"), default=None)
    add("--output", default=STDOUT)


def _add_pe(parser):
    add = parser.add_argument
    add("--tau", type=int, default=120, help="window length")
    add("--m", type=int, default=3, help="pattern order")
    add("--step", type=int, default=1, help="window stride")


def _add_sift(parser):
    add = parser.add_argument
    add("--sd-threshold", type=float, default=0.2)
    add("--max-sift", type=int, default=50)
    add("--max-imfs", type=int, default=16)
    add("--boundary", choices=[p.value for p in BoundaryPolicy],
        default=BoundaryPolicy.MIRROR.value)


def _sift_config(args):
    return SiftConfig(sd_threshold=args.sd_threshold,
                      max_sift_iterations=args.max_sift,
                      max_imfs=args.max_imfs,
                      boundary_policy=args.boundary)


def _pe_config(args):
    return PeConfig(window_length=args.tau, order=args.m, step=args.step)


def _output_format(args):
    if args.format is not None:
        return args.format
    suffix = pathlib.Path(args.output).suffix.lower()
    return 'json' if suffix == '.json' else 'csv'


def _sibling(path, tag, suffix):
    """`<stem>_<tag><suffix>` next to `path`; None for the standard output."""
    if path == STDOUT:
        return None
    path = pathlib.Path(path)
    return path.with_name(f"{path.stem}_{tag}{suffix}")


# =============================================================================
def run_synth(args):
    scenario = IntermittencyScenario(
            carrier_frequency=args.carrier_frequency,
            carrier_amplitude=args.carrier_amplitude,
            burst_frequency=args.burst_frequency,
            burst_amplitude=args.burst_amplitude,
            burst_onset=args.burst_onset,
            burst_offset=args.burst_offset,
            noise_stddev=args.noise_stddev,
            length=args.length,
            sampling_period=args.sampling_period
            )
    signal, truth = make_intermittent_signal(scenario, seed=args.seed)
    fmt = _output_format(args)
    extra = dict(scenario=scenario.to_dict(), seed=args.seed)
    write_series(signal, args.output, fmt, extra=extra)
    truth_path = _sibling(args.output, "truth", f".{fmt}")
    if truth_path is not None:
        write_series(truth, truth_path, fmt, extra=extra)


def run_decompose(args):
    config = _sift_config(args)
    series = load_series(args.input, sampling_period=args.sampling_period)
    decomposition = decompose(series, config)
    write_decomposition(decomposition, args.output, _output_format(args),
                        extra=dict(sift=config.to_dict()))


def run_entropy(args):
    config = _pe_config(args)
    series = load_series(args.input, sampling_period=args.sampling_period)
    source = gradient_transform(series) if args.gradient else series
    profile = entropy_profile(source, config)
    write_profile(profile, args.output, _output_format(args),
                  extra=dict(gradient=args.gradient))


def run_repair(args):
    detector = DetectorConfig(
            pe_config=_pe_config(args),
            mode_bins=args.mode_bins,
            merge_gap=args.merge_gap,
            min_segment_length=args.min_segment,
            use_gradient=args.gradient
            )
    sift = _sift_config(args)
    series = load_series(args.input, sampling_period=args.sampling_period)
    report = repair(series, detector, sift)
    write_report(report, args.output)

    fmt = 'json' if args.format == 'json' else 'csv'
    artifacts = [
            ("repaired", report.repaired_series, write_series),
            ("intermittent", report.intermittent_component, write_series),
            ("repaired_imfs", report.final_repaired_decomposition,
             write_decomposition),
            ]
    if report.final_intermittent_decomposition is not None:
        artifacts.append(("intermittent_imfs",
                          report.final_intermittent_decomposition,
                          write_decomposition))
    if _sibling(args.output, "segments", ".csv") is None:
        return
    write_segments(report.segments, _sibling(args.output, "segments", ".csv"))
    for tag, value, writer in artifacts:
        writer(value, _sibling(args.output, tag, f".{fmt}"), fmt)


COMMANDS = dict(synth=run_synth, decompose=run_decompose,
                entropy=run_entropy, repair=run_repair)


def main(argv=None):
    """Run the command line; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        sys.stderr.write(f"{err}\n")
        return EXIT_USAGE

    logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s"
            )
    try:
        COMMANDS[args.command](args)
    except ParameterError as err:
        logger.error("invalid parameter: %s", err)
        return EXIT_USAGE
    except EntropicEMDError as err:
        logger.error("%s", err)
        return EXIT_DATA
    return EXIT_OK


# =============================================================================
if __name__ == '__main__':
    sys.exit(main())
