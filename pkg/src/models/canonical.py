#!/usr/bin/env python3

"""This module provides an example of how to use the `entropicemd` package
on the canonical intermittency scenario: a 1 Hz carrier of unit amplitude
with a 20 Hz burst of amplitude 0.5 on samples [2000, 3000), 6000 samples
at 1 ms.

For every noise seed the signal is repaired and scored against the
generator's ground truth:

* `onset_error`, `offset_error`: distance (samples) of the detected segment
  from the true burst window;
* `burst_corr`: correlation of the intermittent component with the true
  burst on the burst support;
* `carrier_corr`: correlation of IMF1 of the repaired series with the
  carrier, next to `plain_corr`, the same for plain EMD of the signal;
* `repaired_io`, `plain_io`: orthogonality index of the two decompositions;
* `second_pass`: number of segments found when the repaired series is
  repaired again (zero if the intermittency is gone).

Scores are averaged over the seeds with bootstrap error bars.
"""


from .._generic import Resampler, fmt_value_err, correlation
from .._signalcore import IntermittencyScenario, make_intermittent_signal
from ..util.emd import SiftConfig, decompose, orthogonality_index
from ..util.pentropy import PeConfig
from ..util.mixfix import DetectorConfig, repair, detect_segments


# =============================================================================
def score(scenario, seed=0, detector=DetectorConfig(), sift=SiftConfig()):
    """Repair one realization of `scenario` and return its scores."""
    signal, truth = make_intermittent_signal(scenario, seed=seed)
    report = repair(signal, detector, sift)
    onset, offset = scenario.burst_onset, scenario.burst_offset
    burst = slice(onset, offset)
    carrier = signal.samples - truth.samples

    scores = dict(n_segments=len(report.segments))
    if report.segments:
        seg = max(report.segments, key=len)
        scores['onset_error'] = abs(seg.start - onset)
        scores['offset_error'] = abs(seg.end - offset)
    scores['burst_corr'] = correlation(
            report.intermittent_component.samples[burst], truth.samples[burst]
            )

    plain = decompose(signal, sift)
    final = report.final_repaired_decomposition
    scores['carrier_corr'] = _imf1_correlation(final, carrier)
    scores['plain_corr'] = _imf1_correlation(plain, carrier)
    scores['repaired_io'] = orthogonality_index(final)
    scores['plain_io'] = orthogonality_index(plain)

    second, _, _ = detect_segments(report.repaired_series, detector)
    scores['second_pass'] = len(second)
    return scores


def _imf1_correlation(decomposition, carrier):
    if decomposition.n_imfs == 0:
        return 0.
    return correlation(decomposition.imfs[0].samples, carrier)


# =============================================================================
def main(*, noise_stddev=0., n_seeds=1, tau=120, m=3, use_gradient=True,
        n_resamples=100):

    scenario = IntermittencyScenario(noise_stddev=noise_stddev)
    pe_config = PeConfig(window_length=tau, order=m)
    detector = DetectorConfig(pe_config=pe_config, use_gradient=use_gradient)

    rows = [score(scenario, seed=seed, detector=detector)
            for seed in range(n_seeds)]

    resampler = Resampler(seed=1)
    keys = dict.fromkeys(key for row in rows for key in row)
    for key in keys:
        values = [row[key] for row in rows if key in row]
        if len(values) > 1:
            mean, std = resampler.mean_std(values, n_resamples=n_resamples)
            print(f"{key:>14s} = {fmt_value_err(mean, std)}")
        else:
            print(f"{key:>14s} = {values[0]:g}")

    return rows


# =============================================================================
if __name__ == '__main__':
    from argparse import ArgumentParser
    parser = ArgumentParser()
    add = parser.add_argument

    add("--noise_stddev", dest="noise_stddev", type=float)
    add("--n_seeds", dest="n_seeds", type=int)
    add("--tau", dest="tau", type=int)
    add("--m", dest="m", type=int)
    add("--no_gradient", dest="use_gradient", action="store_false",
        default=None)

    args = vars(parser.parse_args())
    none_keys = [key for key, value in args.items() if value is None]
    [args.pop(key) for key in none_keys]
    main(**args)

    # usage: python -m entropicemd.models.canonical --noise_stddev 0.01 --n_seeds 8
