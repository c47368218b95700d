import math

import pytest

from entropicemd import IntermittencyScenario
from entropicemd.models.canonical import score, main


SHORT = IntermittencyScenario(length=3000, burst_onset=1000, burst_offset=1500)


def test_score_of_a_short_scenario():
    scores = score(SHORT, seed=0)
    assert scores['n_segments'] >= 1
    assert scores['onset_error'] < 2 * 120
    assert scores['burst_corr'] > 0.5
    assert math.isfinite(scores['plain_io'])
    assert isinstance(scores['second_pass'], int)


def test_score_without_a_burst():
    scores = score(SHORT.replace(burst_amplitude=0.), seed=0)
    assert scores['n_segments'] == 0
    assert 'onset_error' not in scores
    assert scores['carrier_corr'] == pytest.approx(scores['plain_corr'])


def test_main_prints_every_score(capsys):
    rows = main(n_seeds=1)
    out = capsys.readouterr().out
    for key in rows[0]:
        assert key in out
