import numpy as np
import pytest

from entropicemd import IntermittencyScenario, make_intermittent_signal
from entropicemd import SiftConfig, DetectorConfig, decompose, repair


@pytest.fixture(scope="session")
def canonical_scenario():
    """1 Hz carrier, 20 Hz burst of amplitude 0.5 on samples [2000, 3000)."""
    return IntermittencyScenario()


@pytest.fixture(scope="session")
def canonical_signal(canonical_scenario):
    return make_intermittent_signal(canonical_scenario, seed=0)


@pytest.fixture(scope="session")
def canonical_carrier(canonical_scenario):
    t = np.arange(canonical_scenario.length) * canonical_scenario.sampling_period
    return np.sin(2 * np.pi * canonical_scenario.carrier_frequency * t)


@pytest.fixture(scope="session")
def canonical_report(canonical_signal):
    signal, _ = canonical_signal
    return repair(signal, DetectorConfig(), SiftConfig())


@pytest.fixture(scope="session")
def canonical_plain(canonical_signal):
    signal, _ = canonical_signal
    return decompose(signal, SiftConfig())


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
