import numpy as np
import pytest

from phasebell import fock_oracle, states


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def oracle_states():
    """Fock-basis reference states shared across the suite, keyed by a tag.

    Cutoffs are generous enough for displaced-operator traces at the random
    point scales the tests draw (|delta| mostly below 1.5).
    """
    return {
        "w": (states.SinglePhotonW(0.7), fock_oracle.build_state(states.SinglePhotonW(0.7), 25)),
        "w1": (states.SinglePhotonW(1.0), fock_oracle.build_state(states.SinglePhotonW(1.0), 25)),
        "sv": (states.SqueezedVacuum3(0.4), fock_oracle.build_state(states.SqueezedVacuum3(0.4), 26)),
        "ecs": (states.GhzEcs(0.6), fock_oracle.build_state(states.GhzEcs(0.6), 28)),
    }
