import time

import pytest

from helpers import corpus_specs
from subknap.exact import robustness_sweep
from subknap.generate import generate_instance


@pytest.fixture(scope="session")
def corpus():
    """The 200-instance seeded corpus: (spec, instance) pairs."""
    return [(spec, generate_instance(spec)) for spec in corpus_specs()]


@pytest.fixture(scope="session")
def corpus_sweeps(corpus):
    """Robustness sweeps for the whole corpus plus the wall time to build them."""
    t0 = time.perf_counter()
    records = [(spec, inst, robustness_sweep(inst)) for spec, inst in corpus]
    elapsed = time.perf_counter() - t0
    return records, elapsed
