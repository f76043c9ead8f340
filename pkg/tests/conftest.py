import numpy as np
import pytest

from hqmaps.harmonic import build_corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def corpus_by_uid(corpus):
    return {f.uid: f for f in corpus}


@pytest.fixture(autouse=True)
def _fixed_numpy_seed():
    # legacy global seed only; tests that need streams build their own Generator
    np.random.seed(0)
