import random

import pytest

import corpus


@pytest.fixture(scope="session")
def fixtures():
    return corpus.fixture_germs()


@pytest.fixture(scope="session")
def random_admissible_corpus():
    rng = random.Random(20240811)
    return corpus.generate(rng, 60, corpus.is_admissible, allow_blowups=True)


@pytest.fixture(scope="session")
def random_nlc_corpus():
    rng = random.Random(60290117)
    return corpus.generate(rng, 60, corpus.is_not_log_canonical)
