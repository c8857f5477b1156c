import random

import pytest

from symbench.harness import load_bank


@pytest.fixture(scope="session")
def ctx():
    """Bank context over the bundled demo lexicon (no top-n subsets)."""
    return load_bank()


@pytest.fixture(scope="session")
def bank(ctx):
    return ctx.sets


@pytest.fixture(scope="session")
def lex(ctx):
    return ctx.lexicon


@pytest.fixture
def rng():
    return random.Random(1234)
