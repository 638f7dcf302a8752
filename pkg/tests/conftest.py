import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from pctfkit.io import load_corpus
from pctfkit.monoid import PctfMonoid

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pctf(n, gens, ideal=()):
    return PctfMonoid.of(n, [tuple(g) for g in gens], [tuple(g) for g in ideal])


@pytest.fixture(scope="session")
def monoids():
    return load_corpus("monoids")


@pytest.fixture(scope="session")
def fans():
    return load_corpus("fans")
