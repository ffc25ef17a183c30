import functools

import pytest
from hypothesis import settings

from dampwave import Problem, compute_spectrum

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def _spectrum(a, b, n_max, method):
    return compute_spectrum(Problem.from_text(a, b), n_max, method)


@pytest.fixture(scope="session")
def spectrum():
    """Cached ``spectrum(a, b="0", n_max=20, method="shooting")``."""

    def get(a, b="0", n_max=20, method="shooting"):
        return _spectrum(a, b, n_max, method)

    return get
