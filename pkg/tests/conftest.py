import numpy as np
import pytest
from hypothesis import strategies as st

from meanclass.signals import TrigPoly

freqs = st.floats(-5.0, 5.0, allow_nan=False)
amps = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)
trigpolys = st.lists(st.tuples(freqs, amps), min_size=1, max_size=5).map(TrigPoly)
steps = st.floats(0.01, 5.0)


def random_trigpoly(rng: np.random.Generator, max_terms: int = 5) -> TrigPoly:
    n = int(rng.integers(1, max_terms + 1))
    w = rng.uniform(-5, 5, n)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    return TrigPoly(zip(w, a))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def sup_diff(f, g, window=(0.0, 10.0), n=2001):
    t = np.linspace(*window, n)
    return float(np.max(np.abs(f(t) - g(t))))
