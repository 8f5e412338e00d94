"""
Shared test fixtures.

Settings are read once at import of awtc.config; tests that need other
caps patch the `settings` singleton with monkeypatch instead of setting
AWTC_* environment variables.
"""
import numpy as np
import pytest

from awtc.bitlinalg import BitMatrix, rank
from awtc.channel import Dmc
from awtc.codes import LinearCode, example_code, hamming74, linear_codebook
from awtc.config import settings

# ---------------------------------------------------------------------------
# Codes
# ---------------------------------------------------------------------------


@pytest.fixture
def n3_code() -> LinearCode:
    """n=3 code with G_M = [1,0,0] and G_W = [0,1,1]."""
    return example_code()


@pytest.fixture
def n3_codebook(n3_code):
    return linear_codebook(n3_code)


@pytest.fixture
def hamming():
    return hamming74()


@pytest.fixture
def hamming_codebook(hamming):
    return linear_codebook(hamming)


def _random_full_rank_code(
    rng: np.random.Generator, n: int, mbits: int, wbits: int
) -> LinearCode:
    while True:
        g = BitMatrix.random(mbits + wbits, n, rng)
        if rank(g) == mbits + wbits:
            return LinearCode.from_stacked(g, mbits)


@pytest.fixture
def make_code():
    """Factory for full-rank linear codes drawn from a caller-supplied rng."""
    return _random_full_rank_code


# ---------------------------------------------------------------------------
# Channels and randomness
# ---------------------------------------------------------------------------


@pytest.fixture
def bsc03() -> Dmc:
    return Dmc.bsc(0.3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def small_caps(monkeypatch):
    """Tiny enumeration caps for cap-violation tests."""
    monkeypatch.setattr(settings, "MAX_READ_SETS", 2)
    monkeypatch.setattr(settings, "MAX_FLIP_SETS", 3)
    return settings
