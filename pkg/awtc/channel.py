"""
Adversary actions on a codeword (read sets, flip sets) and discrete
memoryless channels.
"""
import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence, Tuple

import numpy as np

from .bitlinalg import BitVector
from .config import settings
from .errors import DimensionMismatchError, DomainError, check_cap

# Set up logging
logger = logging.getLogger(__name__)


def _validate_indices(n: int, indices: Tuple[int, ...]) -> None:
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise DomainError(f"indices must be strictly increasing: {indices}")
    if indices and (indices[0] < 1 or indices[-1] > n):
        raise DomainError(f"index out of range 1..{n}: {indices}")


@dataclass(frozen=True)
class ReadSet:
    n: int
    indices: Tuple[int, ...]

    def __post_init__(self):
        _validate_indices(self.n, self.indices)

    @classmethod
    def from_indices(cls, n: int, indices: Sequence[int]) -> "ReadSet":
        return cls(n, tuple(sorted(int(i) for i in indices)))

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class FlipSet:
    n: int
    indices: Tuple[int, ...]
    budget: int

    def __post_init__(self):
        _validate_indices(self.n, self.indices)
        if len(self.indices) > self.budget:
            raise DomainError(
                f"{len(self.indices)} flips exceed budget pn={self.budget}"
            )

    @classmethod
    def from_indices(cls, n: int, indices: Sequence[int], budget: int) -> "FlipSet":
        return cls(n, tuple(sorted(int(i) for i in indices)), budget)

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.indices)


def observe(x: BitVector, s: ReadSet) -> BitVector:
    if s.n != x.length:
        raise DimensionMismatchError(
            f"read set over n={s.n}, codeword length {x.length}"
        )
    bits = sum(((x.bits >> (i - 1)) & 1) << pos for pos, i in enumerate(s.indices))
    return BitVector(s.size, bits)


def apply_flips(x: BitVector, f: FlipSet) -> BitVector:
    if f.n != x.length:
        raise DimensionMismatchError(
            f"flip set over n={f.n}, codeword length {x.length}"
        )
    return BitVector(x.length, x.bits ^ f.mask)


class ReadSetStream:
    """All rn-subsets of [n] in lexicographic order; iterable any number of times."""

    def __init__(self, n: int, rn: int):
        if not 0 <= rn <= n:
            raise DomainError(f"rn={rn} outside 0..{n}")
        self.n = n
        self.rn = rn

    def __len__(self) -> int:
        return comb(self.n, self.rn)

    def __iter__(self) -> Iterator[ReadSet]:
        for idx in itertools.combinations(range(1, self.n + 1), self.rn):
            yield ReadSet(self.n, idx)

    def shard(self, index: int, count: int) -> Iterator[ReadSet]:
        """Every count-th set starting at index, for splitting across workers."""
        return itertools.islice(iter(self), index, None, count)


def enumerate_read_sets(n: int, rn: int) -> ReadSetStream:
    return ReadSetStream(n, rn)


def random_read_set(n: int, rn: int, rng: np.random.Generator) -> ReadSet:
    picks = rng.choice(n, size=rn, replace=False) + 1
    return ReadSet.from_indices(n, picks.tolist())


def enumerate_flip_sets(n: int, pn: int) -> Iterator[FlipSet]:
    """Every flip set of size 0..pn, smallest first."""
    total = sum(comb(n, s) for s in range(pn + 1))
    check_cap("flip sets", total, settings.MAX_FLIP_SETS)
    for size in range(pn + 1):
        for idx in itertools.combinations(range(1, n + 1), size):
            yield FlipSet(n, idx, pn)


# ---------------------------------------------------------------------------
# Discrete memoryless channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Dmc:
    """Row-stochastic transition matrix Q[u, v]."""

    matrix: np.ndarray

    def __post_init__(self):
        q = np.array(self.matrix, dtype=float)
        if q.ndim != 2 or q.size == 0:
            raise DomainError("channel matrix must be a nonempty 2-D array")
        if np.any(q < 0) or np.any(np.abs(q.sum(axis=1) - 1.0) > settings.PROB_TOL):
            raise DomainError("channel matrix rows must be probability vectors")
        q.setflags(write=False)
        object.__setattr__(self, "matrix", q)

    @classmethod
    def bsc(cls, p: float) -> "Dmc":
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"crossover probability {p} outside [0, 1]")
        return cls(np.array([[1.0 - p, p], [p, 1.0 - p]]))

    @classmethod
    def identity(cls, size: int) -> "Dmc":
        return cls(np.eye(size))

    @property
    def in_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def out_size(self) -> int:
        return self.matrix.shape[1]

    def describe(self) -> str:
        return f"dmc({self.in_size}x{self.out_size})"


def _symbols(seq: Sequence[int], size: int, what: str) -> np.ndarray:
    a = np.asarray(seq, dtype=np.int64).reshape(-1)
    if np.any((a < 0) | (a >= size)):
        raise DomainError(f"{what} symbol outside alphabet of size {size}")
    return a


def dmc_product_likelihood(ch: Dmc, u: Sequence[int], v: Sequence[int]) -> float:
    ua = _symbols(u, ch.in_size, "input")
    va = _symbols(v, ch.out_size, "output")
    if ua.size != va.size:
        raise DimensionMismatchError(f"input length {ua.size}, output length {va.size}")
    return float(np.prod(ch.matrix[ua, va]))


def dmc_sample(ch: Dmc, u: Sequence[int], seed) -> np.ndarray:
    """One draw of the output sequence for input u."""
    ua = _symbols(u, ch.in_size, "input")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(ch.matrix, axis=1)[ua]
    draws = rng.random(ua.size)
    v = (draws[:, None] >= cdf).sum(axis=1)
    return np.minimum(v, ch.out_size - 1)
