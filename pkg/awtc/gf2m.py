"""
GF(2^b) arithmetic and the BCH syndrome columns used by pseudolinear codes.

Field elements are integers whose bit e is the coefficient of alpha^e.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from .bitlinalg import BitMatrix, BitVector, rank
from .config import settings
from .errors import DomainError, check_cap

# Set up logging
logger = logging.getLogger(__name__)

# x^b term included
PRIMITIVE_POLYNOMIALS: Dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


@lru_cache(maxsize=None)
def _power_tables(b: int, poly: int) -> Tuple[np.ndarray, np.ndarray]:
    """Antilog and log tables; raises if x does not have order 2^b - 1."""
    order = (1 << b) - 1
    exp = np.zeros(order, dtype=np.int64)
    log = np.full(1 << b, -1, dtype=np.int64)
    value = 1
    for e in range(order):
        if log[value] != -1:
            raise DomainError(
                f"polynomial {poly:#b} is not primitive (order of x is {e})"
            )
        exp[e] = value
        log[value] = e
        value <<= 1
        if (value >> b) & 1:
            value ^= poly
    if value != 1:
        raise DomainError(f"polynomial {poly:#b} is not primitive")
    return exp, log


@dataclass(frozen=True)
class Field:
    b: int
    primitive_poly: int

    def __post_init__(self):
        if self.b < 1:
            raise DomainError(f"extension degree must be >= 1, got {self.b}")
        check_cap("field degree", self.b, settings.MAX_FIELD_DEGREE)
        if self.primitive_poly.bit_length() - 1 != self.b:
            raise DomainError(
                f"polynomial {self.primitive_poly:#b} is not of degree {self.b}"
            )
        _power_tables(self.b, self.primitive_poly)

    @classmethod
    def of_degree(cls, b: int) -> "Field":
        if b not in PRIMITIVE_POLYNOMIALS:
            raise DomainError(f"no built-in primitive polynomial for degree {b}")
        return cls(b, PRIMITIVE_POLYNOMIALS[b])

    @property
    def order(self) -> int:
        """Size of the multiplicative group."""
        return (1 << self.b) - 1

    @property
    def exp_table(self) -> np.ndarray:
        return _power_tables(self.b, self.primitive_poly)[0]

    @property
    def log_table(self) -> np.ndarray:
        return _power_tables(self.b, self.primitive_poly)[1]


@dataclass(frozen=True)
class FieldElement:
    value: int


def _check(f: Field, a: FieldElement) -> None:
    if not 0 <= a.value < (1 << f.b):
        raise DomainError(f"{a.value} is not an element of GF(2^{f.b})")


def fe_add(f: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(f, a)
    _check(f, b)
    return FieldElement(a.value ^ b.value)


def fe_mul(f: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(f, a)
    _check(f, b)
    if a.value == 0 or b.value == 0:
        return FieldElement(0)
    log = f.log_table
    return FieldElement(int(f.exp_table[(log[a.value] + log[b.value]) % f.order]))


def fe_pow_alpha(f: Field, e: int) -> FieldElement:
    return FieldElement(int(f.exp_table[e % f.order]))


def element_bits(f: Field, a: FieldElement) -> BitVector:
    _check(f, a)
    return BitVector(f.b, a.value)


def bch_column(f: Field, j: int, t: int) -> BitVector:
    """Syndrome column (alpha^j, alpha^3j, ..., alpha^(2t-1)j); zero for j = 0."""
    if not 0 <= j < (1 << f.b):
        raise DomainError(f"column index {j} outside [0, 2^{f.b})")
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if j == 0:
        return BitVector.zeros(t * f.b)
    bits = 0
    for i in range(t):
        bits |= fe_pow_alpha(f, j * (2 * i + 1)).value << (i * f.b)
    return BitVector(t * f.b, bits)


def bch_blocks(f: Field, t: int) -> List[np.ndarray]:
    """The t power blocks alpha^((2i+1)j) for every index j, zero at j = 0."""
    j = np.arange(1 << f.b, dtype=np.int64)
    blocks = []
    for i in range(t):
        powers = f.exp_table[(j * (2 * i + 1)) % f.order].astype(np.int64)
        powers[0] = 0
        blocks.append(powers)
    return blocks


def bch_columns(f: Field, t: int) -> np.ndarray:
    """Packed columns for every index j in [0, 2^b), as an int64 array."""
    if t * f.b > 62:
        raise DomainError(f"columns of {t * f.b} bits do not fit a machine word")
    out = np.zeros(1 << f.b, dtype=np.int64)
    for i, block in enumerate(bch_blocks(f, t)):
        out |= block << (i * f.b)
    return out


def bch_parity_matrix(f: Field, t: int) -> BitMatrix:
    """(t*b) x (2^b - 1) matrix whose column j is bch_column(f, j, t)."""
    cols = bch_columns(f, t)[1:]
    packed = tuple(
        sum(((int(c) >> r) & 1) << j for j, c in enumerate(cols))
        for r in range(t * f.b)
    )
    return BitMatrix(t * f.b, f.order, packed)


def bch_distance_check(
    f: Field, t: int, samples: Optional[int] = None, seed: Optional[int] = None
) -> Tuple[int, int]:
    """
    Count column sets of size <= 2t that are linearly dependent.

    Exhaustive mode looks for two distinct subsets of size <= t with the
    same sum, which exists exactly when some nonempty set of <= 2t columns
    sums to zero. Sampled mode checks `samples` random 2t-subsets by rank.

    Returns:
        (violations, sets checked)
    """
    cols = [int(c) for c in bch_columns(f, t)[1:]]
    if samples is None:
        seen = {0: ()}
        violations = 0
        checked = 1
        for size in range(1, t + 1):
            for subset in itertools.combinations(range(len(cols)), size):
                acc = 0
                for j in subset:
                    acc ^= cols[j]
                checked += 1
                if acc in seen:
                    violations += 1
                    logger.warning(
                        f"GF(2^{f.b}), t={t}: columns {seen[acc]} and {subset} collide"
                    )
                else:
                    seen[acc] = subset
        return violations, checked

    rng = np.random.default_rng(seed)
    size = min(2 * t, len(cols))
    violations = 0
    for _ in range(samples):
        idx = sorted(rng.choice(len(cols), size=size, replace=False).tolist())
        sub = BitMatrix(size, t * f.b, tuple(cols[j] for j in idx))
        if rank(sub) < size:
            violations += 1
    return violations, samples
