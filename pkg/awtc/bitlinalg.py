"""
Exact GF(2) linear algebra on packed bit rows.

Rows and vectors are stored as Python integers where bit j holds
coordinate j+1. Column and coordinate indices are 1-based at the API
surface and 0-based inside this module.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import settings
from .errors import DimensionMismatchError, DomainError, check_cap

# Set up logging
logger = logging.getLogger(__name__)


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int

    def __post_init__(self):
        if self.length < 0:
            raise DomainError(f"negative length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise DomainError(f"bits do not fit in length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitVector":
        return cls(length, value)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """Parse "101": character i is coordinate i+1."""
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise DomainError(f"not a bit string: {text!r}")
        bits = sum(1 << i for i, ch in enumerate(text) if ch == "1")
        return cls(len(text), bits)

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "BitVector":
        values = [int(v) for v in values]
        if any(v not in (0, 1) for v in values):
            raise DomainError("bit list holds values other than 0/1")
        return cls(len(values), sum(v << i for i, v in enumerate(values)))

    def to_string(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.length))

    def to_list(self) -> List[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def weight(self) -> int:
        return popcount(self.bits)

    def concat(self, other: "BitVector") -> "BitVector":
        return BitVector(
            self.length + other.length, self.bits | (other.bits << self.length)
        )

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self):
        return iter(self.to_list())

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise DimensionMismatchError(f"lengths {self.length} and {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    packed: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DomainError("negative matrix dimension")
        if len(self.packed) != self.rows:
            raise DimensionMismatchError(
                f"{len(self.packed)} packed rows for a {self.rows}-row matrix"
            )
        if any(r < 0 or r >> self.cols for r in self.packed):
            raise DimensionMismatchError(f"row wider than {self.cols} columns")

    # -----------------------------------------------------------------------
    # Constructors
    # -----------------------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(size, size, tuple(1 << i for i in range(size)))

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Union[str, Sequence[int], BitVector]],
        cols: Optional[int] = None,
    ) -> "BitMatrix":
        """Build from bit strings, 0/1 lists or BitVectors."""
        vectors = []
        for row in rows:
            if isinstance(row, BitVector):
                vectors.append(row)
            elif isinstance(row, str):
                vectors.append(BitVector.from_string(row))
            else:
                vectors.append(BitVector.from_list(row))
        if cols is None:
            if not vectors:
                raise DomainError("column count needed for an empty matrix")
            cols = vectors[0].length
        if any(v.length != cols for v in vectors):
            raise DimensionMismatchError("ragged rows")
        return cls(len(vectors), cols, tuple(v.bits for v in vectors))

    @classmethod
    def from_array(cls, array) -> "BitMatrix":
        a = np.asarray(array)
        if a.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-D array, got {a.ndim}-D")
        if np.any((a != 0) & (a != 1)):
            raise DomainError("array holds values other than 0/1")
        weights = [1 << j for j in range(a.shape[1])]
        packed = tuple(
            sum(w for w, bit in zip(weights, row) if bit) for row in a.tolist()
        )
        return cls(a.shape[0], a.shape[1], packed)

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator) -> "BitMatrix":
        """Fair bits from rng, row-major."""
        return cls.from_array(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))

    # -----------------------------------------------------------------------
    # Views
    # -----------------------------------------------------------------------

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.packed):
            for j in range(self.cols):
                out[i, j] = (r >> j) & 1
        return out

    def to_strings(self) -> List[str]:
        return [BitVector(self.cols, r).to_string() for r in self.packed]

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.packed[i])

    def column(self, j: int) -> int:
        """Column j (0-based) packed with bit i = row i."""
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.packed))

    def columns(self) -> List[int]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, tuple(self.columns()))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise DimensionMismatchError(f"column counts {self.cols} and {other.cols}")
        return BitMatrix(self.rows + other.rows, self.cols, self.packed + other.packed)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise DimensionMismatchError(f"row counts {self.rows} and {other.rows}")
        packed = tuple(a | (b << self.cols) for a, b in zip(self.packed, other.packed))
        return BitMatrix(self.rows, self.cols + other.cols, packed)

    def vecmul(self, v: BitVector) -> BitVector:
        """Row vector times matrix: v·M."""
        if v.length != self.rows:
            raise DimensionMismatchError(
                f"vector length {v.length} vs {self.rows} rows"
            )
        acc = 0
        for i, r in enumerate(self.packed):
            if (v.bits >> i) & 1:
                acc ^= r
        return BitVector(self.cols, acc)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        return BitMatrix(
            self.rows,
            other.cols,
            tuple(other.vecmul(BitVector(self.cols, r)).bits for r in self.packed),
        )

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Echelon:
    """Reduced row-echelon form with the row combinations that produced it."""

    reduced: Tuple[int, ...]
    combos: Tuple[int, ...]
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def row_reduce(m: BitMatrix) -> Echelon:
    """Deterministic Gauss-Jordan: leftmost pivot column, topmost row."""
    work = list(m.packed)
    combo = [1 << i for i in range(m.rows)]
    pivots = []
    r = 0
    for col in range(m.cols):
        if r == len(work):
            break
        bit = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        combo[r], combo[pivot] = combo[pivot], combo[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
                combo[i] ^= combo[r]
        pivots.append(col)
        r += 1
    return Echelon(tuple(work), tuple(combo), tuple(pivots))


def rank(m: BitMatrix) -> int:
    return row_reduce(m).rank


def nullity(m: BitMatrix) -> int:
    """Dimension of the null space of v -> vM."""
    return m.rows - rank(m)


def row_space_basis(m: BitMatrix) -> BitMatrix:
    ech = row_reduce(m)
    return BitMatrix(ech.rank, m.cols, ech.reduced[: ech.rank])


def left_null_space(m: BitMatrix) -> BitMatrix:
    """Basis (as rows) of {v : vM = 0}."""
    ech = row_reduce(m)
    return BitMatrix(m.rows - ech.rank, m.rows, ech.combos[ech.rank :])


def _indices(s) -> Tuple[int, ...]:
    return tuple(getattr(s, "indices", s))


def select_columns(m: BitMatrix, s) -> BitMatrix:
    """Submatrix on the 1-based, strictly increasing columns of s."""
    idx = _indices(s)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise DomainError(f"column indices not strictly increasing: {idx}")
    if idx and (idx[0] < 1 or idx[-1] > m.cols):
        raise DomainError(f"column index out of range 1..{m.cols}: {idx}")
    packed = tuple(
        sum(((r >> (j - 1)) & 1) << pos for pos, j in enumerate(idx)) for r in m.packed
    )
    return BitMatrix(m.rows, len(idx), packed)


def solve_one(a: BitMatrix, b: BitVector) -> Optional[BitVector]:
    """Some v with vA = b, or None when b is outside the row space of A."""
    if b.length != a.cols:
        raise DimensionMismatchError(
            f"right-hand side length {b.length} vs {a.cols} columns"
        )
    ech = row_reduce(a)
    rem, v = b.bits, 0
    for i, col in enumerate(ech.pivots):
        if (rem >> col) & 1:
            rem ^= ech.reduced[i]
            v ^= ech.combos[i]
    if rem:
        return None
    return BitVector(a.rows, v)


def count_solutions(a: BitMatrix, b: BitVector) -> int:
    if solve_one(a, b) is None:
        return 0
    return 2 ** nullity(a)


def min_dependent_columns(m: BitMatrix, budget: int) -> Optional[Tuple[int, ...]]:
    """
    Smallest linearly dependent column set of size at most budget.

    Subsets are tried by increasing size, lexicographically within a size,
    so the first hit is both minimal and reproducible. Returns 1-based
    indices or None.
    """
    if budget < 0 or budget > m.cols:
        raise DomainError(f"budget {budget} outside 0..{m.cols}")
    check_cap("dependent-column search columns", m.cols, settings.MAX_DEPENDENT_COLUMNS)
    check_cap("dependent-column search budget", budget, settings.MAX_DEPENDENT_BUDGET)
    cols = m.columns()
    for size in range(1, budget + 1):
        for subset in itertools.combinations(range(m.cols), size):
            if reduce(xor, (cols[j] for j in subset), 0) == 0:
                return tuple(j + 1 for j in subset)
    return None


def dependent_column_check(m: BitMatrix, idx: Sequence[int]) -> bool:
    """True when the 1-based columns idx are nonempty and sum to zero."""
    if not idx:
        return False
    return reduce(xor, (m.column(j - 1) for j in idx), 0) == 0


def independent_columns(m: BitMatrix, count: int) -> Optional[Tuple[int, ...]]:
    """Greedy leftmost set of count linearly independent columns (1-based)."""
    basis = {}
    chosen = []
    for j, col in enumerate(m.columns()):
        if len(chosen) == count:
            break
        v = col
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                chosen.append(j + 1)
                break
            v ^= basis[top]
    if len(chosen) < count:
        return None
    return tuple(chosen)


def span_table(rows: Sequence[int]) -> np.ndarray:
    """All 2^len(rows) XOR combinations; entry i combines rows where bit i is set."""
    table = np.zeros(1, dtype=np.int64)
    for r in rows:
        table = np.concatenate([table, table ^ np.int64(r)])
    return table
