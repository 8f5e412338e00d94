"""
Linear, coset and pseudolinear wiretap codes.

A code maps a message m (mbits) and a uniform key w (wbits) to an n-bit
codeword. The pair index of (m, w) is m << wbits | w.
"""
import itertools
import logging
from dataclasses import dataclass
from math import ceil
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .bitlinalg import (
    BitMatrix,
    BitVector,
    left_null_space,
    popcount,
    rank,
    row_space_basis,
    solve_one,
    span_table,
)
from .config import settings
from .errors import DimensionMismatchError, DomainError, PreconditionError, check_cap
from .gf2m import Field, bch_blocks, bch_column, bch_columns
from .schema import KwiseReport, NormalizationReport

# Set up logging
logger = logging.getLogger(__name__)

_POP8 = np.array([popcount(i) for i in range(256)], dtype=np.uint8)


def popcount_array(words: np.ndarray) -> np.ndarray:
    """Vectorized popcount of non-negative int64 values, as uint8."""
    a = np.ascontiguousarray(words, dtype=np.int64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a)
    counts = _POP8[a.view(np.uint8)].reshape(a.shape + (8,))
    return counts.sum(axis=-1, dtype=np.uint8)


# ---------------------------------------------------------------------------
# Code families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearCode:
    n: int
    g_m: BitMatrix
    g_w: BitMatrix

    def __post_init__(self):
        if self.g_m.cols != self.n or self.g_w.cols != self.n:
            raise DimensionMismatchError(
                f"generators have {self.g_m.cols}/{self.g_w.cols} columns, n={self.n}"
            )

    @property
    def mbits(self) -> int:
        return self.g_m.rows

    @property
    def wbits(self) -> int:
        return self.g_w.rows

    @property
    def g(self) -> BitMatrix:
        """Stacked generator [G_M; G_W]."""
        return self.g_m.vstack(self.g_w)

    @classmethod
    def from_stacked(cls, g: BitMatrix, mbits: int) -> "LinearCode":
        """Split a stacked generator: the first mbits rows are G_M."""
        g_m = BitMatrix(mbits, g.cols, g.packed[:mbits])
        return cls(g.cols, g_m, BitMatrix(g.rows - mbits, g.cols, g.packed[mbits:]))


@dataclass(frozen=True)
class CosetCode:
    n: int
    h: BitMatrix

    def __post_init__(self):
        if self.h.cols != self.n:
            raise DimensionMismatchError(f"H has {self.h.cols} columns, n={self.n}")
        if rank(self.h) != self.h.rows:
            raise PreconditionError("parity-check matrix H must have full row rank")

    @property
    def mbits(self) -> int:
        return self.h.rows


@dataclass(frozen=True)
class PseudolinearCode:
    n: int
    mbits: int
    wbits: int
    k: int
    field: Field
    g: BitMatrix
    seed: Optional[int] = None

    def __post_init__(self):
        if self.field.b != self.mbits + self.wbits:
            raise DimensionMismatchError(
                f"field degree {self.field.b} != mbits + wbits"
                f" = {self.mbits + self.wbits}"
            )
        if self.g.rows != self.ell or self.g.cols != self.n:
            raise DimensionMismatchError(
                f"G is {self.g.rows}x{self.g.cols}, expected {self.ell}x{self.n}"
            )

    @property
    def t(self) -> int:
        return ceil(self.k / 2)

    @property
    def ell(self) -> int:
        return self.t * self.field.b

    @property
    def description_bits(self) -> int:
        """Bits needed to describe the code: G alone, since h is fixed by (b, k)."""
        return self.ell * self.n


def pair_index(m: BitVector, w: BitVector) -> int:
    return (m.bits << w.length) | w.bits


# ---------------------------------------------------------------------------
# Encoders and samplers
# ---------------------------------------------------------------------------


def encode_linear(c: LinearCode, m: BitVector, w: BitVector) -> BitVector:
    return c.g_m.vecmul(m) ^ c.g_w.vecmul(w)


def encode_pseudolinear(c: PseudolinearCode, m: BitVector, w: BitVector) -> BitVector:
    if m.length != c.mbits or w.length != c.wbits:
        raise DimensionMismatchError(
            f"message/key lengths {m.length}/{w.length}, expected {c.mbits}/{c.wbits}"
        )
    return c.g.vecmul(bch_column(c.field, pair_index(m, w), c.t))


def sample_pseudolinear(
    n: int, mbits: int, wbits: int, k: int, seed: int
) -> PseudolinearCode:
    """Fixed BCH map for (b, k) plus a uniformly random generator G."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    b = mbits + wbits
    if b < 1 or b > settings.MAX_FIELD_DEGREE:
        raise DomainError(f"unsupported field degree b = {b}")
    field = Field.of_degree(b)
    ell = ceil(k / 2) * b
    rng = np.random.default_rng(seed)
    g = BitMatrix.random(ell, n, rng)
    return PseudolinearCode(n, mbits, wbits, k, field, g, seed)


def sample_linear(
    n: int, mbits: int, wbits: int, seed: int, max_attempts: int = 1000
) -> LinearCode:
    """Uniform linear code with full-rank stacked generator (rejection sampling)."""
    if mbits + wbits > n:
        raise PreconditionError(f"no full-rank {mbits + wbits}x{n} generator exists")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        g = BitMatrix.random(mbits + wbits, n, rng)
        if rank(g) == g.rows:
            return LinearCode.from_stacked(g, mbits)
    raise PreconditionError(f"no full-rank generator after {max_attempts} draws")


def sample_coset(n: int, mbits: int, seed: int) -> CosetCode:
    code = sample_linear(n, mbits, 0, seed)
    return CosetCode(n, code.g_m)


def example_code() -> LinearCode:
    """n=3 code with G_M = [1,0,0] and G_W = [0,1,1]."""
    return LinearCode(3, BitMatrix.from_rows(["100"]), BitMatrix.from_rows(["011"]))


def hamming74() -> LinearCode:
    """[7,4] Hamming code as a keyless linear code."""
    g = BitMatrix.from_rows(["1000110", "0100011", "0010111", "0001101"])
    return LinearCode(7, g, BitMatrix.zeros(0, 7))


# ---------------------------------------------------------------------------
# Coset scheme
# ---------------------------------------------------------------------------


def coset_encode(c: CosetCode, m: BitVector, seed) -> BitVector:
    """Uniform x with xH^T = m: particular solution plus random null-space element."""
    ht = c.h.transpose()
    x = solve_one(ht, m)
    if x is None:
        raise PreconditionError(f"no solution of xH^T = {m}")
    basis = left_null_space(ht)
    rng = np.random.default_rng(seed)
    for row, pick in zip(basis.packed, rng.integers(0, 2, size=basis.rows)):
        if pick:
            x = x ^ BitVector(c.n, row)
    return x


def coset_decode(c: CosetCode, x: BitVector) -> BitVector:
    return c.h.transpose().vecmul(x)


def coset_as_linear(c: CosetCode) -> LinearCode:
    """
    The coset scheme as a linear code.

    G_M maps e_i to a word of its coset and G_W spans ker H^T.
    """
    ht = c.h.transpose()
    rows = []
    for i in range(c.mbits):
        x = solve_one(ht, BitVector(c.mbits, 1 << i))
        rows.append(x.bits)
    g_m = BitMatrix(c.mbits, c.n, tuple(rows))
    return LinearCode(c.n, g_m, left_null_space(ht))


def normalize_linear(c: LinearCode) -> Union[LinearCode, NormalizationReport]:
    """
    Bring a linear code to full-rank form.

    A rank-deficient G_W is replaced by a basis of its row space, which
    keeps every per-message codeword distribution. If the stacked G is
    still rank-deficient, two messages share a codeword coset and the
    maximum decoding error is at least 1/2; that is reported instead.
    """
    rank_w = rank(c.g_w)
    code = c
    if rank_w < c.wbits:
        logger.info(f"key generator has rank {rank_w} < {c.wbits}; reducing key length")
        code = LinearCode(c.n, c.g_m, row_space_basis(c.g_w))
    rank_g = rank(code.g)
    if rank_g < code.mbits + code.wbits:
        return NormalizationReport(
            rank_g=rank_g,
            rank_g_w=rank_w,
            mbits=code.mbits,
            wbits=code.wbits,
            reason="stacked generator is rank-deficient: some two messages are "
            "indistinguishable, so the maximum error probability is at least 1/2",
        )
    return code


# ---------------------------------------------------------------------------
# Codebooks
# ---------------------------------------------------------------------------


def _word_bits(x: Union[int, str]) -> int:
    return BitVector.from_string(x).bits if isinstance(x, str) else int(x)


@dataclass(frozen=True, eq=False)
class Codebook:
    """Every codeword, words[m, w], packed with bit j = coordinate j+1."""

    n: int
    mbits: int
    wbits: int
    words: np.ndarray

    def __post_init__(self):
        if self.words.shape != (1 << self.mbits, 1 << self.wbits):
            raise DimensionMismatchError(
                f"codebook array {self.words.shape} for"
                f" mbits={self.mbits}, wbits={self.wbits}"
            )
        if self.n > 62:
            raise DomainError(f"codewords of {self.n} bits do not fit a machine word")

    @classmethod
    def from_words(
        cls, n: int, words: Sequence[Sequence[Union[int, str]]]
    ) -> "Codebook":
        """words[m][w]; entries are packed ints or bit strings."""
        table = [[_word_bits(x) for x in row] for row in words]
        mbits = max(len(table) - 1, 0).bit_length()
        wbits = max(len(table[0]) - 1, 0).bit_length()
        return cls(n, mbits, wbits, np.array(table, dtype=np.int64))

    def codeword(self, m: int, w: int) -> BitVector:
        return BitVector(self.n, int(self.words[m, w]))

    def entries(self):
        for m in range(self.words.shape[0]):
            for w in range(self.words.shape[1]):
                yield m, w, self.codeword(m, w)


def _check_codebook_size(mbits: int, wbits: int) -> None:
    check_cap(
        "codebook bits (mbits + wbits)", mbits + wbits, settings.MAX_CODEBOOK_BITS
    )


def linear_codebook(c: LinearCode) -> Codebook:
    _check_codebook_size(c.mbits, c.wbits)
    mt = span_table(c.g_m.packed)
    wt = span_table(c.g_w.packed)
    return Codebook(c.n, c.mbits, c.wbits, mt[:, None] ^ wt[None, :])


def pseudolinear_codebook(c: PseudolinearCode) -> Codebook:
    _check_codebook_size(c.mbits, c.wbits)
    b = c.field.b
    words = np.zeros(1 << b, dtype=np.int64)
    # G row i*b + r pairs with bit r of block i
    for i, block in enumerate(bch_blocks(c.field, c.t)):
        for r in range(b):
            row = np.int64(c.g.packed[i * b + r])
            words ^= np.where((block >> r) & 1, row, np.int64(0))
    return Codebook(c.n, c.mbits, c.wbits, words.reshape(1 << c.mbits, 1 << c.wbits))


def coset_codebook(c: CosetCode) -> Codebook:
    return linear_codebook(coset_as_linear(c))


def codebook_of(code: Union[LinearCode, CosetCode, PseudolinearCode]) -> Codebook:
    if isinstance(code, LinearCode):
        return linear_codebook(code)
    if isinstance(code, CosetCode):
        return coset_codebook(code)
    return pseudolinear_codebook(code)


# ---------------------------------------------------------------------------
# Decoding and distance
# ---------------------------------------------------------------------------


def min_distance_decode(codebook: Codebook, y: BitVector) -> Optional[Tuple[int, int]]:
    """Nearest codeword's (m, w); None when the nearest words disagree on m."""
    if y.length != codebook.n:
        raise DimensionMismatchError(f"received word length {y.length}, n={codebook.n}")
    dist = popcount_array(codebook.words ^ np.int64(y.bits))
    ms, ws = np.nonzero(dist == dist.min())
    if np.any(ms != ms[0]):
        return None
    return int(ms[0]), int(ws[0])


def code_min_distance(codebook: Codebook) -> int:
    """Minimum Hamming distance over distinct (m, w) entries."""
    flat = codebook.words.ravel()
    if flat.size < 2:
        raise DomainError("minimum distance needs at least 2 codewords")
    check_cap("pairwise distance codewords", flat.size, settings.MAX_PAIRWISE_WORDS)
    best = codebook.n
    for i in range(flat.size - 1):
        best = min(best, int(popcount_array(flat[i + 1 :] ^ flat[i]).min()))
        if best == 0:
            break
    return best


def linear_min_weight(c: LinearCode) -> int:
    """Minimum weight over codewords of nonzero (m, w); 0 when G is rank-deficient."""
    words = linear_codebook(c).words.ravel()[1:]
    if words.size == 0:
        raise DomainError("minimum weight needs a nonzero generator row")
    return int(popcount_array(words).min())


def dual_distance(h: BitMatrix) -> Optional[int]:
    """Minimum weight of a nonzero vector in rowspace(h), None for the zero space."""
    basis = row_space_basis(h)
    if basis.rows == 0:
        return None
    check_cap("row-space enumeration bits", basis.rows, settings.MAX_CODEBOOK_BITS)
    return int(popcount_array(span_table(basis.packed)[1:]).min())


# ---------------------------------------------------------------------------
# k-wise independence by generator enumeration
# ---------------------------------------------------------------------------


def tuple_uniformity(selectors: Sequence[int], ell: int, n: int) -> bool:
    """
    Is (h_1 G, ..., h_k G) exactly uniform over all 2^(ell*n) generators G?

    selectors are packed ell-bit row selectors h_i.
    """
    check_cap("generator bits (ell * n)", ell * n, settings.MAX_GENERATOR_BITS)
    k = len(selectors)
    if n * k > ell * n:
        return False
    g = np.arange(1 << (ell * n), dtype=np.int64)
    mask = np.int64((1 << n) - 1)
    rows = [(g >> np.int64(r * n)) & mask for r in range(ell)]
    key = np.zeros_like(g)
    for i, h in enumerate(selectors):
        x = np.zeros_like(g)
        for r in range(ell):
            if (h >> r) & 1:
                x ^= rows[r]
        key |= x << np.int64(i * n)
    counts = np.bincount(key, minlength=1 << (n * k))
    return bool(np.all(counts == counts[0]))


def kwise_check(
    family: str, b: int, k: int, n: int, max_tuples: Optional[int] = None
) -> KwiseReport:
    """
    Exhaustive-generator uniformity of k codewords at distinct nonzero indices.

    family "pseudolinear" selects rows through the BCH map, "linear" uses
    the raw index bits, which makes x(i ^ j) = x(i) ^ x(j) and breaks
    3-wise independence.
    """
    if family == "pseudolinear":
        field = Field.of_degree(b)
        t = ceil(k / 2)
        ell = t * b
        selectors: List[int] = [int(c) for c in bch_columns(field, t)]
    elif family == "linear":
        t = 0
        ell = b
        selectors = list(range(1 << b))
    else:
        raise DomainError(f"unknown code family {family!r}")
    if not 1 <= k <= (1 << b) - 1:
        raise DomainError(
            f"k={k} distinct nonzero indices do not exist for b={b}"
            f" (there are {(1 << b) - 1})"
        )
    tuples = itertools.combinations(range(1, 1 << b), k)
    checked = violations = 0
    for idx in tuples:
        if max_tuples is not None and checked >= max_tuples:
            break
        checked += 1
        if not tuple_uniformity([selectors[j] for j in idx], ell, n):
            violations += 1
    logger.info(
        f"{family} family b={b} k={k} n={n}: {violations}/{checked} non-uniform tuples"
    )
    return KwiseReport(
        family=family,
        b=b,
        t=t,
        k=k,
        n=n,
        ell=ell,
        tuples_checked=checked,
        violations=violations,
    )
