"""
Decoding error of wiretap codebooks under adversaries that flip up to pn
bits, with minimum-distance decoding.

The worst case over randomized, observation-adaptive adversaries is not
searchable; each strategy class below gives a lower bound on it, and
reports name the strategy that produced them.
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import tasks
from .bitlinalg import BitVector
from .channel import FlipSet, enumerate_flip_sets, observe, random_read_set
from .codes import (
    Codebook,
    min_distance_decode,
    popcount_array,
    pseudolinear_codebook,
    sample_pseudolinear,
)
from .config import settings
from .errors import DomainError
from .leakage import sem_leakage
from .models import AdversaryKind, SearchMode
from .schema import AdversaryStrategy, ReliabilityReport, Theorem2Report, Theorem2Row

# Set up logging
logger = logging.getLogger(__name__)


def _decode_batch(codebook: Codebook, received: np.ndarray) -> np.ndarray:
    """Decoded message per received word, -1 on a tie between messages."""
    flat = codebook.words.ravel()
    keys = codebook.words.shape[1]
    owner = np.arange(flat.size) // keys
    out = np.empty(received.size, dtype=np.int64)
    # received x codebook distance table stays within DECODE_BATCH_ELEMENTS
    batch = max(1, settings.DECODE_BATCH_ELEMENTS // flat.size)
    for start in range(0, received.size, batch):
        ys = received[start : start + batch]
        dist = popcount_array(ys[:, None] ^ flat[None, :])
        hits = dist == dist.min(axis=1, keepdims=True)
        first = owner[np.argmax(hits, axis=1)]
        tie = np.any(hits & (owner[None, :] != first[:, None]), axis=1)
        out[start : start + ys.size] = np.where(tie, -1, first)
    return out


def decode_error_under(codebook: Codebook, m: int, w: int, flips: FlipSet) -> bool:
    """Does min-distance decoding miss m after the flips hit x(m, w)?"""
    y = BitVector(codebook.n, int(codebook.words[m, w]) ^ flips.mask)
    decoded = min_distance_decode(codebook, y)
    return decoded is None or decoded[0] != m


def _greedy_mask(
    codebook: Codebook, x: int, strategy: AdversaryStrategy, rng: np.random.Generator
) -> int:
    """Flips toward the nearest rival of a codeword consistent with what was read."""
    n = codebook.n
    s = random_read_set(n, strategy.rn, rng)
    z = observe(BitVector(n, x), s).bits
    flat = codebook.words.ravel()
    keys = codebook.words.shape[1]
    seen = np.zeros_like(flat)
    for pos, i in enumerate(s.indices):
        seen |= ((flat >> np.int64(i - 1)) & 1) << np.int64(pos)
    candidates = np.flatnonzero(seen == z)
    guess = int(candidates[rng.integers(candidates.size)])
    guess_word = int(flat[guess])
    rivals = np.flatnonzero(np.arange(flat.size) // keys != guess // keys)
    if rivals.size == 0:
        return 0
    dist = popcount_array(flat[rivals] ^ np.int64(guess_word))
    rival_word = int(flat[rivals[int(np.argmin(dist))]])
    diff = guess_word ^ rival_word
    mask = 0
    for j in range(n):
        if bin(mask).count("1") == strategy.pn:
            break
        if (diff >> j) & 1:
            mask |= 1 << j
    return mask


def error_prob(
    codebook: Codebook, strategy: AdversaryStrategy, trials: int, seed
) -> ReliabilityReport:
    """
    Per-message decoding error under one adversary strategy.

    Deterministic strategies (none, oblivious-exhaustive) enumerate every
    key when there are at most `trials` of them; otherwise keys are drawn
    uniformly. oblivious-exhaustive reports, per message, the worst single
    flip set of size <= pn averaged over keys.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    n = codebook.n
    if strategy.pn > n or strategy.rn > n:
        raise DomainError(f"budgets pn={strategy.pn}, rn={strategy.rn} exceed n={n}")
    messages, keys = codebook.words.shape
    kind = strategy.kind
    deterministic = kind in (AdversaryKind.NONE, AdversaryKind.OBLIVIOUS_EXHAUSTIVE)
    exact = deterministic and keys <= trials
    flips = (
        [f.mask for f in enumerate_flip_sets(n, strategy.pn)]
        if kind == AdversaryKind.OBLIVIOUS_EXHAUSTIVE
        else None
    )
    rng = np.random.default_rng(seed)
    per_message = []
    for m in range(messages):
        ws = np.arange(keys) if exact else rng.integers(0, keys, size=trials)
        sent = codebook.words[m, ws]
        if kind == AdversaryKind.NONE:
            est = float(np.mean(_decode_batch(codebook, sent) != m))
        elif kind == AdversaryKind.OBLIVIOUS_EXHAUSTIVE:
            est = max(
                float(np.mean(_decode_batch(codebook, sent ^ np.int64(mask)) != m))
                for mask in flips
            )
        elif kind == AdversaryKind.RANDOM:
            masks = np.array(
                [
                    sum(1 << int(j) for j in rng.choice(n, strategy.pn, replace=False))
                    for _ in ws
                ],
                dtype=np.int64,
            )
            est = float(np.mean(_decode_batch(codebook, sent ^ masks) != m))
        else:
            masks = np.array(
                [_greedy_mask(codebook, int(x), strategy, rng) for x in sent],
                dtype=np.int64,
            )
            est = float(np.mean(_decode_batch(codebook, sent ^ masks) != m))
        per_message.append(est)
    return ReliabilityReport(
        strategy=strategy.describe(),
        per_message=per_message,
        max_error=max(per_message),
        trials=trials,
        exact=exact,
    )


def theorem2_experiment(
    n: int,
    mbits: int,
    wbits: int,
    k_values: Sequence[int],
    pn: int,
    rn: int,
    trials: int,
    seed: int,
    samples: int = 1,
    mode: SearchMode = SearchMode.EXHAUSTIVE,
    strategies: Sequence[AdversaryKind] = (AdversaryKind.NONE,),
    leak_threshold: Optional[float] = None,
    delta: Optional[float] = None,
) -> Theorem2Report:
    """
    Secrecy and reliability of sampled pseudolinear codes.

    A sample succeeds when its semantic leakage is at most leak_threshold
    and its maximum error is at most delta under every strategy.
    """
    if leak_threshold is None:
        leak_threshold = settings.DEFAULT_LEAK_THRESHOLD
    delta = settings.DEFAULT_DELTA if delta is None else delta
    rows: List[Theorem2Row] = []
    success: Dict[int, float] = {}
    for k in k_values:
        wins = 0
        for i in range(samples):
            code_seed = tasks.derive_seed(seed, f"theorem2/k{k}", i)
            book = pseudolinear_codebook(
                sample_pseudolinear(n, mbits, wbits, k, code_seed)
            )
            leak = sem_leakage(book, rn, mode, seed=code_seed)
            reports = [
                error_prob(
                    book,
                    AdversaryStrategy(kind=kind, pn=pn, rn=rn, seed=code_seed),
                    trials,
                    code_seed,
                )
                for kind in strategies
            ]
            ok = leak.capacity_mi <= leak_threshold and all(
                r.max_error <= delta for r in reports
            )
            wins += ok
            rows.extend(
                Theorem2Row(
                    sample=i,
                    k=k,
                    seed=code_seed,
                    capacity_mi=leak.capacity_mi,
                    uniform_mi=leak.uniform_mi,
                    leakage_exact=leak.exact,
                    strategy=r.strategy,
                    max_error=r.max_error,
                    success=ok,
                )
                for r in reports
            )
        success[k] = wins / samples if samples else 0.0
        logger.info(f"k={k}: {wins}/{samples} sampled codes meet both targets")
    return Theorem2Report(rows=rows, success_fraction=success)
