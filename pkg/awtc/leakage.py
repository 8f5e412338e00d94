"""
Exact leakage of wiretap codes to an adversary that reads rn coordinates.
"""
import itertools
import logging
from math import comb
from typing import Iterable, Optional, Tuple

import numpy as np

from .bitlinalg import (
    BitMatrix,
    independent_columns,
    min_dependent_columns,
    rank,
    select_columns,
)
from .channel import ReadSet, enumerate_read_sets, random_read_set
from .codes import Codebook, CosetCode, LinearCode
from .config import settings
from .errors import DomainError, PreconditionError, check_cap
from .infotheory import (
    JointPmf,
    Pmf,
    blahut_arimoto,
    conditional_entropy,
    extended_relative_entropy,
    mutual_information,
)
from .models import SearchMode
from .schema import LeakageReport

# Set up logging
logger = logging.getLogger(__name__)


def _observations(codebook: Codebook, s: ReadSet) -> np.ndarray:
    """z[m, w] packed with bit i = coordinate s.indices[i]."""
    if s.n != codebook.n:
        raise DomainError(f"read set over n={s.n}, codebook n={codebook.n}")
    check_cap(
        "codebook bits (mbits + wbits)",
        codebook.mbits + codebook.wbits,
        settings.MAX_CODEBOOK_BITS,
    )
    check_cap("observed bits rn", s.size, settings.MAX_READ_BITS)
    z = np.zeros_like(codebook.words)
    for pos, i in enumerate(s.indices):
        z |= ((codebook.words >> np.int64(i - 1)) & 1) << np.int64(pos)
    return z


def _conditional(codebook: Codebook, s: ReadSet) -> np.ndarray:
    """P(z | m) as a (messages x 2^rn) matrix."""
    z = _observations(codebook, s)
    messages, keys = z.shape
    width = 1 << s.size
    flat = (np.arange(messages, dtype=np.int64)[:, None] * width + z).ravel()
    counts = np.bincount(flat, minlength=messages * width).reshape(messages, width)
    return counts / keys


def induced_joint(codebook: Codebook, s: ReadSet, pm: Optional[Pmf] = None) -> JointPmf:
    """Exact P(m, z) when the key is uniform; uniform messages by default."""
    cond = _conditional(codebook, s)
    if pm is None:
        pm = Pmf.uniform(cond.shape[0])
    if pm.size != cond.shape[0]:
        raise DomainError(
            f"message law over {pm.size} values, codebook has {cond.shape[0]}"
        )
    return JointPmf(pm.probs[:, None] * cond)


def leakage_uniform(codebook: Codebook, s: ReadSet) -> float:
    return mutual_information(induced_joint(codebook, s))


def leakage_divergence_bound(codebook: Codebook, s: ReadSet) -> float:
    """max_m D(P_{Z|M=m} || uniform), an upper bound on the read-set capacity."""
    cond = _conditional(codebook, s)
    uniform = np.full(cond.shape[1], 1.0 / cond.shape[1])
    return max(extended_relative_entropy(row, uniform) for row in cond)


def lemma1_leakage(c: LinearCode, s: ReadSet) -> int:
    """rank G(s) - rank G_W(s), the uniform-message leakage of a normalized code."""
    return rank(select_columns(c.g, s)) - rank(select_columns(c.g_w, s))


def _read_sets(
    n: int, rn: int, mode: SearchMode, budget: Optional[int], seed
) -> Iterable[ReadSet]:
    if mode == SearchMode.EXHAUSTIVE:
        check_cap(f"read sets C({n}, {rn})", comb(n, rn), settings.MAX_READ_SETS)
        return enumerate_read_sets(n, rn)
    budget = settings.SAMPLED_READ_SETS if budget is None else budget
    if budget >= comb(n, rn):
        return enumerate_read_sets(n, rn)
    rng = np.random.default_rng(seed)
    seen = set()
    picks = []
    while len(picks) < budget:
        s = random_read_set(n, rn, rng)
        if s.indices not in seen:
            seen.add(s.indices)
            picks.append(s)
    return sorted(picks, key=lambda s: s.indices)


def sem_leakage(
    codebook: Codebook,
    rn: int,
    mode: SearchMode = SearchMode.EXHAUSTIVE,
    budget: Optional[int] = None,
    seed=None,
) -> LeakageReport:
    """
    Semantic leakage: max over read sets of the capacity of m -> z.

    Exhaustive mode is exact within the Blahut-Arimoto tolerance. Sampled
    mode evaluates `budget` random read sets and is only a lower bound.
    A later read set replaces the best only if it beats it by more than
    the tolerance, so ties resolve to the lexicographically first set.
    """
    tol = settings.BA_TOL
    sets = _read_sets(codebook.n, rn, mode, budget, seed)
    best = None
    evaluated = 0
    for s in sets:
        evaluated += 1
        cond = _conditional(codebook, s)
        capacity, _ = blahut_arimoto(cond, tol)
        if best is None or capacity > best[1] + tol:
            best = (s, capacity)
    s, capacity = best
    uniform = leakage_uniform(codebook, s)
    exact = mode == SearchMode.EXHAUSTIVE or evaluated == comb(codebook.n, rn)
    if not exact:
        logger.warning(
            f"sampled {evaluated} of {comb(codebook.n, rn)} read sets: lower bound only"
        )
    return LeakageReport(
        read_set=list(s.indices),
        uniform_mi=uniform,
        capacity_mi=max(capacity, uniform),
        mode=mode,
        exact=exact,
        sets_evaluated=evaluated,
        note="" if exact else "lower bound",
    )


def strong_secrecy_leakage(codebook: Codebook, rn: int) -> Tuple[ReadSet, float]:
    """Max over read sets of the uniform-message leakage."""
    check_cap(
        f"read sets C({codebook.n}, {rn})", comb(codebook.n, rn), settings.MAX_READ_SETS
    )
    best = None
    for s in enumerate_read_sets(codebook.n, rn):
        value = leakage_uniform(codebook, s)
        if best is None or value > best[1] + 1e-12:
            best = (s, value)
    return best


# ---------------------------------------------------------------------------
# Linear-code attack
# ---------------------------------------------------------------------------


def full_view_read_set(c: LinearCode, rn: int) -> ReadSet:
    """
    A read set of size rn holding mbits + wbits independent columns of G.

    The remaining rn - mbits - wbits indices are the lowest unused ones.
    """
    b = c.mbits + c.wbits
    if rn < b:
        raise PreconditionError(f"rn={rn} is below mbits + wbits = {b}")
    chosen = independent_columns(c.g, b)
    if chosen is None:
        raise PreconditionError("stacked generator G is not full rank")
    rest = [j for j in range(1, c.n + 1) if j not in chosen][: rn - b]
    return ReadSet.from_indices(c.n, list(chosen) + rest)


def _certificate(g_w: BitMatrix, s: ReadSet) -> Optional[list]:
    sub = select_columns(g_w, s)
    budget = min(s.size, settings.MAX_DEPENDENT_BUDGET)
    if sub.cols > settings.MAX_DEPENDENT_COLUMNS:
        return None
    found = min_dependent_columns(sub, budget)
    if found is None:
        return None
    return [s.indices[j - 1] for j in found]


def converse_attack(c: LinearCode, rn: int) -> LeakageReport:
    """
    Read set that makes a full-rank linear code leak.

    Picks the leftmost mbits + wbits independent columns V of G, then the
    rn-subset of V with the smallest rank(G_W(S)). Within V every rn
    columns of G are independent, so the uniform-message leakage at S is
    rn - rank(G_W(S)). Small instances search all subsets of V; larger
    ones start from a minimum dependent column set of G_W(V).
    """
    b = c.mbits + c.wbits
    if rank(c.g) < b:
        raise PreconditionError("converse attack needs a full-rank stacked generator")
    if rn >= b:
        s = full_view_read_set(c, rn)
        leak = lemma1_leakage(c, s)
        logger.info(f"rn={rn} >= mbits + wbits: full-view read set leaks {leak} bits")
        return LeakageReport(
            read_set=list(s.indices),
            uniform_mi=float(leak),
            capacity_mi=float(leak),
            note="rn >= mbits + wbits: message fully determined",
        )

    v = independent_columns(c.g, b)
    g_w_v = select_columns(c.g_w, v)
    floor = max(rn - c.mbits, 0)
    dual = None
    if g_w_v.cols <= settings.MAX_DEPENDENT_COLUMNS:
        found = min_dependent_columns(g_w_v, min(rn, settings.MAX_DEPENDENT_BUDGET))
        dual = len(found) if found else None
    else:
        found = None

    if comb(b, rn) <= settings.ATTACK_EXHAUSTIVE_LIMIT:
        best = None
        for positions in itertools.combinations(range(b), rn):
            r = rank(select_columns(g_w_v, [p + 1 for p in positions]))
            if best is None or r < best[1]:
                best = (positions, r)
                if r == floor:
                    break
        chosen = [v[p] for p in best[0]]
    else:
        positions = [p - 1 for p in found] if found else []
        positions += [p for p in range(b) if p not in positions][: rn - len(positions)]
        chosen = [v[p] for p in positions]

    s = ReadSet.from_indices(c.n, chosen)
    leak = rn - rank(select_columns(c.g_w, s))
    certificate = _certificate(c.g_w, s) if leak >= 1 else None
    if certificate is None:
        logger.warning(f"no dependent-column certificate at n={c.n}, rn={rn}")
    # Uniform inputs achieve the capacity of a linear code's read channel.
    return LeakageReport(
        read_set=list(s.indices),
        uniform_mi=float(leak),
        capacity_mi=float(leak),
        certificate=certificate,
        dual_distance=dual,
        note="" if certificate else "no certificate at this n",
    )


# ---------------------------------------------------------------------------
# Coset codes
# ---------------------------------------------------------------------------


def ozarow_equivocation(h: BitMatrix, rn: int) -> int:
    """min over unread index sets I (|I| = n - rn) of rank H(I)."""
    n = h.cols
    if not 0 <= rn <= n:
        raise DomainError(f"rn={rn} outside 0..{n}")
    check_cap(f"index sets C({n}, {rn})", comb(n, rn), settings.MAX_READ_SETS)
    best = h.rows
    for unread in itertools.combinations(range(1, n + 1), n - rn):
        best = min(best, rank(select_columns(h, unread)))
        if best == 0:
            break
    return best


def coset_leakage_lb(c: CosetCode, rn: int) -> int:
    return max(c.mbits - ozarow_equivocation(c.h, rn), 0)


def equivocation_bruteforce(codebook: Codebook, rn: int) -> float:
    """min over read sets of H(M|Z) with uniform messages."""
    check_cap(
        f"read sets C({codebook.n}, {rn})", comb(codebook.n, rn), settings.MAX_READ_SETS
    )
    return min(
        conditional_entropy(induced_joint(codebook, s))
        for s in enumerate_read_sets(codebook.n, rn)
    )
