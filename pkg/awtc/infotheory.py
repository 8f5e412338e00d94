"""
Information measures on dense PMFs, channel capacity, and the rate bounds
used for the adversarial wiretap channel of type II. All logs are base 2
with 0 log 0 = 0.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from .channel import Dmc
from .config import settings
from .errors import DimensionMismatchError, DomainError

# Set up logging
logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Probability objects
# ---------------------------------------------------------------------------


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Pmf:
    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 1 or p.size == 0:
            raise DomainError("a PMF is a nonempty 1-D vector")
        if np.any(p < 0) or abs(math.fsum(p) - 1.0) > settings.PROB_TOL:
            raise DomainError(f"not a PMF (sum {math.fsum(p)!r})")
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, size: int) -> "Pmf":
        return cls(np.full(size, 1.0 / size))

    @property
    def size(self) -> int:
        return self.probs.size


@dataclass(frozen=True, eq=False)
class JointPmf:
    """matrix[m, z]: rows are messages, columns observations."""

    matrix: np.ndarray

    def __post_init__(self):
        j = _frozen(self.matrix)
        if j.ndim != 2 or j.size == 0:
            raise DomainError("a joint PMF is a nonempty 2-D array")
        if np.any(j < 0) or abs(math.fsum(j.ravel()) - 1.0) > settings.PROB_TOL:
            raise DomainError(f"not a joint PMF (sum {math.fsum(j.ravel())!r})")
        object.__setattr__(self, "matrix", j)

    @property
    def row_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    @property
    def col_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=0)


def _xlog2y(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x * log2(y) with the convention 0 * log 0 = 0."""
    out = np.zeros(np.broadcast(x, y).shape)
    mask = np.broadcast_to(x > 0, out.shape)
    xb = np.broadcast_to(x, out.shape)
    yb = np.broadcast_to(y, out.shape)
    out[mask] = xb[mask] * np.log2(yb[mask])
    return out


# ---------------------------------------------------------------------------
# Entropies and divergences
# ---------------------------------------------------------------------------


def h2(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"h2 argument {x} outside [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _h2_array(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    return -(_xlog2y(x, x) + _xlog2y(1.0 - x, 1.0 - x))


def entropy(p: Union[Pmf, np.ndarray]) -> float:
    probs = p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)
    return -math.fsum(_xlog2y(probs, probs).ravel())


def mutual_information(j: JointPmf) -> float:
    pm = j.row_marginal
    pz = j.col_marginal
    ratio = np.divide(
        j.matrix, np.outer(pm, pz), out=np.ones_like(j.matrix), where=j.matrix > 0
    )
    return max(math.fsum(_xlog2y(j.matrix, ratio).ravel()), 0.0)


def conditional_entropy(j: JointPmf) -> float:
    """H(row | column)."""
    return max(entropy(j.row_marginal) - mutual_information(j), 0.0)


def extended_relative_entropy(p: np.ndarray, q: np.ndarray) -> float:
    """Sum of p log2(p/q) over p > 0; p need not be normalized."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionMismatchError(f"domains {p.shape} and {q.shape}")
    if np.any((p > 0) & (q <= 0)):
        return math.inf
    ratio = np.divide(p, q, out=np.ones_like(p), where=p > 0)
    return math.fsum(_xlog2y(p, ratio).ravel())


def relative_entropy(p: Pmf, q: Pmf) -> float:
    """D(P||Q) in bits; math.inf when supp(P) is not inside supp(Q)."""
    if p.size != q.size:
        raise DimensionMismatchError(f"domains of size {p.size} and {q.size}")
    return max(extended_relative_entropy(p.probs, q.probs), 0.0)


def renyi_divergence(p: Pmf, q: Pmf, alpha: float) -> float:
    if alpha <= 0 or alpha == 1:
        raise DomainError(f"Renyi order must be positive and != 1, got {alpha}")
    if p.size != q.size:
        raise DimensionMismatchError(f"domains of size {p.size} and {q.size}")
    mask = p.probs > 0
    if np.any(q.probs[mask] <= 0):
        raise DomainError("support of P is not contained in support of Q")
    pp = p.probs[mask]
    terms = pp * (pp / q.probs[mask]) ** (alpha - 1.0)
    return math.log2(math.fsum(terms)) / (alpha - 1.0)


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------


def output_marginal(qu: Pmf, ch: Dmc) -> Pmf:
    if qu.size != ch.in_size:
        raise DimensionMismatchError(
            f"input law over {qu.size}, channel input {ch.in_size}"
        )
    qv = qu.probs @ ch.matrix
    return Pmf(qv / math.fsum(qv))


def joint_from_channel(qu: Pmf, ch: Dmc) -> JointPmf:
    if qu.size != ch.in_size:
        raise DimensionMismatchError(
            f"input law over {qu.size}, channel input {ch.in_size}"
        )
    return JointPmf(qu.probs[:, None] * ch.matrix)


def information_density(
    qu: Pmf, ch: Dmc, u: Union[int, Sequence[int]], v: Union[int, Sequence[int]]
) -> float:
    """log2 Q(v|u)/Q_V(v); sequences sum the per-symbol values."""
    qv = output_marginal(qu, ch).probs
    ua = np.atleast_1d(np.asarray(u, dtype=np.int64))
    va = np.atleast_1d(np.asarray(v, dtype=np.int64))
    if ua.size != va.size:
        raise DimensionMismatchError(f"input length {ua.size}, output length {va.size}")
    if np.any(qv[va] <= 0):
        raise DomainError("output symbol has zero marginal probability")
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log2(ch.matrix[ua, va] / qv[va])))


def blahut_arimoto(
    transition: Union[Dmc, np.ndarray],
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> Tuple[float, Pmf]:
    """
    Capacity of a discrete channel by alternating maximization.

    Iterates until the gap between the upper bound max_x D(W_x||q) and the
    lower bound log2 sum_x p(x) 2^D(W_x||q) is below tol.

    Returns:
        (capacity lower bound within tol of the capacity, maximizing input law)
    """
    tol = settings.BA_TOL if tol is None else tol
    max_iter = settings.BA_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if isinstance(transition, Dmc):
        w = transition.matrix
    else:
        w = np.asarray(transition, dtype=float)
    if w.ndim != 2 or np.any(w < 0) or np.any(np.abs(w.sum(axis=1) - 1.0) > 1e-9):
        raise DomainError("transition matrix is not row-stochastic")
    w = w[:, w.sum(axis=0) > 0]
    p = np.full(w.shape[0], 1.0 / w.shape[0])
    log_w = _xlog2y(w, np.where(w > 0, w, 1.0))
    i_low = 0.0
    for _ in range(max_iter):
        q = np.maximum(p @ w, np.finfo(float).tiny)
        d = (log_w - _xlog2y(w, q[None, :])).sum(axis=1)
        c = np.exp2(d)
        total = float(p @ c)
        i_low = math.log2(total)
        i_up = float(d.max())
        if i_up - i_low < tol:
            break
        p = p * c / total
    else:
        logger.warning(
            f"Blahut-Arimoto stopped after {max_iter} iterations, gap {i_up - i_low}"
        )
    return max(i_low, 0.0), Pmf(p / math.fsum(p))


# ---------------------------------------------------------------------------
# Rate bounds
# ---------------------------------------------------------------------------


def _check_unit(name: str, value: float, hi: float = 1.0) -> None:
    if not 0.0 <= value <= hi:
        raise DomainError(f"{name}={value} outside [0, {hi}]")


def capacity_bounds(p: float, r: float) -> Tuple[float, float]:
    """
    Lower and upper bounds on the AWTC-II secrecy capacity.

    The upper bound needs min over x in [0,1] of
    f(x) = H2((2p-1)x + 1 - p) - H2(p) - r H2(x), found on a 1e-4 grid and
    refined by golden-section search when the grid minimum is interior.
    """
    _check_unit("p", p, 0.5)
    _check_unit("r", r)
    hp = h2(p)

    def f(x: float) -> float:
        x = min(max(x, 0.0), 1.0)
        return h2((2 * p - 1) * x + 1 - p) - hp - r * h2(x)

    grid = np.linspace(0.0, 1.0, 10001)
    values = _h2_array((2 * p - 1) * grid + 1 - p) - hp - r * _h2_array(grid)
    i = int(np.argmin(values))
    fmin = float(values[i])
    interior = 0 < i < grid.size - 1
    if interior and values[i] < values[i - 1] and values[i] < values[i + 1]:
        res = optimize.minimize_scalar(
            f,
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden",
            options={"xtol": 1e-8},
        )
        fmin = min(fmin, float(res.fun))
    lower = max(1.0 - hp - r, 0.0)
    upper = 1.0 - hp - r - fmin
    return lower, max(upper, lower)


def plotkin_bound(delta: float) -> float:
    if not 0.0 < delta <= 0.5:
        raise DomainError(f"relative distance {delta} outside (0, 1/2]")
    return 1.0 - 2.0 * delta


def eb_threshold(r: float) -> float:
    """Elias-Bassalygo rate threshold; 0 on (1/2, 1] by continuous extension."""
    _check_unit("r", r)
    if r >= 0.5:
        return 0.0
    return max(1.0 - h2((1.0 - math.sqrt(1.0 - 2.0 * r)) / 2.0), 0.0)


def linear_failure_region(p: float, r: float) -> bool:
    """True where linear codes provably miss a positive capacity."""
    lower, _ = capacity_bounds(p, r)
    if lower <= 0:
        return False
    return r >= 0.5 or (0.0 < r and h2(p) < r)


def achievable_rates(
    p: float, r: float, eps: float, eps_prime: float
) -> Tuple[float, float]:
    """Message and key rates (1 - H2(p) - r - eps, r + eps') for pseudolinear codes."""
    _check_unit("p", p, 0.5)
    _check_unit("r", r)
    if eps <= 0 or eps_prime <= 0:
        raise DomainError("rate slacks must be positive")
    return 1.0 - h2(p) - r - eps, r + eps_prime


def fig1_rows(p: float, points: int = 101) -> List[Dict[str, float]]:
    rows = []
    for r in np.linspace(0.0, 1.0, points):
        r = float(r)
        lower, upper = capacity_bounds(p, r)
        rows.append(
            {
                "r": r,
                "lower": lower,
                "upper": upper,
                "plotkin_threshold": max(1.0 - 2.0 * r, 0.0),
                "eb_threshold": eb_threshold(r),
            }
        )
    return rows
