"""
Soft-covering experiments: how close the channel output of a random
codebook comes to the i.i.d. output law, and the concentration bounds that
control it.

Output sequences v over an alphabet of size q are indexed little-endian:
index = sum_j v_j q^j.
"""
import logging
import math
from dataclasses import dataclass
from math import ceil
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from . import tasks
from .channel import Dmc, dmc_sample
from .codes import Codebook, pseudolinear_codebook, sample_pseudolinear
from .config import settings
from .errors import DimensionMismatchError, DomainError, check_cap
from .infotheory import (
    Pmf,
    extended_relative_entropy,
    h2,
    joint_from_channel,
    mutual_information,
    output_marginal,
    relative_entropy,
    renyi_divergence,
)
from .models import CodeFamily
from .schema import (
    BoundReport,
    ConcentrationCheck,
    ProofConstants,
    SoftCoverDiagnostics,
    SufficientConditionReport,
    TailExperimentResult,
    TailParams,
)

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CodebookU:
    """Input sequences u(w), one row per key, over an alphabet of size `alphabet`."""

    n: int
    alphabet: int
    words: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.words, dtype=np.int64)
        if w.ndim != 2 or w.shape[1] != self.n or w.shape[0] == 0:
            raise DimensionMismatchError(f"codebook array {w.shape} for n={self.n}")
        if np.any((w < 0) | (w >= self.alphabet)):
            raise DomainError(
                f"codebook symbol outside alphabet of size {self.alphabet}"
            )
        w.setflags(write=False)
        object.__setattr__(self, "words", w)

    @property
    def size(self) -> int:
        return self.words.shape[0]

    @property
    def keybits(self) -> float:
        return math.log2(self.size)


# ---------------------------------------------------------------------------
# Product laws over V^n
# ---------------------------------------------------------------------------


def _check_output_space(n: int, out_size: int) -> None:
    check_cap(
        "output bits n*log2|V|", n * math.log2(out_size), settings.MAX_OUTPUT_BITS
    )


def _product(rows: Sequence[np.ndarray]) -> np.ndarray:
    law = np.ones(1)
    for row in reversed(rows):
        law = np.kron(law, row)
    return law


def _sum_product(rows: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros(1)
    for row in reversed(rows):
        acc = (acc[:, None] + row[None, :]).ravel()
    return acc


def product_pmf(qv: Pmf, n: int) -> Pmf:
    _check_output_space(n, qv.size)
    law = _product([qv.probs] * n)
    return Pmf(law / math.fsum(law))


def _density_table(qu: Pmf, ch: Dmc) -> np.ndarray:
    qv = output_marginal(qu, ch).probs
    with np.errstate(divide="ignore"):
        return np.log2(ch.matrix) - np.log2(np.where(qv > 0, qv, 1.0))[None, :]


def _unique_words(cb: CodebookU) -> Tuple[np.ndarray, np.ndarray]:
    words, counts = np.unique(cb.words, axis=0, return_counts=True)
    return words, counts / cb.size


def induced_output_pmf(cb: CodebookU, ch: Dmc) -> Pmf:
    """Mixture over keys of the n-fold channel law."""
    if cb.alphabet != ch.in_size:
        raise DimensionMismatchError(
            f"codebook alphabet {cb.alphabet}, channel input {ch.in_size}"
        )
    _check_output_space(cb.n, ch.out_size)
    mix = np.zeros(ch.out_size**cb.n)
    words, weights = _unique_words(cb)
    for u, weight in zip(words, weights):
        mix += weight * _product([ch.matrix[s] for s in u])
    return Pmf(mix / math.fsum(mix))


def soft_cover_divergence(cb: CodebookU, ch: Dmc, qu: Pmf) -> float:
    qv = output_marginal(qu, ch)
    return relative_entropy(induced_output_pmf(cb, ch), product_pmf(qv, cb.n))


def typical_split(cb: CodebookU, ch: Dmc, qu: Pmf, eps: float) -> SoftCoverDiagnostics:
    """
    Split the induced output law by typicality of (u(w), v).

    A pair is typical when its information density is strictly below
    (I(U;V) + eps) n. P1 collects typical pairs, P2 the rest.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    if cb.alphabet != ch.in_size:
        raise DimensionMismatchError(
            f"codebook alphabet {cb.alphabet}, channel input {ch.in_size}"
        )
    _check_output_space(cb.n, ch.out_size)
    info = mutual_information(joint_from_channel(qu, ch))
    threshold = (info + eps) * cb.n
    dens = _density_table(qu, ch)
    qn = product_pmf(output_marginal(qu, ch), cb.n).probs

    p1 = np.zeros_like(qn)
    p2 = np.zeros_like(qn)
    words, weights = _unique_words(cb)
    for u, weight in zip(words, weights):
        law = _product([ch.matrix[s] for s in u])
        typical = _sum_product([dens[s] for s in u]) < threshold
        p1 += weight * np.where(typical, law, 0.0)
        p2 += weight * np.where(typical, 0.0, law)

    total = p1 + p2
    divergence = max(extended_relative_entropy(total / math.fsum(total), qn), 0.0)
    p2_mass = min(max(math.fsum(p2), 0.0), 1.0)
    support = qn > 0
    delta1_max = float(np.max(p1[support] / qn[support]))
    d1 = extended_relative_entropy(p1, qn)
    d2 = extended_relative_entropy(p2, qn)
    return SoftCoverDiagnostics(
        divergence=divergence,
        p2_mass=p2_mass,
        delta1_max=delta1_max,
        epsilon=eps,
        d1=d1,
        d2=d2,
        split_bound=h2(p2_mass) + d1 + d2,
    )


def estimate_divergence(
    cb: CodebookU, ch: Dmc, qu: Pmf, samples: int, seed
) -> SoftCoverDiagnostics:
    """Monte Carlo estimate of the soft-covering divergence for large output spaces."""
    rng = np.random.default_rng(seed)
    qv = output_marginal(qu, ch).probs
    logs = []
    for _ in range(samples):
        u = cb.words[rng.integers(cb.size)]
        v = dmc_sample(ch, u, rng.integers(2**63))
        likelihoods = (float(np.prod(ch.matrix[row, v])) for row in cb.words)
        mixture = math.fsum(likelihoods) / cb.size
        logs.append(math.log2(mixture) - float(np.sum(np.log2(qv[v]))))
    mean = max(math.fsum(logs) / samples, 0.0)
    logger.warning(
        f"soft-covering divergence at n={cb.n} is a {samples}-sample estimate"
    )
    return SoftCoverDiagnostics(
        divergence=mean,
        p2_mass=0.0,
        delta1_max=math.nan,
        epsilon=0.0,
        d1=math.nan,
        d2=math.nan,
        split_bound=math.nan,
        estimate=True,
    )


# ---------------------------------------------------------------------------
# Codebook samplers
# ---------------------------------------------------------------------------


def _unpack(words: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n, dtype=np.int64)[None, :]
    return ((words[:, None] >> shifts) & 1).astype(np.int64)


def sample_kwise_codebook(n: int, keybits: int, k: int, seed) -> CodebookU:
    """
    Uniform binary codebook with k-wise independent codewords.

    Keys index the pseudolinear codewords x(1, w): fixing the message bit
    to 1 keeps every pair index nonzero, so no codeword is pinned to zero.
    """
    if keybits + 1 > settings.MAX_FIELD_DEGREE:
        raise DomainError(f"keybits={keybits} needs a field of degree {keybits + 1}")
    code = sample_pseudolinear(n, 1, keybits, k, seed)
    book = pseudolinear_codebook(code)
    return CodebookU(n, 2, _unpack(book.words[1], n))


def iid_codebook(n: int, keybits: int, qu: Pmf, seed) -> CodebookU:
    """Mutually independent codewords drawn from qu^n."""
    rng = np.random.default_rng(seed)
    words = rng.choice(qu.size, size=(1 << keybits, n), p=qu.probs)
    return CodebookU(n, qu.size, words)


def codebook_from(book: Codebook, message: int = 0) -> CodebookU:
    """Binary CodebookU for one message row of a wiretap codebook."""
    return CodebookU(book.n, 2, _unpack(book.words[message], book.n))


def _sample_codebook(params: TailParams, seed) -> CodebookU:
    if params.family == CodeFamily.IID:
        return iid_codebook(params.n, params.keybits, Pmf.uniform(2), seed)
    return sample_kwise_codebook(params.n, params.keybits, params.k, seed)


def _tail_trial(args) -> SoftCoverDiagnostics:
    params, seed = args
    cb = _sample_codebook(params, seed)
    return typical_split(cb, params.channel, Pmf.uniform(2), params.eps)


def divergence_tail_experiment(
    params: TailParams, trials: int, seed: int, workers: Optional[int] = None
) -> TailExperimentResult:
    """
    Fraction of sampled codebooks whose divergence exceeds params.threshold.

    Every trial also keeps its typical-set split at params.eps.
    """
    if params.family == CodeFamily.KWISE and (params.k < 4 or params.k % 2):
        raise DomainError(f"k-wise soft covering needs an even k >= 4, got {params.k}")
    tag = f"softcover/{params.family.value}/n{params.n}"
    diags = tasks.run_trials(_tail_trial, trials, seed, tag, workers, payload=params)
    divs = [d.divergence for d in diags]
    arr = np.array(divs)
    mean = float(arr.mean()) if trials else 0.0
    stderr = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return TailExperimentResult(
        family=params.family,
        n=params.n,
        keybits=params.keybits,
        trials=trials,
        threshold=params.threshold,
        probability=float(np.mean(arr > params.threshold)) if trials else 0.0,
        mean_divergence=mean,
        stderr=stderr,
        divergences=divs,
        diagnostics=diags,
    )


def fit_decay_exponent(ns: Sequence[int], means: Sequence[float]) -> float:
    """Least-squares slope of -log2(mean divergence) against n."""
    ns = np.asarray(ns, dtype=float)
    means = np.asarray(means, dtype=float)
    keep = means > 0
    if keep.sum() < 2:
        raise DomainError("need at least two positive means to fit a decay exponent")
    slope, _ = np.polyfit(ns[keep], -np.log2(means[keep]), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Concentration bounds
# ---------------------------------------------------------------------------


def _log_binomial(x: float, k: int) -> float:
    return float(gammaln(x + 1) - gammaln(k + 1) - gammaln(x - k + 1))


def schmidt_bound(w_size: int, mu: float, tau: float, k: int) -> BoundReport:
    """
    Tail bound for a sum of |W| k-wise independent [0,1] variables with mean mu.

    Evaluated as C(|W|, k*) (mu/|W|)^k* / C(mu(1+tau), k*) in log space with
    real-valued binomials, where k* = ceil(mu tau / (1 - mu/|W|)). The
    usual step of rescaling the variables so that k* equals k is not
    needed: any k >= k* gives the same bound.
    """
    if mu <= 0 or tau <= 0:
        raise DomainError("mu and tau must be positive")
    if mu >= w_size:
        raise DomainError(f"mu={mu} must be below |W|={w_size}")
    k_star = ceil(mu * tau / (1.0 - mu / w_size))
    if k < k_star:
        return BoundReport(
            value=1.0, applicable=False, k_star=k_star, note=f"k={k} < k*={k_star}"
        )
    x = mu * (1.0 + tau)
    if x - k_star + 1 <= 0:
        return BoundReport(
            value=1.0, applicable=False, k_star=k_star, note="mu(1+tau) < k* - 1"
        )
    log_value = (
        _log_binomial(w_size, k_star)
        + k_star * math.log(mu / w_size)
        - _log_binomial(x, k_star)
    )
    return BoundReport(value=math.exp(log_value), k_star=k_star)


def bellare_bound(k: int, mu: float, tau: float) -> BoundReport:
    """8 ((k mu + k^2) / (mu tau)^2)^(k/2) for k-wise independent [0,1] variables."""
    if k < 4 or k % 2:
        raise DomainError(f"k must be even and >= 4, got {k}")
    if mu <= 0 or tau <= 0:
        raise DomainError("mu and tau must be positive")
    value = 8.0 * ((k * mu + k * k) / (mu * tau) ** 2) ** (k / 2)
    return BoundReport(value=value, note="vacuous" if value >= 1 else "")


def schmidt_exponent_bound(k: int, beta: float, n: int) -> float:
    """k^k / k! * 2^(-k beta n)."""
    return math.exp(k * math.log(k) - math.lgamma(k + 1) - k * beta * n * math.log(2))


def concentration_failure_bound(
    k: int, beta: float, eta: float, n: int, out_size: int
) -> float:
    """Failure probability of the two concentration steps combined."""
    second = 8 * k * (k + 1) ** (k / 2) * 2.0 ** ((-k * eta + math.log2(out_size)) * n)
    return schmidt_exponent_bound(k, beta, n) + second


def alpha_lambda_eps(qu: Pmf, ch: Dmc, lam: float, eps: float) -> float:
    """lam (I(U;V) + eps - D_{lam+1}(Q_UV || Q_U Q_V))."""
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    joint = joint_from_channel(qu, ch)
    qv = output_marginal(qu, ch).probs
    info = mutual_information(joint)
    quv = Pmf(joint.matrix.ravel())
    prod = Pmf(np.outer(qu.probs, qv).ravel())
    return lam * (info + eps - renyi_divergence(quv, prod, lam + 1.0))


def proof_constants(
    rp: float,
    info: float,
    eps: float,
    beta: float,
    qv: Pmf,
    n: int,
    alpha: Optional[float] = None,
    lam: Optional[float] = None,
    qu: Optional[Pmf] = None,
    ch: Optional[Dmc] = None,
) -> ProofConstants:
    """alpha, eta, pi1 = alpha - beta and q_n; order violations are listed."""
    if alpha is None:
        if lam is None or qu is None or ch is None:
            raise DomainError("alpha or (lam, qu, ch) is required")
        alpha = alpha_lambda_eps(qu, ch, lam, eps)
    eta = (rp - info - eps + 2.0 * (beta - alpha)) / 2.0
    pi1 = alpha - beta
    support = qv.probs[qv.probs > 0]
    qn = 2.0 * math.log2(math.e) + pi1 * n + n * math.log2(1.0 / support.min())
    violations = []
    if alpha <= 0:
        violations.append(f"alpha={alpha} is not positive")
    if alpha >= rp:
        violations.append(f"alpha={alpha} is not below R'={rp}")
    if beta <= 0:
        violations.append(f"beta={beta} is not positive")
    if pi1 <= 0:
        violations.append(f"pi1={pi1} is not positive (beta must be below alpha)")
    if eta <= 0:
        violations.append(f"eta={eta} is not positive")
    return ProofConstants(alpha=alpha, eta=eta, pi1=pi1, qn=qn, violations=violations)


def sufficient_condition(
    diag: SoftCoverDiagnostics, pi1: float, n: int, qv: Pmf
) -> SufficientConditionReport:
    """Check the small-P2 / flat-P1 condition and the divergence bound it implies."""
    slack = 2.0 ** (-pi1 * n)
    q_min = qv.probs[qv.probs > 0].min()
    qn = 2.0 * math.log2(math.e) + pi1 * n + n * math.log2(1.0 / q_min)
    bound = qn * slack
    return SufficientConditionReport(
        p2_condition=diag.p2_mass < slack,
        delta1_condition=diag.delta1_max < 1.0 + slack,
        divergence_bound=bound,
        divergence_within_bound=diag.divergence < bound,
    )


def _concentration_trial(args) -> float:
    (n, keybits, k, ch, qu, eps, v), seed = args
    cb = sample_kwise_codebook(n, keybits, k, seed)
    return _t_sum(cb, ch, qu, eps, v)


def _t_sum(cb: CodebookU, ch: Dmc, qu: Pmf, eps: float, v: Sequence[int]) -> float:
    info = mutual_information(joint_from_channel(qu, ch))
    dens = _density_table(qu, ch)
    scale = 2.0 ** (-(info + eps) * cb.n)
    total = 0.0
    for u in cb.words:
        d = float(sum(dens[a, b] for a, b in zip(u, v)))
        if d < (info + eps) * cb.n:
            total += scale * 2.0**d
    return total


def concentration_check(
    n: int,
    keybits: int,
    k: int,
    ch: Dmc,
    eps: float,
    v: Sequence[int],
    tau: float,
    trials: int,
    seed: int,
) -> ConcentrationCheck:
    """
    Empirical tail of T = sum_w T_w at a fixed output v, against the
    Bellare-Rompel bound.

    T_w = 2^-(I+eps)n Q(v|u_w)/Q_V(v) on typical pairs, else 0, lies in [0, 1].
    mu = E[T] is exact: every codeword is uniform on {0,1}^n.
    """
    qu = Pmf.uniform(2)
    all_u = CodebookU(n, 2, _unpack(np.arange(1 << n, dtype=np.int64), n))
    per_codeword = _t_sum(all_u, ch, qu, eps, v) / (1 << n)
    mu = (1 << keybits) * per_codeword
    threshold = mu * (1.0 + tau)
    payload = (n, keybits, k, ch, qu, eps, tuple(v))
    values = tasks.run_trials(
        _concentration_trial, trials, seed, f"concentration/n{n}", None, payload=payload
    )
    tail = float(np.mean(np.array(values) >= threshold)) if trials else 0.0
    bound = bellare_bound(k, mu, tau).clamped if mu > 0 else 1.0
    logger.info(f"concentration at n={n}: mu={mu:.4g}, tail={tail}, bound={bound:.4g}")
    return ConcentrationCheck(
        mu=mu,
        tau=tau,
        trials=trials,
        empirical_tail=tail,
        bound=bound,
        within_bound=tail <= bound,
    )
