# awtc/commands/coding.py
import logging

from .. import tasks
from ..codes import codebook_of, kwise_check, sample_pseudolinear
from ..errors import ConfigError
from ..gf2m import Field, bch_distance_check
from ..models import CodeFamily, Subcommand
from ..reliability import error_prob, theorem2_experiment
from ..schema import AdversaryStrategy, ExperimentConfig
from ..storage import load_code
from .router import CommandOutput, CommandRouter

# Set up logging
logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["coding"])


@router.command(Subcommand.KWISE_CHECK)
def kwise(config: ExperimentConfig) -> CommandOutput:
    """k-wise uniformity of codeword tuples, plus the BCH column check under --t."""
    family = config.family or CodeFamily.PSEUDOLINEAR
    if family not in (CodeFamily.PSEUDOLINEAR, CodeFamily.LINEAR):
        raise ConfigError(
            f"kwise-check supports pseudolinear and linear families, not {family.value}"
        )
    b = config.b or config.mbits + config.wbits
    rows = [
        kwise_check(family.value, b, k, n).model_dump(mode="json")
        for k in config.k
        for n in config.n
    ]
    results = {"violations": sum(row["violations"] for row in rows)}
    if config.t:
        violations, checked = bch_distance_check(Field.of_degree(b), config.t)
        results["bch_distance"] = {
            "b": b,
            "t": config.t,
            "violations": violations,
            "checked": checked,
        }
    return CommandOutput(rows=rows, results=results)


@router.command(Subcommand.RELIABILITY_SIM)
def reliability_sim(config: ExperimentConfig) -> CommandOutput:
    """Decoding error of one code under each configured adversary strategy."""
    if config.code:
        code = load_code(config.code)
    else:
        seed = tasks.derive_seed(config.seed, "reliability/code", 0)
        code = sample_pseudolinear(
            config.n[0], config.mbits, config.wbits, config.k[0], seed
        )
    book = codebook_of(code)
    rows = []
    for i, kind in enumerate(config.strategies):
        seed = tasks.derive_seed(config.seed, f"reliability/{kind.value}", i)
        strategy = AdversaryStrategy(kind=kind, pn=config.pn, rn=config.rn, seed=seed)
        report = error_prob(book, strategy, config.trials, seed)
        rows.append(
            {
                "strategy": report.strategy,
                "max_error": report.max_error,
                "trials": report.trials,
                "exact": report.exact,
                "per_message": report.per_message,
            }
        )
    max_error = max((row["max_error"] for row in rows), default=0.0)
    return CommandOutput(rows=rows, results={"n": book.n, "max_error": max_error})


@router.command(Subcommand.THEOREM2_RUN)
def theorem2_run(config: ExperimentConfig) -> CommandOutput:
    """Joint secrecy and reliability of sampled pseudolinear codes, per n and k."""
    rows = []
    success = {}
    for n in config.n:
        report = theorem2_experiment(
            n,
            config.mbits,
            config.wbits,
            config.k,
            config.pn,
            config.rn,
            config.trials,
            tasks.derive_seed(config.seed, "theorem2", n),
            samples=config.samples,
            mode=config.mode,
            strategies=config.strategies,
            leak_threshold=config.leak_threshold,
            delta=config.delta,
        )
        rows.extend({"n": n, **row.model_dump(mode="json")} for row in report.rows)
        success[str(n)] = {str(k): v for k, v in report.success_fraction.items()}
    return CommandOutput(rows=rows, results={"success_fraction": success})
