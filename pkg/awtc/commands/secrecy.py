# awtc/commands/secrecy.py
import logging
from typing import List

from .. import tasks
from ..bitlinalg import dependent_column_check
from ..channel import ReadSet, enumerate_read_sets
from ..codes import (
    CosetCode,
    LinearCode,
    codebook_of,
    coset_codebook,
    dual_distance,
    linear_codebook,
    normalize_linear,
    sample_coset,
    sample_linear,
)
from ..errors import ConfigError
from ..leakage import (
    converse_attack,
    coset_leakage_lb,
    equivocation_bruteforce,
    leakage_divergence_bound,
    leakage_uniform,
    lemma1_leakage,
    ozarow_equivocation,
    sem_leakage,
)
from ..models import SearchMode, Subcommand
from ..schema import ExperimentConfig
from ..storage import load_code
from .router import CommandOutput, CommandRouter

# Set up logging
logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["secrecy"])

DEFAULT_CODE = "builtin:example-n3"


@router.command(Subcommand.LEAKAGE_EXACT)
def leakage_exact(config: ExperimentConfig) -> CommandOutput:
    """Semantic leakage of one code file, with per-read-set rows."""
    code = load_code(config.code or DEFAULT_CODE)
    results = {"code": config.code or DEFAULT_CODE}
    rank_formula = False
    if isinstance(code, LinearCode):
        normalized = normalize_linear(code)
        if isinstance(normalized, LinearCode):
            code = normalized
            rank_formula = True
        else:
            logger.warning(f"Code is not normalizable: {normalized.reason}")
            results["normalization"] = normalized.model_dump(mode="json")
    book = codebook_of(code)
    report = sem_leakage(book, config.rn, config.mode, seed=config.seed)
    results["leakage"] = report.model_dump(mode="json")

    if config.mode == SearchMode.EXHAUSTIVE:
        sets = list(enumerate_read_sets(book.n, config.rn))
    else:
        sets = [ReadSet.from_indices(book.n, report.read_set)]
    rows = []
    for s in sets:
        row = {
            "read_set": list(s.indices),
            "uniform_mi": leakage_uniform(book, s),
            "divergence_bound": leakage_divergence_bound(book, s),
        }
        if rank_formula:
            row["rank_formula"] = lemma1_leakage(code, s)
        rows.append(row)
    return CommandOutput(rows=rows, results=results)


def _linear_codes(config: ExperimentConfig) -> List[LinearCode]:
    if config.code:
        code = load_code(config.code)
        if isinstance(code, CosetCode):
            raise ConfigError("attack-linear needs a linear code file")
        if not isinstance(code, LinearCode):
            raise ConfigError("pseudolinear codes are not linear; use leakage-exact")
        return [code]
    return [
        sample_linear(
            n,
            config.mbits,
            config.wbits,
            tasks.derive_seed(config.seed, "attack-linear", i),
        )
        for i, n in enumerate(config.n)
    ]


@router.command(Subcommand.ATTACK_LINEAR)
def attack_linear(config: ExperimentConfig) -> CommandOutput:
    """Converse attack on linear codes, re-verified by exact enumeration."""
    rows = []
    for code in _linear_codes(config):
        report = converse_attack(code, config.rn)
        s = ReadSet.from_indices(code.n, report.read_set)
        verified = leakage_uniform(linear_codebook(code), s)
        certificate_ok = report.certificate is not None and dependent_column_check(
            code.g_w, report.certificate
        )
        rows.append(
            {
                "n": code.n,
                "mbits": code.mbits,
                "wbits": code.wbits,
                "rn": config.rn,
                "read_set": report.read_set,
                "leakage": report.uniform_mi,
                "verified_mi": verified,
                "certificate": report.certificate,
                "certificate_ok": certificate_ok,
                "dual_distance": report.dual_distance,
                "note": report.note,
            }
        )
    leaking = sum(row["verified_mi"] >= 1 - 1e-9 for row in rows)
    return CommandOutput(
        rows=rows, results={"codes": len(rows), "leaking_codes": leaking}
    )


@router.command(Subcommand.COSET_ATTACK)
def coset_attack(config: ExperimentConfig) -> CommandOutput:
    """Ozarow-Wyner equivocation of coset codes against brute force."""
    if config.code:
        code = load_code(config.code)
        if not isinstance(code, CosetCode):
            raise ConfigError("coset-attack needs a coset code file")
        codes = [code]
    else:
        codes = [
            sample_coset(
                n, config.mbits, tasks.derive_seed(config.seed, "coset-attack", i)
            )
            for i, n in enumerate(config.n)
        ]
    rows = []
    for code in codes:
        equivocation = ozarow_equivocation(code.h, config.rn)
        brute = equivocation_bruteforce(coset_codebook(code), config.rn)
        rows.append(
            {
                "n": code.n,
                "mbits": code.mbits,
                "rn": config.rn,
                "equivocation": equivocation,
                "equivocation_bruteforce": brute,
                "leakage_lb": coset_leakage_lb(code, config.rn),
                "dual_distance": dual_distance(code.h),
            }
        )
    mismatches = sum(
        abs(row["equivocation"] - row["equivocation_bruteforce"]) > 1e-9 for row in rows
    )
    if mismatches:
        logger.warning(
            f"{mismatches} coset codes disagree with brute-force equivocation"
        )
    return CommandOutput(
        rows=rows, results={"codes": len(rows), "mismatches": mismatches}
    )
