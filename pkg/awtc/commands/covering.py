# awtc/commands/covering.py
import logging
from collections import defaultdict

from ..errors import ConfigError
from ..models import CodeFamily, Subcommand
from ..schema import ExperimentConfig, TailParams
from ..softcover import divergence_tail_experiment, fit_decay_exponent
from ..storage import load_channel
from .router import CommandOutput, CommandRouter

# Set up logging
logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["softcover"])


@router.command(Subcommand.SOFTCOVER_RUN)
def softcover_run(config: ExperimentConfig) -> CommandOutput:
    """
    Divergence tail experiment over the n and k lists, uniform binary input.

    One CSV row per (k, n, trial); the per-(k, n) tail summary goes to results.
    """
    family = config.family or CodeFamily.KWISE
    if family not in (CodeFamily.KWISE, CodeFamily.IID):
        raise ConfigError(
            f"softcover-run supports kwise and iid families, not {family.value}"
        )
    channel = load_channel(config.channel)
    if channel.in_size != 2:
        raise ConfigError(
            f"softcover-run needs a binary-input channel, got {channel.describe()}"
        )
    rows = []
    summary = []
    means = defaultdict(list)
    for k in config.k:
        for n in config.n:
            if config.key_rate is None:
                keybits = config.wbits
            else:
                keybits = round(config.key_rate * n)
            params = TailParams(
                n=n,
                keybits=keybits,
                k=k,
                channel=channel,
                threshold=config.threshold,
                family=family,
                eps=config.eps,
            )
            result = divergence_tail_experiment(
                params, config.trials, config.seed, config.workers
            )
            means[k].append((n, result.mean_divergence))
            for trial, diag in enumerate(result.diagnostics):
                rows.append(
                    {
                        "n": n,
                        "trial": trial,
                        "divergence": diag.divergence,
                        "p2_mass": diag.p2_mass,
                        "delta1_max": diag.delta1_max,
                        "k": k,
                        "keybits": keybits,
                    }
                )
            summary.append(
                {
                    "n": n,
                    "k": k,
                    "keybits": keybits,
                    "trials": result.trials,
                    "probability": result.probability,
                    "mean_divergence": result.mean_divergence,
                    "stderr": result.stderr,
                }
            )
    logger.info(f"softcover-run wrote {len(rows)} trial rows over {len(summary)} runs")
    results = {
        "channel": channel.describe(),
        "family": family.value,
        "eps": config.eps,
        "threshold": config.threshold,
        "summary": summary,
    }
    exponents = {}
    for k, points in means.items():
        if len(points) >= 2 and all(mean > 0 for _, mean in points):
            ns, ms = zip(*points)
            exponents[str(k)] = fit_decay_exponent(ns, ms)
    if exponents:
        results["decay_exponent"] = exponents
    return CommandOutput(rows=rows, results=results)
