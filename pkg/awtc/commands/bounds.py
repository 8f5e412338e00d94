# awtc/commands/bounds.py
import logging

from ..errors import DomainError
from ..infotheory import achievable_rates, fig1_rows, linear_failure_region
from ..models import Subcommand
from ..schema import ExperimentConfig
from .router import CommandOutput, CommandRouter

# Set up logging
logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["bounds"])


@router.command(Subcommand.FIG1_DATA)
def fig1_data(config: ExperimentConfig) -> CommandOutput:
    """Capacity bounds, Plotkin and Elias-Bassalygo thresholds over an r grid."""
    rows = fig1_rows(config.p, config.grid_points)
    for row in rows:
        row["linear_fails"] = linear_failure_region(config.p, row["r"])
    results = {
        "p": config.p,
        "points": len(rows),
        "max_gap": max(row["upper"] - row["lower"] for row in rows),
        "linear_failure_points": sum(row["linear_fails"] for row in rows),
    }
    try:
        rate, key_rate = achievable_rates(config.p, config.r, config.eps, config.eps)
        results["achievable_rates"] = {
            "r": config.r,
            "message_rate": rate,
            "key_rate": key_rate,
        }
    except DomainError as e:
        logger.warning(f"Skipping achievable rates: {e}")
    return CommandOutput(rows=rows, results=results)
