# awtc/commands/router.py
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..errors import ConfigError, UnknownCommandError
from ..models import Subcommand
from ..schema import ExperimentConfig

# Set up logging
logger = logging.getLogger(__name__)


@dataclass
class CommandOutput:
    """CSV rows plus named results for the result record."""

    rows: List[Dict[str, Any]]
    results: Dict[str, Any] = field(default_factory=dict)


Handler = Callable[[ExperimentConfig], CommandOutput]


class CommandRouter:
    """Collects subcommand handlers; routers are merged with include_router."""

    def __init__(self, tags: Optional[List[str]] = None):
        self.tags = tags or []
        self.handlers: Dict[Subcommand, Handler] = {}

    def command(self, name: Subcommand) -> Callable[[Handler], Handler]:
        def decorator(fn: Handler) -> Handler:
            if name in self.handlers:
                raise ConfigError(f"duplicate handler for {name.value}")
            self.handlers[name] = fn
            return fn

        return decorator

    def include_router(self, other: "CommandRouter") -> None:
        for name, fn in other.handlers.items():
            self.command(name)(fn)

    def dispatch(self, config: ExperimentConfig) -> CommandOutput:
        handler = self.handlers.get(config.command)
        if handler is None:
            raise UnknownCommandError(f"no handler for {config.command.value}")
        logger.info(f"Running {config.command.value} with seed {config.seed}")
        output = handler(config)
        logger.info(f"{config.command.value} produced {len(output.rows)} rows")
        return output
