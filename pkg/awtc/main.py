# Standard library imports
import argparse
import hashlib
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

# Local application imports
from . import __version__
from .commands import CommandRouter, bounds, coding, covering, secrecy
from .config import settings
from .errors import handle_errors
from .models import AdversaryKind, CodeFamily, SearchMode, Subcommand
from .schema import ExperimentConfig, Provenance, ResultRecord
from .storage import write_csv_atomic, write_json_atomic

# Configure logging
logger = logging.getLogger(__name__)

# Assemble the command routers
app = CommandRouter()
app.include_router(bounds.router)
app.include_router(secrecy.router)
app.include_router(coding.router)
app.include_router(covering.router)


def build_id() -> str:
    """Package version plus a short SHA-1 of the package sources."""
    root = Path(__file__).resolve().parent
    digest = hashlib.sha1(usedforsecurity=False)
    for path in sorted(root.rglob("*.py")):
        digest.update(path.relative_to(root).as_posix().encode())
        digest.update(path.read_bytes())
    return f"{__version__}+{digest.hexdigest()[:10]}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, nargs="+")
    common.add_argument("--mbits", type=int)
    common.add_argument("--wbits", type=int)
    common.add_argument("--k", type=int, nargs="+")
    common.add_argument("--rn", type=int)
    common.add_argument("--pn", type=int)
    common.add_argument("--p", type=float)
    common.add_argument("--r", type=float)
    common.add_argument("--trials", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--channel", help="bsc:<p> or file:<path>")
    common.add_argument("--mode", choices=[m.value for m in SearchMode])
    common.add_argument("--out", help="CSV (plus .json sidecar) or JSON output path")
    common.add_argument("--code", help="code file or builtin:<name>")
    common.add_argument("--eps", type=float)
    common.add_argument("--threshold", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--leak-threshold", dest="leak_threshold", type=float)
    common.add_argument("--key-rate", dest="key_rate", type=float)
    common.add_argument("--family", choices=[f.value for f in CodeFamily])
    common.add_argument(
        "--strategy",
        dest="strategies",
        action="append",
        choices=[a.value for a in AdversaryKind],
    )
    common.add_argument("--grid-points", dest="grid_points", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--b", type=int)
    common.add_argument("--t", type=int)

    parser = argparse.ArgumentParser(
        prog="awtc", description="Adversarial wiretap code experiments"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in Subcommand:
        sub.add_parser(command.value, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {key: value for key, value in vars(args).items() if value is not None}
    return ExperimentConfig(**values)


def _resolve(path: str) -> str:
    return os.path.join(settings.OUTPUT_DIR, path)


def run(config: ExperimentConfig) -> int:
    """Dispatch one experiment and write its artifacts."""
    output = app.dispatch(config)
    record = ResultRecord(
        config=config,
        results=output.results,
        provenance=Provenance(
            build_id=build_id(), seed=config.seed, settings=settings.model_dump()
        ),
        timestamp=datetime.now(timezone.utc),
    )
    payload = record.model_dump_json(indent=2)
    if config.out is None:
        sys.stdout.write(payload + "\n")
    elif config.out.endswith(".json"):
        write_json_atomic(_resolve(config.out), payload)
    else:
        write_csv_atomic(_resolve(config.out), output.rows)
        write_json_atomic(_resolve(config.out) + ".json", payload)
    return 0


@handle_errors
def _main(argv: Optional[List[str]]) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=settings.LOG_LEVEL)
    return _main(argv)


if __name__ == "__main__":
    sys.exit(main())
