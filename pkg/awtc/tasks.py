# awtc/tasks.py
import asyncio
import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional

import numpy as np

from .config import settings

# Set up logging
logger = logging.getLogger(__name__)


def derive_seed(seed: int, tag: str, index: int) -> int:
    """
    Seed for one trial, derived from (user seed, experiment tag, trial index).

    The three parts feed numpy's SeedSequence, so distinct tags or indices
    give statistically independent streams whatever order trials run in.
    """
    sequence = np.random.SeedSequence([seed, zlib.crc32(tag.encode()), index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


async def run_trials_async(
    fn: Callable[[Any], Any],
    count: int,
    seed: int,
    tag: str,
    workers: int,
    payload: Any = None,
) -> List[Any]:
    """Fan trials out to a process pool and gather them in trial order."""
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            loop.run_in_executor(pool, fn, (payload, derive_seed(seed, tag, i)))
            for i in range(count)
        ]
        return list(await asyncio.gather(*futures))


def run_trials(
    fn: Callable[[Any], Any],
    count: int,
    seed: int,
    tag: str,
    workers: Optional[int] = None,
    payload: Any = None,
) -> List[Any]:
    """
    Run fn((payload, trial_seed)) for trial indices 0..count-1.

    Results come back ordered by trial index, so aggregates do not depend
    on the worker count. fn must be a module-level function when workers > 1.
    """
    workers = settings.WORKERS if workers is None else workers
    logger.info(f"Running {count} trials for {tag} on {max(workers, 1)} worker(s)")
    if workers <= 1 or count <= 1:
        return [fn((payload, derive_seed(seed, tag, i))) for i in range(count)]
    return asyncio.run(run_trials_async(fn, count, seed, tag, workers, payload))
