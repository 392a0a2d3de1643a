"""
Restart Executor
Runs seeded, independent restarts on a thread pool
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np
from loguru import logger

T = TypeVar("T")


def restart_rng(seed: int, tag: Sequence[int], index: int) -> np.random.Generator:
    """
    Generator for one restart

    Args:
        seed: Run seed
        tag: Integers identifying the computation (level, stage, ...)
        index: Restart index

    Returns:
        Independent numpy Generator
    """
    entropy = [int(seed) & 0xFFFFFFFF] + [int(t) & 0xFFFFFFFF for t in tag] + [int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


class RestartExecutor:
    """
    Executes restarts concurrently and returns them in restart order
    """

    def __init__(self, max_workers: int = 1):
        """
        Initialize executor

        Args:
            max_workers: Maximum number of worker threads (1 runs inline)
        """
        self.max_workers = max(1, int(max_workers))

    def run(
        self,
        task: Callable[[np.random.Generator, int], T],
        restarts: int,
        seed: int,
        tag: Sequence[int] = ()
    ) -> List[T]:
        """
        Run all restarts of a task

        Args:
            task: Callable receiving (rng, restart index)
            restarts: Number of restarts
            seed: Run seed
            tag: Integers identifying the computation

        Returns:
            Results ordered by restart index
        """
        rngs = [restart_rng(seed, tag, i) for i in range(restarts)]

        if self.max_workers == 1 or restarts <= 1:
            return [task(rng, i) for i, rng in enumerate(rngs)]

        with ThreadPoolExecutor(max_workers=min(self.max_workers, restarts)) as pool:
            futures = [pool.submit(task, rng, i) for i, rng in enumerate(rngs)]
            results = [f.result() for f in futures]

        logger.debug(f"Completed {restarts} restarts on {self.max_workers} workers")
        return results
