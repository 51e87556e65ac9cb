"""
Process-pool execution for partitioned workloads.
Tasks are partitioned by index before dispatch, so results never depend on
the number of workers.
"""

from typing import Callable, Iterable, List
import logging

from billiard import Pool

from core.config import Config

logger = logging.getLogger(__name__)


def resolve_workers(workers=None) -> int:
    if workers is None:
        return Config.get_workers()
    return max(1, int(workers))


def run_partitioned(func: Callable, tasks: Iterable, workers=None) -> List:
    """
    Run func over tasks, in a billiard process pool when more than one worker
    is requested.

    Args:
        func: Picklable module-level callable taking one task
        tasks: Task arguments, one per partition
        workers: Worker cap (None = configured default)

    Returns:
        Results in task order
    """
    tasks = list(tasks)
    workers = min(resolve_workers(workers), len(tasks)) if tasks else 1
    if workers <= 1:
        return [func(task) for task in tasks]

    logger.debug(f"Dispatching {len(tasks)} partitions to {workers} workers")
    with Pool(processes=workers) as pool:
        return pool.map(func, tasks)
