"""
Automation Module

Runs independent jobs (simulation instances) sequentially or in a process
pool and reports each outcome as a result dictionary.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Sequence

logger = logging.getLogger(__name__)


def run_task(func: Callable[[Any], Any], job: Any) -> Dict[str, Any]:
    """
    Run one job and capture its outcome.

    Args:
        func: Callable applied to the job
        job: Job description passed to func

    Returns:
        Dictionary with the task result
    """
    try:
        return {
            'success': True,
            'job': job,
            'result': func(job),
            'error': '',
        }
    except Exception as e:  # failures are reported in the result, never raised
        logger.error("Task %r failed: %s", job, e)
        return {
            'success': False,
            'job': job,
            'result': None,
            'error': f"{type(e).__name__}: {e}",
        }


def run_tasks(func: Callable[[Any], Any], jobs: Sequence[Any], max_workers: int = 1,
              continue_on_error: bool = True) -> List[Dict[str, Any]]:
    """
    Execute multiple jobs, in a process pool when max_workers > 1.

    Results come back in job order regardless of completion order. func and
    every job must be picklable when a pool is used.

    Args:
        func: Callable applied to each job
        jobs: Jobs to execute
        max_workers: Number of worker processes (1 runs inline)
        continue_on_error: Whether to continue after a failed job (inline mode)

    Returns:
        List of task results
    """
    if max_workers <= 1 or len(jobs) <= 1:
        results = []
        for job in jobs:
            result = run_task(func, job)
            results.append(result)

            if not result['success'] and not continue_on_error:
                break
        return results

    ordered: List[Dict[str, Any]] = [{}] * len(jobs)
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        futures = {pool.submit(run_task, func, job): index for index, job in enumerate(jobs)}
        for future in as_completed(futures):
            ordered[futures[future]] = future.result()
    return ordered


# Export main functions
__all__ = [
    'run_task',
    'run_tasks',
]
