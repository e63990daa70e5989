"""Process-based fan-out for independent Monte-Carlo trials.

Worker count resolution: explicit argument, else the SPR_JOBS environment
variable, else the logical core count. Results always come back in task
order, so parallel and serial runs aggregate identically.
"""

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_jobs(jobs=None) -> int:
    if jobs is not None:
        return max(1, int(jobs))
    env = os.environ.get("SPR_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def pmap(fn, tasks, jobs=None) -> list:
    """Map fn over tasks with bounded worker processes, preserving order."""
    tasks = list(tasks)
    jobs = resolve_jobs(jobs)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    chunk = max(1, len(tasks) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))
