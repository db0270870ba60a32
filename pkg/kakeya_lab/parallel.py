"""
Worker-pool helpers on top of joblib.

Results always come back in input order, so reductions over them are
deterministic whatever the number of workers.
"""

from joblib import Parallel, delayed, cpu_count

from ._config import get_config, _env_threads


def effective_n_jobs(n_jobs=None):
    """Resolve the number of workers, honouring KAKEYA_LAB_THREADS."""
    if n_jobs is None:
        n_jobs = get_config()['n_jobs']
    if n_jobs == -1:
        n_jobs = cpu_count()
    env_cap = _env_threads()
    if env_cap is not None:
        n_jobs = min(n_jobs, env_cap)
    return max(1, int(n_jobs))


def run_parallel(func, items, n_jobs=None):
    """Apply ``func`` to every item, possibly on a pool of joblib workers.

    Parameters
    ----------
    func: callable
        A picklable callable, typically a module-level function bound with
        :func:`functools.partial`.
    items: iterable
        The work items.
    n_jobs: int, optional
        Overrides the configured number of workers.

    Returns
    -------
    results: list
        ``[func(item) for item in items]``, in input order.
    """
    items = list(items)
    n_jobs = effective_n_jobs(n_jobs)
    if n_jobs == 1 or len(items) < 2:
        return [func(item) for item in items]
    config = get_config()
    return Parallel(n_jobs=n_jobs, backend=config['backend'],
                    verbose=config['verbose'])(
        delayed(func)(item) for item in items)
