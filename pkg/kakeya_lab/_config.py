"""
Thread-local configuration of enumeration caps, worker pools and
amplification constants.
"""

import os
import threading

from ._utils import _Sentinel
from .exceptions import BadParameters, EnumerationTooLarge

THREADS_ENV = 'KAKEYA_LAB_THREADS'

# Hard ceilings for the overridable caps.
MAX_CAP_ENUM = 10 ** 9
MAX_CAP_MATRIX = 10 ** 10

_config = threading.local()


def _env_threads():
    value = os.environ.get(THREADS_ENV)
    if value is None or value.strip() == '':
        return None
    try:
        threads = int(value)
    except ValueError:
        raise BadParameters(
            '%s must be an integer, got %r' % (THREADS_ENV, value))
    if threads < 1:
        raise BadParameters('%s must be >= 1, got %d' % (THREADS_ENV, threads))
    return threads


default_lab_config = {
    'n_jobs': _Sentinel(default_value=None),
    'backend': _Sentinel(default_value=None),
    'cap_enum': _Sentinel(default_value=10 ** 7),
    'cap_matrix': _Sentinel(default_value=10 ** 8),
    'k0': _Sentinel(default_value=4),
    'best_of': _Sentinel(default_value=16),
    'projection_attempts': _Sentinel(default_value=64),
    'verbose': _Sentinel(default_value=0),
}


def _resolve(value):
    if isinstance(value, _Sentinel):
        return value.default_value
    return value


def get_config():
    """Return a copy of the active configuration with defaults resolved."""
    config = getattr(_config, 'config', default_lab_config)
    resolved = {k: _resolve(v) for k, v in config.items()}
    if resolved['n_jobs'] is None:
        resolved['n_jobs'] = _env_threads() or 1
    return resolved


def _check_settings(settings):
    cap_enum = settings.get('cap_enum')
    if cap_enum is not None and not 1 <= cap_enum <= MAX_CAP_ENUM:
        raise BadParameters(
            'cap_enum must lie in [1, %d], got %r' % (MAX_CAP_ENUM, cap_enum))
    cap_matrix = settings.get('cap_matrix')
    if cap_matrix is not None and not 1 <= cap_matrix <= MAX_CAP_MATRIX:
        raise BadParameters('cap_matrix must lie in [1, %d], got %r'
                            % (MAX_CAP_MATRIX, cap_matrix))
    n_jobs = settings.get('n_jobs')
    if n_jobs is not None and (n_jobs == 0 or n_jobs < -1):
        raise BadParameters('n_jobs must be >= 1 or -1, got %r' % n_jobs)
    for key in ('k0', 'best_of', 'projection_attempts'):
        value = settings.get(key)
        if value is not None and value <= 0:
            raise BadParameters('%s must be positive, got %r' % (key, value))


class lab_config:
    """Set the configuration used by kakeya_lab inside a with block.

    Parameters
    ----------
    n_jobs: int, default=None
        Number of workers used by :func:`kakeya_lab.parallel.run_parallel`.
        ``-1`` uses all CPUs. When unset, the ``KAKEYA_LAB_THREADS``
        environment variable is used, else 1. The environment variable
        also caps any explicit value.
    backend: str, default=None
        joblib backend name ('loky', 'threading', ...). None lets joblib
        choose.
    cap_enum: int, default=10**7
        Largest number of elements any enumeration may produce.
    cap_matrix: int, default=10**8
        Largest number of entries of a constraint matrix.
    k0: float, default=4
        Amplification constant used by :func:`kakeya_lab.amplify.choose_M`.
    best_of: int, default=16
        Number of retries of the best-of amplification mode.
    projection_attempts: int, default=64
        Rejection-sampling budget of random surjective projections.
    verbose: int, default=0
        Verbosity passed to joblib and to progress messages.

    Examples
    --------
    >>> from kakeya_lab import lab_config, get_config
    >>> with lab_config(cap_enum=1000):
    ...     get_config()['cap_enum']
    1000
    >>> get_config()['cap_enum']
    10000000
    """

    def __init__(self, *,
                 n_jobs=default_lab_config['n_jobs'],
                 backend=default_lab_config['backend'],
                 cap_enum=default_lab_config['cap_enum'],
                 cap_matrix=default_lab_config['cap_matrix'],
                 k0=default_lab_config['k0'],
                 best_of=default_lab_config['best_of'],
                 projection_attempts=default_lab_config[
                     'projection_attempts'],
                 verbose=default_lab_config['verbose']):
        new_config = {
            'n_jobs': n_jobs,
            'backend': backend,
            'cap_enum': cap_enum,
            'cap_matrix': cap_matrix,
            'k0': k0,
            'best_of': best_of,
            'projection_attempts': projection_attempts,
            'verbose': verbose,
        }
        explicit = {k: v for k, v in new_config.items()
                    if not isinstance(v, _Sentinel)}
        _check_settings(explicit)
        self.old_lab_config = getattr(_config, 'config', default_lab_config)
        self.lab_config = self.old_lab_config.copy()
        self.lab_config.update(explicit)
        setattr(_config, 'config', self.lab_config)

    def __enter__(self):
        return get_config()

    def __exit__(self, type, value, traceback):
        self.unregister()

    def unregister(self):
        setattr(_config, 'config', self.old_lab_config)


def check_enumeration(count, what, cap=None):
    """Raise EnumerationTooLarge if ``count`` exceeds the enumeration cap."""
    if cap is None:
        cap = get_config()['cap_enum']
    if count > cap:
        raise EnumerationTooLarge(
            'enumerating %s needs %d elements, above the cap of %d'
            % (what, count, cap))
    return count
