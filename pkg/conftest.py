import os

import logging
import faulthandler

import pytest

from kakeya_lab import lab_config
from kakeya_lab._config import THREADS_ENV

# Importing the entry point runs the command line.
collect_ignore = ['kakeya_lab/__main__.py']


def pytest_configure(config):
    """Setup logging for the tests"""
    log = logging.getLogger('kakeya_lab')
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(
        '[%(levelname)s:%(processName)s:%(threadName)s] %(message)s'))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG)

    # Some runs hang in worker pools without hitting the per-test timeout.
    # To make sure we always get a proper trace, set a large enough
    # dump_traceback_later to kill the process with a report.
    faulthandler.dump_traceback_later(30 * 60, exit=True)

    threads = os.environ.get(THREADS_ENV)
    if threads:
        print(f"Running kakeya_lab tests with at most {threads} workers "
              f"from the {THREADS_ENV} environment variable")


def pytest_unconfigure(config):

    # Setup a global traceback printer callback to debug deadlocks that
    # would happen once pytest has completed: for instance in atexit
    # finalizers. At this point the stdout/stderr capture of pytest
    # should be disabled. Note that we cancel the global dump_traceback_later
    # to waiting for too long.
    faulthandler.cancel_dump_traceback_later()

    # Note that we also use a shorter timeout for the per-test callback
    # configured via the pytest-timeout extension.
    faulthandler.dump_traceback_later(60, exit=True)


@pytest.fixture(scope='function')
def threaded(monkeypatch):
    "Fixture running the test body on a pool of two threads"
    monkeypatch.delenv(THREADS_ENV, raising=False)
    with lab_config(n_jobs=2, backend='threading') as config:
        yield config

