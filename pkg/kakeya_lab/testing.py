"""
Helper for testing.
"""
import sys
import re
import subprocess
import threading

import pytest
import _pytest

raises = pytest.raises
warns = pytest.warns
SkipTest = _pytest.runner.Skipped
skipif = pytest.mark.skipif
fixture = pytest.fixture
parametrize = pytest.mark.parametrize
timeout = pytest.mark.timeout
xfail = pytest.mark.xfail
param = pytest.param


def check_subprocess_call(cmd, timeout=5, stdout_regex=None,
                          stderr_regex=None, returncode=0):
    """Runs a command in a subprocess with timeout in seconds.

    A SIGTERM is sent after `timeout` and if it does not terminate, a
    SIGKILL is sent after `2 * timeout`.

    Also checks the return code, stdout if stdout_regex is set, and
    stderr if stderr_regex is set. Returns ``(stdout, stderr)``.
    """
    proc = subprocess.Popen(cmd, stdout=subprocess.PIPE,
                            stderr=subprocess.PIPE, text=True)

    def terminate():
        proc.terminate()

    def kill():
        proc.kill()

    timer_term = threading.Timer(timeout, terminate)
    timer_kill = threading.Timer(2 * timeout, kill)
    try:
        timer_term.start()
        timer_kill.start()
        stdout, stderr = proc.communicate()
        if proc.returncode == -9:
            message = (
                'Subprocess timeout after {}s.\nStdout:\n{}\n'
                'Stderr:\n{}'.format(timeout, stdout, stderr))
            raise TimeoutError(message)
        elif proc.returncode != returncode:
            message = (
                'Non-matching return code {} (expected {}).\nStdout:\n{}\n'
                'Stderr:\n{}'.format(proc.returncode, returncode, stdout,
                                     stderr))
            raise ValueError(message)

        if (stdout_regex is not None and
                not re.search(stdout_regex, stdout)):
            raise ValueError(
                "Unexpected stdout: {!r} does not match:\n{!r}".format(
                    stdout_regex, stdout))
        if (stderr_regex is not None and
                not re.search(stderr_regex, stderr)):
            raise ValueError(
                "Unexpected stderr: {!r} does not match:\n{!r}".format(
                    stderr_regex, stderr))
        return stdout, stderr

    finally:
        timer_term.cancel()
        timer_kill.cancel()


def assert_rel_close(actual, expected, rel=1e-12):
    """Assert ``actual`` equals ``expected`` to relative tolerance ``rel``."""
    assert actual == pytest.approx(expected, rel=rel, abs=1e-300), \
        '%r != %r (rel %g)' % (actual, expected, rel)


PYTHON = sys.executable
