"""
Logging and timing of experiments.

Library modules log through ``logging.getLogger('kakeya_lab.<module>')``;
nothing is shown until :func:`configure_logging` attaches a handler. Long
running solvers derive from :class:`Logger` so that their messages carry
the class name. :class:`PrintTime` reports elapsed wall time per stage on
stderr, for the ``--timing`` flag of the command line.
"""

# License: BSD Style, 3 clauses.

import logging
import os
import pprint
import shutil
import sys
import time

from .disk import mkdirp

LOG_FORMAT = '[%(levelname)s:%(name)s] %(message)s'

_LEVELS = {0: logging.WARNING, 1: logging.INFO}

# Rotated timing logs kept next to the current one.
N_ROTATED_LOGS = 9


def format_time(t):
    """Human-readable duration, e.g. ``'2.50 s'`` or ``'1.5 min'``."""
    return '%.1f min' % (t / 60.) if t > 60 else '%.2f s' % t


def short_format_time(t):
    """Compact duration, e.g. ``'2.5s'`` or ``'1.5m'``."""
    return '%.1fm' % (t / 60.) if t > 60 else '%.1fs' % t


def configure_logging(verbosity=0, stream=None):
    """Attach a stderr handler to the ``kakeya_lab`` logger.

    ``verbosity`` 0 keeps warnings only, 1 enables INFO and 2 or more DEBUG.
    Calling it again replaces the previous handler.
    """
    root = logging.getLogger('kakeya_lab')
    for handler in [h for h in root.handlers
                    if getattr(h, '_kakeya_lab_handler', False)]:
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr if stream is None else stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._kakeya_lab_handler = True
    root.addHandler(handler)
    root.setLevel(_LEVELS.get(max(verbosity, 0), logging.DEBUG))
    return root


class Logger(object):
    """Mixin for classes whose progress messages name the class.

    Parameters
    ----------
    depth: int, optional
        Nesting depth shown by :meth:`format`.
    name: str, optional
        Logger to write to, ``'kakeya_lab'`` by default.
    """

    def __init__(self, depth=3, name=None):
        self.depth = depth
        self._name = name or 'kakeya_lab'

    def _log(self, level, msg):
        logging.getLogger(self._name).log(level, '[%s]: %s' % (self, msg))

    def warn(self, msg):
        self._log(logging.WARNING, msg)

    def info(self, msg):
        self._log(logging.INFO, msg)

    def debug(self, msg):
        self._log(logging.DEBUG, msg)

    def format(self, obj, indent=0):
        """``pprint`` representation of ``obj`` cut at ``self.depth``."""
        return ' ' * indent + pprint.pformat(obj, depth=self.depth)

    def __str__(self):
        return type(self).__name__


def _rotate(logfile):
    """Shift ``logfile.1`` .. ``logfile.8`` up by one and copy the current
    log to ``logfile.1``. Missing files are skipped."""
    for i in range(N_ROTATED_LOGS - 1, 0, -1):
        try:
            shutil.move('%s.%d' % (logfile, i), '%s.%d' % (logfile, i + 1))
        except OSError:
            pass
    try:
        shutil.copy(logfile, logfile + '.1')
    except OSError:
        pass


class PrintTime(object):
    """Print the wall time of each stage of a run on stderr.

    With ``logfile`` (or ``logdir``, which uses ``kakeya_lab.log`` inside
    it) the lines are also appended to a log file; an existing log is
    rotated first.
    """

    def __init__(self, logfile=None, logdir=None):
        if logfile is not None and logdir is not None:
            raise ValueError('Cannot specify both logfile and logdir')
        if logdir is not None:
            logfile = os.path.join(logdir, 'kakeya_lab.log')
        self.logfile = logfile
        self.start_time = self.last_time = time.time()
        if logfile is None:
            return
        mkdirp(os.path.dirname(os.path.abspath(logfile)))
        if os.path.exists(logfile):
            _rotate(logfile)
        header = '\nkakeya_lab run\n\n---%s---' % time.ctime(self.start_time)
        self._append(header, mode='w')

    def _append(self, text, mode='a'):
        try:
            with open(self.logfile, mode) as f:
                print(text, file=f)
        except OSError:
            pass

    def __call__(self, msg='', total=False):
        """Report the time since the previous call, or since creation when
        ``total`` is set."""
        now = time.time()
        if total:
            lapse = now - self.start_time
            line = '%s: %.2fs, %.1f min' % (msg, lapse, lapse / 60)
        else:
            line = '%s: %s' % (msg, format_time(now - self.last_time))
        print(line, file=sys.stderr)
        if self.logfile is not None:
            self._append(line)
        self.last_time = time.time()
