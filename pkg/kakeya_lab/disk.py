"""
Disk utilities: directory creation and atomic report writes.
"""

import os
import sys
import time
import errno
import tempfile

RENAME_RETRY_TIME = 0.1
RENAME_N_RETRY = 10


def mkdirp(d):
    """Ensure directory d exists (like mkdir -p on Unix)
    No guarantee that the directory is writable.
    """
    try:
        os.makedirs(d)
    except OSError as e:
        if e.errno != errno.EEXIST:
            raise


def _rename(src, dst):
    """Replace ``dst`` by ``src``, retrying on transient Windows errors."""
    if sys.platform != 'win32':
        os.replace(src, dst)
        return
    for i in range(RENAME_N_RETRY):
        try:
            os.replace(src, dst)
            return
        except PermissionError:
            if i == RENAME_N_RETRY - 1:
                raise
            time.sleep(RENAME_RETRY_TIME)


def atomic_write(path, text, encoding='utf-8'):
    """Write ``text`` to ``path`` through a temporary file and a rename.

    Readers never observe a partially written file.
    """
    path = os.path.abspath(path)
    directory = os.path.dirname(path)
    mkdirp(directory)
    fd, tmp = tempfile.mkstemp(prefix='.' + os.path.basename(path) + '.',
                               suffix='.tmp', dir=directory)
    try:
        with os.fdopen(fd, 'w', encoding=encoding, newline='') as f:
            f.write(text)
        _rename(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def read_text(path, encoding='utf-8'):
    """Return the content of a text file."""
    with open(path, 'r', encoding=encoding) as f:
        return f.read()
