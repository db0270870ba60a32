"""
Reading and writing point functions, point sets and reports.

Point-function files start with a header line ``p m n`` followed by rows
``x1 ... xn value``; point-set files use the same header and rows of n
coordinates with an optional integer multiplicity. Ring point-set files
start with ``ring KIND q k n``. Coordinates are element encodings. Blank
lines and ``#`` comments are ignored. Files ending in ``.json`` hold the
same data as a JSON object.
"""

import csv
import io
import json
import os

from .disk import atomic_write, read_text
from .exceptions import BadParameters, KakeyaLabError
from .gf import field_from_order, field_make
from .hashing import canonical_json
from .maximal import PointFunction
from .rings import RING_KINDS, RingSpec


def _is_json(path):
    return os.fspath(path).endswith('.json')


def _rows(path):
    """Yield ``(line_number, fields)`` for every data line of ``path``."""
    for lineno, line in enumerate(read_text(path).splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield lineno, line.split()


def _fail(path, lineno, msg):
    raise BadParameters('%s:%d: %s' % (os.fspath(path), lineno, msg))


def _ints(path, lineno, fields):
    try:
        return [int(x) for x in fields]
    except ValueError:
        _fail(path, lineno, 'expected integers, got %r' % ' '.join(fields))


def _parse_header(path, rows):
    try:
        lineno, fields = next(rows)
    except StopIteration:
        raise BadParameters('%s: empty file' % os.fspath(path))
    if len(fields) != 3:
        _fail(path, lineno, 'header must be "p m n"')
    p, m, n = _ints(path, lineno, fields)
    try:
        field = field_make(p, m)
    except KakeyaLabError as e:
        _fail(path, lineno, str(e))
    if n < 1:
        _fail(path, lineno, 'n must be >= 1')
    return field, n


def _point(path, lineno, field, values):
    for x in values:
        if not 0 <= x < field.q:
            _fail(path, lineno, '%d is not an element of F_%d' % (x, field.q))
    return tuple(values)


def _load_json(path):
    try:
        data = json.loads(read_text(path))
    except ValueError as e:
        raise BadParameters('%s: invalid JSON: %s' % (os.fspath(path), e))
    try:
        field = field_make(data['p'], data.get('m', 1), data.get('modulus'))
        n = int(data['n'])
        rows = data['values']
    except KeyError as e:
        raise BadParameters('%s: missing key %s' % (os.fspath(path), e))
    except KakeyaLabError as e:
        raise BadParameters('%s: %s' % (os.fspath(path), e))
    return field, n, [(i, row) for i, row in enumerate(rows, 1)]


def read_point_function(path):
    """Return ``(field, n, PointFunction)`` read from ``path``.

    Raises
    ------
    BadParameters
        On malformed rows, out-of-range coordinates or repeated points,
        naming the file and line.
    """
    if _is_json(path):
        field, n, rows = _load_json(path)
    else:
        rows = _rows(path)
        field, n = _parse_header(path, rows)
    values = {}
    for lineno, fields in rows:
        if len(fields) != n + 1:
            _fail(path, lineno, 'expected %d coordinates and a value' % n)
        point = _point(path, lineno, field,
                       _ints(path, lineno, fields[:n]))
        try:
            value = float(fields[n])
        except ValueError:
            _fail(path, lineno, 'bad value %r' % (fields[n],))
        if point in values:
            _fail(path, lineno, 'repeated point %r' % (point,))
        values[point] = value
    return field, n, PointFunction.from_dict(field, n, values)


def read_point_set(path):
    """Return ``(field, n, multiplicities)`` where ``multiplicities`` maps
    each listed point to its multiplicity (default 1)."""
    if _is_json(path):
        field, n, rows = _load_json(path)
    else:
        rows = _rows(path)
        field, n = _parse_header(path, rows)
    mult = {}
    for lineno, fields in rows:
        if len(fields) not in (n, n + 1):
            _fail(path, lineno, 'expected %d coordinates and an optional '
                  'multiplicity' % n)
        values = _ints(path, lineno, fields)
        point = _point(path, lineno, field, values[:n])
        if point in mult:
            _fail(path, lineno, 'repeated point %r' % (point,))
        m = values[n] if len(values) > n else 1
        if m < 0:
            _fail(path, lineno, 'negative multiplicity')
        mult[point] = m
    return field, n, mult


def read_ring_set(path):
    """Return ``(ring, n, points)`` from a ``ring KIND q k n`` file."""
    rows = _rows(path)
    try:
        lineno, fields = next(rows)
    except StopIteration:
        raise BadParameters('%s: empty file' % os.fspath(path))
    if len(fields) != 5 or fields[0] != 'ring' or fields[1] not in RING_KINDS:
        _fail(path, lineno, 'header must be "ring KIND q k n" with KIND in '
              '%s' % ', '.join(RING_KINDS))
    q, k, n = _ints(path, lineno, fields[2:])
    try:
        if fields[1] == 'zpk':
            ring = RingSpec.int_mod_pk(q, k)
        else:
            ring = RingSpec.poly_mod_xk(field_from_order(q), k)
    except KakeyaLabError as e:
        _fail(path, lineno, str(e))
    points = set()
    for lineno, fields in rows:
        if len(fields) != n:
            _fail(path, lineno, 'expected %d coordinates' % n)
        point = tuple(_ints(path, lineno, fields))
        if any(not 0 <= x < ring.size for x in point):
            _fail(path, lineno, 'coordinate outside %r' % (ring,))
        points.add(point)
    return ring, n, frozenset(points)


def format_point_function(f):
    lines = ['%d %d %d' % (f.field.p, f.field.m, f.n)]
    for point, value in sorted(f.as_dict().items()):
        lines.append(' '.join(map(str, point)) + ' ' + repr(value))
    return '\n'.join(lines) + '\n'


def format_point_set(field, n, points):
    """Point-set text; ``points`` is an iterable of points or a dict of
    multiplicities."""
    lines = ['%d %d %d' % (field.p, field.m, n)]
    if isinstance(points, dict):
        for point, m in sorted(points.items()):
            lines.append(' '.join(map(str, point)) + ' %d' % m)
    else:
        for point in sorted(set(map(tuple, points))):
            lines.append(' '.join(map(str, point)))
    return '\n'.join(lines) + '\n'


def format_ring_set(ring, n, points):
    lines = ['ring %s %d %d %d' % (ring.kind, ring.residue_size, ring.k, n)]
    for point in sorted(set(map(tuple, points))):
        lines.append(' '.join(map(str, point)))
    return '\n'.join(lines) + '\n'


def write_report(path, report):
    """Write the canonical JSON of ``report`` atomically."""
    return atomic_write(path, canonical_json(report))


def ensemble_csv(result):
    """CSV text of an ensemble: one row per trial then a summary row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['index', 'seed', 'theorem', 'ratio'])
    for index, seed, ratio in result.rows:
        writer.writerow([index, seed, result.theorem, repr(ratio)])
    stats = result.stats
    writer.writerow(['summary', result.seed, result.theorem,
                     'max=%r mean=%r' % (stats['max'], stats['mean'])])
    return buffer.getvalue()
