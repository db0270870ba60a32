"""
Canonical serialization and cryptographic hashing of reports and run
configurations.

The digest of an object does not depend on the iteration order of the sets
and dicts it contains, nor on the Python process that computes it.
"""

import hashlib
import json
import math
import numbers
from fractions import Fraction

import numpy as np


class _ConsistentSet(object):
    """ Class used to ensure the hash of Sets is preserved
        whatever the order of its items.
    """

    def __init__(self, set_sequence):
        items = [to_canonical(e) for e in set_sequence]
        self._sequence = sorted(items, key=_sort_key)


def _sort_key(item):
    return json.dumps(item, sort_keys=True, separators=(',', ':'))


def _canonical_float(value):
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value


def to_canonical(obj):
    """Convert ``obj`` to plain JSON data with a deterministic layout.

    Sets become sorted lists, tuples become lists, Fractions become
    ``"num/den"`` strings (integral ones become ints), numpy values become
    Python values, and objects with a ``to_dict`` method are converted
    through it. Dicts with non-string keys become sorted ``[key, value]``
    pair lists.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if hasattr(obj, 'to_dict'):
        return to_canonical(obj.to_dict())
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return obj.numerator
        return '%d/%d' % (obj.numerator, obj.denominator)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        return _canonical_float(float(obj))
    if isinstance(obj, np.ndarray):
        return to_canonical(obj.tolist())
    if isinstance(obj, (set, frozenset)):
        return _ConsistentSet(obj)._sequence
    if isinstance(obj, dict):
        if all(isinstance(k, str) for k in obj):
            return {k: to_canonical(v) for k, v in obj.items()}
        pairs = [[to_canonical(k), to_canonical(v)] for k, v in obj.items()]
        return sorted(pairs, key=lambda kv: _sort_key(kv[0]))
    if isinstance(obj, (list, tuple)):
        return [to_canonical(e) for e in obj]
    raise TypeError('cannot serialize object of type %s'
                    % type(obj).__name__)


def canonical_json(obj, indent=2):
    """Return the canonical JSON text of ``obj``, newline terminated."""
    text = json.dumps(to_canonical(obj), sort_keys=True, indent=indent,
                      separators=(',', ': ') if indent else (',', ':'),
                      allow_nan=False)
    return text + '\n'


class Hasher(object):
    """ Incremental hash of canonicalized Python objects.
    """

    def __init__(self, hash_name='md5'):
        self._hash = hashlib.new(hash_name)

    def update(self, obj):
        self._hash.update(canonical_json(obj, indent=None).encode('utf-8'))
        return self

    def hexdigest(self):
        return self._hash.hexdigest()


def hash(obj, hash_name='md5'):
    """ Quick calculation of a hash to identify uniquely Python objects
        made of numbers, strings, containers, Fractions and numpy arrays.

        Parameters
        ----------
        hash_name: 'md5' or 'sha1'
            Hashing algorithm used. sha1 is supposedly safer, but md5 is
            faster.
    """
    return Hasher(hash_name=hash_name).update(obj).hexdigest()
