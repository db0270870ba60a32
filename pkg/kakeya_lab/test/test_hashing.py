"""
Test the canonical serialization and hashing of reports.
"""

import json
import subprocess
from fractions import Fraction

import numpy as np

from kakeya_lab.hashing import to_canonical, canonical_json, hash, Hasher
from kakeya_lab.geometry import Direction
from kakeya_lab.testing import raises, parametrize, PYTHON
from kakeya_lab.test.common import F3, F4


@parametrize('obj, expected', [
    (Fraction(6, 3), 2),
    (Fraction(1, 3), '1/3'),
    (np.int64(4), 4),
    (np.float64(0.5), 0.5),
    (np.bool_(True), True),
    (float('inf'), 'inf'),
    (float('-inf'), '-inf'),
    ((1, (2, 3)), [1, [2, 3]]),
    ({3, 1, 2}, [1, 2, 3]),
    ({(1, 0): 'a', (0, 1): 'b'}, [[[0, 1], 'b'], [[1, 0], 'a']]),
    (np.arange(3), [0, 1, 2]),
    (None, None),
])
def test_to_canonical(obj, expected):
    assert to_canonical(obj) == expected


def test_to_canonical_uses_to_dict():
    assert to_canonical(Direction(F3, (0, 1))) == [0, 1]
    assert to_canonical({'field': F4})['field']['q'] == 4
    with raises(TypeError):
        to_canonical(object())


def test_canonical_json():
    text = canonical_json({'b': 1, 'a': [Fraction(1, 2)]})
    assert text.endswith('\n')
    assert json.loads(text) == {'a': ['1/2'], 'b': 1}
    assert text.index('"a"') < text.index('"b"')
    assert canonical_json({'x': float('nan')}, indent=None) \
        == '{"x":"nan"}\n'


def test_hash_ignores_set_and_dict_order():
    a = {'s': {3, 1, 2}, 'd': {(1,): 1, (0,): 2}}
    b = {'d': {(0,): 2, (1,): 1}, 's': {2, 3, 1}}
    assert hash(a) == hash(b)
    assert hash(a) != hash({'s': {3, 1}, 'd': {(1,): 1, (0,): 2}})
    assert hash(a, hash_name='sha1') != hash(a)
    assert len(hash(a, hash_name='sha1')) == 40


def test_hasher_is_incremental():
    h = Hasher().update([1, 2]).update({'a': 1})
    assert h.hexdigest() == Hasher().update([1, 2]).update(
        {'a': 1}).hexdigest()
    assert h.hexdigest() != Hasher().update([1, 2]).hexdigest()


def test_hash_is_stable_across_processes():
    obj = {'seed': 3, 'values': {Fraction(1, 3), 2.5}}
    code = ('from fractions import Fraction\n'
            'from kakeya_lab.hashing import hash\n'
            "print(hash({'seed': 3, 'values': {Fraction(1, 3), 2.5}}))\n")
    out = subprocess.check_output([PYTHON, '-c', code], text=True)
    assert out.strip() == hash(obj)
