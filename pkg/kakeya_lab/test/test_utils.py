from kakeya_lab._utils import eval_expr, parse_count, _Sentinel
from kakeya_lab.testing import raises, parametrize


@parametrize('text, value', [('10', 10), ('10**7', 10 ** 7),
                             ('2*6', 12), ('1e3', 1000), (5, 5)])
def test_parse_count(text, value):
    assert parse_count(text) == value


@parametrize('text', ['-1', '2.5', '3/2'])
def test_parse_count_rejects(text):
    with raises(ValueError):
        parse_count(text)


def test_eval_expr_rejects_names():
    with raises(TypeError):
        eval_expr('__import__("os")')
    with raises(TypeError):
        eval_expr('x + 1')


def test_sentinel():
    assert repr(_Sentinel(default_value=4)) == 'default(4)'
    assert _Sentinel(3) == _Sentinel(3)
