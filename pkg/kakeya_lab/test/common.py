"""
Small utilities for testing.
"""
import itertools

from kakeya_lab.gf import field_make

F2 = field_make(2)
F3 = field_make(3)
F4 = field_make(2, 2, (1, 1, 1))
F5 = field_make(5)
F7 = field_make(7)
F8 = field_make(2, 3)
F9 = field_make(3, 2)

SMALL_FIELDS = [F2, F3, F4, F5, F7, F8, F9]


def all_points(field, n):
    """Every point of F^n in lexicographic order."""
    return list(itertools.product(range(field.q), repeat=n))


def naive_eval(P, point):
    """Term-by-term evaluation with repeated multiplication."""
    field = P.field
    total = 0
    for exps, c in P.terms.items():
        term = c
        for x, e in zip(point, exps):
            for _ in range(e):
                term = field.mul(term, x)
        total = field.add(total, term)
    return total
