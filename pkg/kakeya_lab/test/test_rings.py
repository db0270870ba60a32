"""
Test arithmetic and Kakeya geometry over F_q[x]/x^k and Z/p^k.
"""

import math

import numpy as np

from kakeya_lab import lab_config
from kakeya_lab.rings import (RingSpec, ring_arith, ring_points_array,
                              ring_directions, ring_direction_count,
                              ring_line_points, ring_kakeya_check,
                              first_missing_ring_direction, RingDirection,
                              phi_embed, ring_bound_check, minkowski_dim,
                              minkowski_report, grow_random_kakeya,
                              prune_kakeya, search_small_kakeya)
from kakeya_lab.polymethod import kakeya_line_check
from kakeya_lab.exceptions import (BadParameters, DegenerateDirection,
                                   EmptySet, NonUnitDivisor, NotKakeya,
                                   UnsupportedRing)
from kakeya_lab.testing import raises, parametrize
from kakeya_lab.test.common import F2, F3


R_F2_2 = RingSpec.poly_mod_xk(F2, 2)
R_F3_2 = RingSpec.poly_mod_xk(F3, 2)
R_F2_3 = RingSpec.poly_mod_xk(F2, 3)
Z4 = RingSpec.int_mod_pk(2, 2)
Z9 = RingSpec.int_mod_pk(3, 2)
Z8 = RingSpec.int_mod_pk(2, 3)
RINGS = [R_F2_2, R_F3_2, R_F2_3, Z4, Z9, Z8]


def full_space(ring, n):
    return [tuple(p) for p in ring_points_array(ring, n).tolist()]


###############################################################################
# Arithmetic

def test_ring_examples():
    assert Z4.mul(2, 2) == 0
    assert Z4.inv(3) == 3
    # x * x = 0 in F_2[x]/x^2, and (1 + x)^2 = 1
    assert R_F2_2.mul(2, 2) == 0
    assert R_F2_2.inv(3) == 3
    assert R_F2_2.add(3, 2) == 1
    assert R_F2_2.units() == [1, 3]
    assert Z9.maximal_ideal() == [0, 3, 6]
    assert R_F3_2.valuation(3) == 1
    assert R_F3_2.valuation(0) == 2
    assert ring_arith(Z9, 4, 7, 'div') == Z9.mul(4, pow(7, -1, 9))


def test_ring_errors():
    with raises(NonUnitDivisor):
        ring_arith(Z4, 1, 2, 'div')
    with raises(NonUnitDivisor):
        R_F3_2.inv(6)
    with raises(BadParameters):
        ring_arith(Z4, 1, 2, 'pow')
    with raises(BadParameters):
        ring_arith(Z4, 4, 1, 'add')
    with raises(BadParameters):
        RingSpec('zpk', F2, 0)
    with raises(BadParameters):
        RingSpec('bad', F2, 2)


@parametrize('ring', RINGS, ids=repr)
def test_ring_axioms(ring):
    elements = range(ring.size)
    for a in elements:
        assert ring.add(a, ring.neg(a)) == 0
        assert ring.mul(a, 1) == a
        if ring.is_unit(a):
            assert ring.mul(a, ring.inv(a)) == 1
    for a in elements:
        for b in elements:
            assert ring.mul(a, b) == ring.mul(b, a)
            assert ring.sub(ring.add(a, b), b) == a
    for a, b, c in [(1, 2, 3), (3, 5 % ring.size, 7 % ring.size),
                    (ring.size - 1, 2, ring.size - 2)]:
        assert ring.mul(a, ring.add(b, c)) \
            == ring.add(ring.mul(a, b), ring.mul(a, c))
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))


def test_ring_arrays_match_scalars():
    for ring in [R_F2_3, Z9]:
        a = np.arange(ring.size)[:, None]
        b = np.arange(ring.size)[None, :]
        add, mul = ring.add_arr(a, b), ring.mul_arr(a, b)
        for x in range(ring.size):
            for y in range(ring.size):
                assert add[x, y] == ring.add(x, y)
                assert mul[x, y] == ring.mul(x, y)


###############################################################################
# Directions and lines

@parametrize('ring, n, count', [(R_F2_2, 2, 6), (Z4, 2, 6), (R_F3_2, 2, 12),
                                (Z9, 2, 12), (Z4, 3, 28)])
def test_ring_directions(ring, n, count):
    directions = ring_directions(ring, n)
    assert len(directions) == count == ring_direction_count(ring, n)
    reps = [d.rep for d in directions]
    assert reps == sorted(reps)
    for d in directions:
        assert d.rep[d.pivot] == 1
        assert all(not ring.is_unit(x) for x in d.rep[:d.pivot])


def test_ring_direction_from_vector():
    assert RingDirection.from_vector(Z4, (2, 3)).rep == (2, 1)
    assert RingDirection.from_vector(Z9, (3, 2)).rep == (6, 1)
    with raises(DegenerateDirection):
        RingDirection.from_vector(Z4, (2, 0))


def test_ring_line_points():
    line = ring_line_points(Z4, (0, 1), (1, 2))
    assert line == {(0, 1), (1, 3), (2, 1), (3, 3)}
    assert len(ring_line_points(R_F3_2, (1, 1, 1), (3, 1, 4))) == 9
    with raises(DegenerateDirection):
        ring_line_points(Z4, (0, 0), (2, 2))
    with raises(BadParameters):
        ring_line_points(Z4, (0, 0), (1,))


@parametrize('ring', [R_F2_2, Z4, Z9], ids=repr)
def test_ring_kakeya_check(ring):
    assert ring_kakeya_check(full_space(ring, 2), ring, 2)
    assert first_missing_ring_direction([], ring, 2) \
        == ring_directions(ring, 2)[0]
    line = ring_line_points(ring, (0, 0), (1, 0))
    assert not ring_kakeya_check(line, ring, 2)


###############################################################################
# The coefficient embedding

def test_phi_embed():
    emb = phi_embed(R_F2_3, 2)
    assert emb.dim == 6
    assert emb.phi((5, 2)) == (1, 0, 1, 0, 1, 0)
    assert emb.phi_inv((1, 0, 1, 0, 1, 0)) == (5, 2)
    # multiplication by x shifts coefficients
    assert emb.X.dot(np.array(emb.phi((5, 2)))).tolist() \
        == list(emb.phi((R_F2_3.mul(5, 2), R_F2_3.mul(2, 2))))
    with raises(UnsupportedRing):
        phi_embed(Z4, 2)


@parametrize('seed', [0, 1, 2])
def test_ring_bound_check(seed):
    E = grow_random_kakeya(R_F2_2, 2, seed)
    report = ring_bound_check(E, R_F2_2, 2, certify=True)
    assert report.phi_kakeya
    assert report.passed
    assert report.directions_confirmed == 2 ** 4 - 1
    assert report.dimension_bound == 5
    assert report.slice_bound == 3
    assert report.certificate.kernel_trivial
    assert kakeya_line_check(phi_embed(R_F2_2, 2).pushforward(E), F2, 4)[0]
    assert report.to_dict()['pass']


def test_ring_bound_check_corpus():
    rings = [R_F2_2, R_F3_2, R_F2_3]
    for seed in range(50):
        ring = rings[seed % len(rings)]
        E = grow_random_kakeya(ring, 2, seed)
        if seed % 2:
            E = prune_kakeya(E, ring, 2, seed)
        report = ring_bound_check(E, ring, 2)
        q, dim = ring.field.q, 2 * ring.k
        assert report.phi_kakeya
        assert report.passed
        assert report.directions_confirmed == (q ** dim - 1) // (q - 1)
        assert report.size >= report.dimension_bound >= report.slice_bound


def test_ring_bound_check_errors():
    with raises(NotKakeya):
        ring_bound_check([], R_F2_2, 2)
    with raises(UnsupportedRing):
        ring_bound_check(full_space(Z4, 2), Z4, 2)


###############################################################################
# Dimension and search

def test_minkowski_dim():
    assert math.isclose(minkowski_dim(full_space(Z4, 2), Z4), 2)
    assert math.isclose(minkowski_dim([(0, 0), (1, 1)], Z4), 0.5)
    with raises(EmptySet):
        minkowski_dim([], Z4)


def test_minkowski_report():
    family = [(RingSpec.poly_mod_xk(F2, k),
               full_space(RingSpec.poly_mod_xk(F2, k), 2)) for k in (1, 2)]
    report = minkowski_report(family, 2)
    assert [r['k'] for r in report['rows']] == [1, 2]
    assert all(math.isclose(r['dimension'], 2) for r in report['rows'])
    assert all(r['density'] == 1 for r in report['rows'])
    assert report['density_decreasing']


@parametrize('ring', [R_F2_2, Z4, Z9], ids=repr)
def test_grow_and_prune(ring):
    E = grow_random_kakeya(ring, 2, seed=3)
    assert ring_kakeya_check(E, ring, 2)
    pruned = prune_kakeya(E, ring, 2, seed=3)
    assert pruned <= E
    assert ring_kakeya_check(pruned, ring, 2)
    assert prune_kakeya(E, ring, 2, seed=3) == pruned


def test_search_small_kakeya():
    report = search_small_kakeya(R_F2_2, 2, trials=4, seed=7)
    assert report['best_size'] == min(report['sizes'])
    assert len(report['sizes']) == 4
    assert ring_kakeya_check(report['best'], R_F2_2, 2)
    assert report['best_size'] >= report['dimension_bound'] == 5
    assert search_small_kakeya(R_F2_2, 2, trials=4, seed=7) == report
    assert 'dimension_bound' not in search_small_kakeya(Z4, 2, 2, seed=0)
    with raises(BadParameters):
        search_small_kakeya(Z4, 2, 0, seed=0)


def test_search_on_a_thread_pool(threaded):
    report = search_small_kakeya(Z4, 2, trials=3, seed=1)
    with lab_config(n_jobs=1):
        assert search_small_kakeya(Z4, 2, trials=3, seed=1) == report
