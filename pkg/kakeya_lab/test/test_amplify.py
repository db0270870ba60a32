"""
Test translation amplification and projection flattening.
"""

import math
from fractions import Fraction

import numpy as np

from kakeya_lab import lab_config
from kakeya_lab.amplify import (amplify, expected_omega_size,
                                omega_statistics, choose_M,
                                translated_curve_sums, random_flat_projection,
                                extend_projection, pushforward_power,
                                pushforward_sup, flattening_check,
                                curve_fiber_bound, collision_stats,
                                exact_collision_probability, line_curves,
                                FlatProjection)
from kakeya_lab.geometry import ParametricCurve
from kakeya_lab.rng import make_rng
from kakeya_lab.exceptions import (BadParameters, DimensionMismatch,
                                   LabWarning, ZeroFunction)
from kakeya_lab.linalg import rank
from kakeya_lab.maximal import (PointFunction, curve_maximal, lp_norm,
                                random_point_function)
from kakeya_lab.testing import raises, warns, parametrize
from kakeya_lab.test.common import F2, F3, F4, F5


###############################################################################
# Amplification

def test_amplify_explicit_translations():
    f = random_point_function(F3, 3, seed=4)
    us = [(0, 0), (1, 2), (1, 2), (2, 0)]
    inst = amplify(f, [(0, 0), (1, 1)], M=None, seed=0, translations=us)
    assert inst.M == 4
    assert inst.translations == us
    assert math.isclose(lp_norm(inst.f_M, 3) ** 3, 4 * lp_norm(f, 3) ** 3,
                        rel_tol=1e-12)
    assert inst.norm_check['dominates']
    # f_M dominates every translate of f
    for u in us:
        for v in [(0, 0, 1), (2, 1, 0), (1, 1, 2)]:
            src = ((v[0] - u[0]) % 3, (v[1] - u[1]) % 3, v[2])
            assert inst.f_M(v) >= f(src) * (1 - 1e-12)
    assert inst.omega == {(0, 0), (1, 2), (2, 0), (1, 1), (0, 1)}


def test_amplify_norm_identity_over_random_instances():
    shapes = [(F2, 2), (F2, 3), (F3, 2), (F3, 3), (F5, 2)]
    for trial in range(1000):
        rng = make_rng(trial)
        field, n = shapes[trial % len(shapes)]
        f = random_point_function(field, n, seed=trial)
        size = field.q ** (n - 1)
        J = int(rng.integers(1, size + 1))
        flat = rng.choice(size, size=J, replace=False).tolist()
        anchors = [tuple(int(c) for c in np.unravel_index(i, (field.q,) *
                                                          (n - 1)))
                   for i in flat]
        M = int(rng.integers(1, 7))
        inst = amplify(f, anchors, M, seed=trial)
        assert inst.M == M
        check = inst.norm_check
        assert math.isclose(check['lhs'], check['rhs'], rel_tol=1e-12)
        assert math.isclose(lp_norm(inst.f_M, n) ** n,
                            M * lp_norm(f, n) ** n, rel_tol=1e-12)
        assert len(inst.omega) <= min(M * J, size)


def test_amplify_is_reproducible():
    f = random_point_function(F5, 2, seed=1)
    a = amplify(f, [(0,), (3,)], 6, seed=11)
    b = amplify(f, [(0,), (3,)], 6, seed=11)
    assert a.translations == b.translations
    assert np.array_equal(a.f_M.values, b.f_M.values)
    assert a.to_dict()['M'] == 6


def test_amplify_best_of():
    f = random_point_function(F3, 3, seed=2)
    anchors = [(0, 0), (0, 1)]
    plain = amplify(f, anchors, 3, seed=5)
    best = amplify(f, anchors, 3, seed=5, mode='best_of', retries=8)
    # the first draw of best_of is the random draw
    assert len(best.omega) >= len(plain.omega)
    with lab_config(best_of=1):
        single = amplify(f, anchors, 3, seed=5, mode='best_of')
    assert single.translations == plain.translations


def test_amplify_errors():
    f = random_point_function(F3, 2, seed=0)
    with raises(BadParameters):
        amplify(f, [(0,)], 0, seed=0)
    with raises(BadParameters):
        amplify(f, [(0,), (0,)], 2, seed=0)
    with raises(BadParameters, match='mode'):
        amplify(f, [(0,)], 2, seed=0, mode='greedy')
    with raises(DimensionMismatch):
        amplify(f, [(0, 1)], 2, seed=0)
    with raises(DimensionMismatch):
        amplify(f, [(0,)], None, seed=0, translations=[])


def test_omega_statistics():
    assert math.isclose(expected_omega_size(1, 1, 3, 3), 1)
    assert math.isclose(expected_omega_size(2, 3, 3, 3),
                        9 * (1 - (7 / 9) ** 3))
    stats = omega_statistics(F3, 3, [(0, 0), (1, 2)], 3, 400, seed=3)
    assert abs(stats['mean'] - stats['expected']) < 0.5
    assert stats['scale'] == 6
    again = omega_statistics(F3, 3, [(0, 0), (1, 2)], 3, 400, seed=3)
    assert again == stats
    with raises(BadParameters):
        omega_statistics(F3, 3, [(0, 0)], 3, 0, seed=3)


@parametrize('field, n, anchors, M',
             [(F3, 3, [(0, 0)], 4),
              (F3, 3, [(0, 0), (1, 2), (2, 1)], 3),
              (F5, 2, [(0,), (2,)], 2),
              (F4, 3, [(0, 0), (1, 1)], 10)])
def test_omega_size_band(field, n, anchors, M):
    stats = omega_statistics(field, n, anchors, M, 200, seed=n * field.q)
    scale = min(M * len(anchors), field.q ** (n - 1))
    assert stats['scale'] == scale
    assert 0.2 * scale <= stats['mean'] <= scale
    assert 0.2 * scale <= stats['expected'] <= scale
    assert abs(stats['mean'] - stats['expected']) < 0.25 * scale


def test_choose_M():
    f = PointFunction.constant(F3, 2)
    choice = choose_M(24.0, f, K0=4)
    assert (choice.M, choice.clamped) == (4, False)
    assert choice.raw == 4.0
    with warns(LabWarning):
        choice = choose_M(1.0, f)
    assert (choice.M, choice.clamped) == (1, True)
    with raises(ZeroFunction):
        choose_M(1.0, PointFunction.zeros(F3, 2))


def test_translated_curve_sums():
    f = random_point_function(F4, 2, seed=8)
    inst = amplify(f, [(0,), (1,)], 3, seed=2)
    curves = line_curves(F4, 2)[:5]
    rows = translated_curve_sums(inst, f, curves)
    assert len(rows) == 15
    for _, _, original, translated in rows:
        assert translated >= original * (1 - 1e-12)


###############################################################################
# Flattening

def test_random_flat_projection():
    proj = random_flat_projection(F3, 4, 3, seed=6)
    assert proj.T.shape == (2, 3)
    assert rank(F3, proj.T) == 2
    assert (proj.N, proj.n) == (4, 3)
    assert proj.T_hat[-1].tolist() == [0, 0, 0, 1]
    assert not proj.fallback
    again = random_flat_projection(F3, 4, 3, seed=6)
    assert np.array_equal(proj.T, again.T)
    square = random_flat_projection(F2, 3, 3, seed=1)
    assert rank(F2, square.T) == 2
    with raises(BadParameters):
        random_flat_projection(F3, 2, 3, seed=0)


def test_random_flat_projection_fallback():
    with warns(LabWarning, match='coordinate projection'):
        proj = random_flat_projection(F3, 4, 2, seed=0, attempts=0)
    assert proj.fallback
    assert proj.T.tolist() == [[1, 0, 0]]


def test_extend_projection():
    T_hat = extend_projection([[1, 2]])
    assert T_hat.tolist() == [[1, 2, 0], [0, 0, 1]]


@parametrize('field, N, n', [(F2, 4, 2), (F3, 3, 2), (F3, 4, 3),
                             (F4, 3, 2)])
def test_pushforward_power_keeps_the_norm(field, N, n):
    f = random_point_function(field, N, seed=N + n)
    proj = random_flat_projection(field, N, n, seed=1)
    f_T = pushforward_power(f, proj)
    assert f_T.n == n
    assert math.isclose(lp_norm(f_T, n), lp_norm(f.flat, n), rel_tol=1e-12)
    with raises(DimensionMismatch):
        pushforward_power(random_point_function(field, n, seed=0), proj)


def test_pushforward_sup():
    proj = FlatProjection(F3, np.array([[1, 1]]),
                          extend_projection([[1, 1]]), seed=0)
    g = {(0, 0): 1.0, (1, 2): 5.0, (2, 1): 2.0, (1, 0): 0.5}
    out = pushforward_sup(g, proj)
    assert out == {(0,): 5.0, (1,): 0.5, (2,): 0.0}
    assert pushforward_sup(g, proj, W=[(0, 0)]) == {(0,): 1.0, (1,): 0.0,
                                                    (2,): 0.0}


@parametrize('field, N, n', [(F2, 3, 2), (F3, 3, 2), (F2, 4, 3)])
def test_flattening_check(field, N, n):
    for seed in range(3):
        f = random_point_function(field, N, seed=seed)
        proj = random_flat_projection(field, N, n, seed=seed)
        report = flattening_check(f, proj)
        assert report.ok
        assert report.max_ratio <= 1 + 1e-6
        assert len(report.g_T) == field.q ** (n - 1)


def test_flattening_check_restricted():
    f = random_point_function(F3, 3, seed=0)
    proj = random_flat_projection(F3, 3, 2, seed=0)
    W = [(0, 0), (2, 1)]
    report = flattening_check(f, proj, W)
    g = curve_maximal(f)
    for y, value in report.g_T.items():
        images = [w for w in W if tuple(proj.apply_base(w).tolist()) == y]
        assert value == max([g[w] for w in images], default=0.0)


def test_curve_fiber_bound():
    proj = random_flat_projection(F3, 3, 2, seed=2)
    sizes = {curve_fiber_bound(c, proj) for c in line_curves(F3, 3)}
    assert sizes <= {None, 1}
    assert 1 in sizes


@parametrize('texts',
             [['x1', 'x1^2', 'x1^2 + 2*x1', '3*x1^2 + 1'],
              ['x1^2', '4*x1', '0', 'x1^2 + x1'],
              ['x1^3', 'x1', 'x1^2', 'x1^3 + x1'],
              ['x1^3 + 2', 'x1^2', 'x1^3', 'x1']])
def test_curve_fiber_bound_higher_degree(texts):
    curve = ParametricCurve.from_strings(F5, texts)
    assert curve.degree >= 2
    sizes = []
    for seed in range(20):
        for n in [2, 3]:
            proj = random_flat_projection(F5, 4, n, seed=seed)
            sizes.append(curve_fiber_bound(curve, proj))
    bounded = [s for s in sizes if s is not None]
    assert bounded
    assert max(bounded) <= curve.degree


def test_collision_stats_full_plane():
    omega = [(a, b) for a in range(3) for b in range(3)]
    stats = collision_stats(omega, F3, 2, trials=10, seed=0)
    # every surjection F^2 -> F splits F^2 into three fibers of size three
    assert stats['mean'] == 18
    assert stats['bound'] == 27
    assert stats['pass']
    assert stats['image_success'] == 1.0
    with raises(BadParameters):
        collision_stats([], F3, 2, trials=1, seed=0)


def test_exact_collision_probability():
    assert exact_collision_probability((0, 0), (1, 0), F3, 2) \
        == Fraction(1, 4)
    assert exact_collision_probability((0, 1), (1, 1), F2, 2) \
        == Fraction(1, 3)
    assert exact_collision_probability((1, 2), (1, 2), F3, 2) == 1


def test_line_curves():
    assert len(line_curves(F2, 2)) == 6
    assert len(line_curves(F3, 2)) == 12
