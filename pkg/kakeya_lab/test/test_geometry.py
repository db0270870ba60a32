"""
Test the finite geometry enumerators and incidence predicates.
"""

import itertools

import numpy as np

from kakeya_lab import lab_config
from kakeya_lab.geometry import (Direction, Line, KPlane, ParametricCurve,
                                 Variety, enum_directions, enum_lines,
                                 enum_kplanes, enum_points,
                                 enum_projective_points, direction_count,
                                 gaussian_binomial, line_points,
                                 lines_through, curve_points,
                                 curve_in_variety, project_curve,
                                 is_constant_after, bezout_count,
                                 conics_with_asymptote, point_index,
                                 points_array)
from kakeya_lab.gf import field_make
from kakeya_lab.polynomials import MultivariatePolynomial
from kakeya_lab.exceptions import (EnumerationTooLarge, CurveContained,
                                   DimensionMismatch, DegenerateDirection,
                                   InvalidDeclaration, BadParameters)
from kakeya_lab.testing import raises, parametrize
from kakeya_lab.test.common import F2, F3, F4, F5, F7, F9


def poly(field, n, text):
    return MultivariatePolynomial.from_string(field, n, text)


@parametrize('field, n, count', [(F3, 2, 4), (F2, 3, 7), (F5, 1, 1),
                                 (F4, 3, 21), (F9, 2, 10)])
def test_enum_directions(field, n, count):
    directions = enum_directions(field, n)
    assert len(directions) == count == direction_count(field.q, n)
    assert len(set(directions)) == count
    assert [d.rep for d in directions] == sorted(d.rep for d in directions)
    for d in directions:
        assert d.rep[d.pivot] == 1


def test_enum_directions_cap():
    with lab_config(cap_enum=100):
        with raises(EnumerationTooLarge):
            enum_directions(F7, 4)
    with raises(BadParameters):
        enum_directions(F3, 0)


def test_direction_scaling():
    for scale in range(1, 5):
        v = tuple(F5.mul(scale, x) for x in (0, 2, 3))
        assert Direction.from_vector(F5, v) == Direction(F5, (0, 1, 4))
    with raises(DegenerateDirection):
        Direction.from_vector(F5, (0, 0))


def test_line_points():
    line = Line.through(F3, (0, 0), (1, 0))
    assert line_points(line) == {(0, 0), (1, 0), (2, 0)}
    for line in enum_lines(F4, 2):
        assert len(line_points(line)) == 4


@parametrize('field', [F2, F3, F4, F5], ids=repr)
def test_line_canonical_form(field):
    for line in enum_lines(field, 2):
        points = line_points(line)
        assert line.base == min(points)
        for point in points:
            for scale in range(1, field.q):
                d = tuple(field.mul(scale, x) for x in line.direction.rep)
                other = Line.through(field, point, d)
                assert other == line
                assert Line.through(field, other.base, other.direction) \
                    == other
        assert line.points() == line.as_curve().points()


def test_lines_partition_the_plane():
    for d in enum_directions(F5, 2):
        seen = set()
        for line in enum_lines(F5, 2):
            if line.direction == d:
                assert not seen & line.points()
                seen |= line.points()
        assert len(seen) == 25
    through = lines_through(F5, (1, 2))
    assert len(through) == 6
    assert all(line.contains((1, 2)) for line in through)


def test_points_and_index():
    pts = enum_points(F3, 2)
    assert pts[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
    arr = points_array(F3, 3)
    assert np.all(point_index(F3, arr) == np.arange(27))
    projective = enum_projective_points(F3, 2)
    assert len(projective) == 9 + 4
    assert projective[-1][0] == 'infinity'


def test_enum_kplanes_counts():
    assert len(enum_kplanes(F2, 3, 2)) == 7 == gaussian_binomial(3, 2, 2)
    assert len(enum_kplanes(F3, 3, 3)) == 1
    assert len(enum_kplanes(F3, 3, 1)) == len(enum_directions(F3, 3))
    assert len(enum_kplanes(F3, 3, 2)) == gaussian_binomial(3, 2, 3) == 13
    cosets = enum_kplanes(F3, 3, 2, through_origin=False)
    assert len(cosets) == 13 * 3
    assert len(set(cosets)) == len(cosets)
    with raises(BadParameters):
        enum_kplanes(F3, 3, 4)


def test_kplane_canonical_form():
    planes = enum_kplanes(F3, 3, 2, through_origin=False)
    for plane in planes[:12]:
        points = plane.points()
        assert len(points) == 9
        for point in itertools.islice(sorted(points), 3):
            assert plane.translate(point) == plane
            assert plane.contains(point)
        vectors = [tuple(F3.add(a, b) for a, b in zip(*plane.basis)),
                   plane.basis[1]]
        respanned = KPlane.span(F3, vectors, offset=min(points))
        assert respanned == plane
    with raises(BadParameters, match='dependent'):
        KPlane.span(F3, [(1, 0, 0), (2, 0, 0)])


def test_curve_points():
    t2 = ParametricCurve.from_strings(F3, ['x1', 'x1^2'])
    points, fibers = curve_points(t2)
    assert points == {(0, 0), (1, 1), (2, 1)}
    assert sum(fibers.values()) == 3
    axis = ParametricCurve.from_strings(F5, ['x1', '0', '0'])
    assert curve_points(axis)[0] == {(t, 0, 0) for t in range(5)}
    frobenius = ParametricCurve.from_strings(F3, ['x1^3 + 2*x1', '0'])
    points, fibers = curve_points(frobenius)
    assert points == {(0, 0)}
    assert fibers == {(0, 0): 3}
    with raises(BadParameters):
        ParametricCurve.from_strings(F3, ['1', '2'])
    with raises(InvalidDeclaration):
        ParametricCurve.from_strings(F3, ['x1^2'], declared_degree=1)


def test_curve_in_variety():
    V = Variety.hyperplane(F3, 2)
    assert curve_in_variety(ParametricCurve.from_strings(F3, ['x1', '0']), V)
    parabola = ParametricCurve.from_strings(F3, ['x1', 'x1^2'])
    assert not curve_in_variety(parabola, V)
    frobenius = ParametricCurve.from_strings(F3, ['x1', 'x1^3 + 2*x1'])
    assert not curve_in_variety(frobenius, V)
    assert frobenius.points() <= V.points()
    with raises(DimensionMismatch):
        curve_in_variety(parabola, Variety.hyperplane(F3, 3))


def test_project_curve():
    twisted = ParametricCurve.from_strings(F5, ['x1', 'x1^2', 'x1^3'])
    assert project_curve(twisted, np.eye(3, dtype=np.int64)).components \
        == twisted.components
    projected = project_curve(twisted, [[1, 0, 0], [0, 1, 0]])
    assert projected.components == ParametricCurve.from_strings(
        F5, ['x1', 'x1^2']).components
    assert projected.degree <= 3
    assert is_constant_after(twisted, [[0, 0, 0]])
    with raises(DimensionMismatch):
        project_curve(twisted, [[1, 0]])


def test_project_curve_random_degrees():
    rng = np.random.default_rng(0)
    for _ in range(30):
        comps = []
        for _ in range(3):
            coeffs = rng.integers(0, 7, size=4)
            comps.append(MultivariatePolynomial(
                F7, 1, {(i,): int(c) for i, c in enumerate(coeffs)}))
        if all(g.is_constant() for g in comps):
            continue
        curve = ParametricCurve(F7, comps)
        T = rng.integers(0, 7, size=(2, 3))
        if is_constant_after(curve, T):
            continue
        image = project_curve(curve, T)
        assert max(int(g.degree) for g in image.components
                   if not g.is_zero()) <= curve.degree


def test_bezout_count():
    parabola = ParametricCurve.from_strings(F5, ['x1', 'x1^2'])
    with raises(CurveContained):
        bezout_count(parabola, poly(F5, 2, 'x2 + 4*x1^2'))
    diagonal = ParametricCurve.from_strings(F5, ['x1', 'x1'])
    assert bezout_count(diagonal, poly(F5, 2, 'x1*x2')) == 2


def test_bezout_count_random_pairs():
    rng = np.random.default_rng(1)
    for _ in range(20):
        curve = ParametricCurve(F5, [
            MultivariatePolynomial(F5, 1, {(i,): int(c) for i, c in
                                           enumerate(rng.integers(0, 5, 3))})
            for _ in range(2)] + [MultivariatePolynomial.variable(F5, 1, 0)])
        Q = MultivariatePolynomial(F5, 3, {
            tuple(int(e) for e in rng.integers(0, 3, size=3)):
            int(rng.integers(1, 5)) for _ in range(3)})
        if Q.is_zero() or Q.compose(curve.components).is_zero():
            continue
        assert bezout_count(curve, Q) <= Q.degree * curve.degree


def test_line_meets_hyperplane_at_most_once():
    H = Variety.hyperplane(F4, 2, coordinate=0, value=3)
    for line in enum_lines(F4, 2):
        if curve_in_variety(line.as_curve(), H):
            continue
        assert len(line.points() & H.points()) <= 1


def test_variety_declaration():
    V = Variety(F3, 2, ['x1^2 + x2'])
    assert len(V) == 3
    assert V.declared_degree == V.syntactic_degree == 2
    assert not V.degree_discrepancy
    W = Variety(F3, 2, ['x1^2 + x2'], declared_degree=3)
    assert W.degree_discrepancy
    # x^3 - x vanishes on all of F_3^2 but declares a single point
    with raises(InvalidDeclaration):
        Variety(F3, 2, ['x1^3 + 2*x1'], declared_degree=1, declared_dim=0)


def test_conics_with_asymptote():
    conics = conics_with_asymptote(F3, (0, 1, 0))
    by_coeffs = {c.coefficients: c for c in conics}
    # x*y + 1
    hyperbola = by_coeffs[(0, 1, 0, 0, 0, 1)]
    assert hyperbola.points() == {(1, 2), (2, 1)}
    assert hyperbola.point_count == 2
    assert all(not c.degenerate for c in conics)
    assert (0, 0, 1, 0, 0, 0) not in by_coeffs
    with_degenerate = conics_with_asymptote(F3, (0, 1, 0),
                                            include_degenerate=True)
    double_line = {c.coefficients: c for c in with_degenerate}[
        (0, 0, 1, 0, 0, 0)]
    assert double_line.degenerate
    asymptote = Direction(F3, (1, 0))
    for conic in with_degenerate:
        assert asymptote in conic.directions_at_infinity()
    with raises(EnumerationTooLarge):
        conics_with_asymptote(field_make(17), (0, 1, 0))
    with raises(DegenerateDirection):
        conics_with_asymptote(F3, (0, 0, 1))
