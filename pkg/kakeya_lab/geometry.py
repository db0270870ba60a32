"""
Finite geometry over F_q: points, directions, lines, k-planes, parametric
curves, varieties given by equations, and conics with a prescribed
asymptote.

Points are tuples of element encodings; "lexicographic order" is Python tuple
order on those encodings. All enumerators are deterministic.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ._config import check_enumeration
from .exceptions import (BadParameters, CurveContained, DegenerateDirection,
                         DimensionMismatch, EnumerationTooLarge,
                         InternalCheckFailure, InvalidDeclaration)
from .gf import FieldSpec
from .linalg import row_reduce
from .polynomials import MultivariatePolynomial, root_multiplicity

logger = logging.getLogger(__name__)

# Ceiling on the number of subspaces enumerated by enum_kplanes.
MAX_GRASSMANNIAN = 10 ** 6
# Largest field accepted by conics_with_asymptote.
MAX_CONIC_FIELD = 16


###############################################################################
# Points

def enum_points(field, n):
    """All points of F^n in lexicographic order."""
    check_enumeration(field.q ** n, 'F_%d^%d' % (field.q, n))
    return list(itertools.product(range(field.q), repeat=n))


def points_array(field, n):
    """All points of F^n as an int64 array of shape (q**n, n), lex order."""
    size = check_enumeration(field.q ** n, 'F_%d^%d' % (field.q, n))
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    coords = np.unravel_index(np.arange(size, dtype=np.int64),
                              (field.q,) * n)
    return np.stack(coords, axis=-1).astype(np.int64)


def point_index(field, points):
    """Position of each point (rows of ``points``) in lexicographic order."""
    points = np.asarray(points, dtype=np.int64)
    if points.ndim == 1:
        points = points[None, :]
    n = points.shape[-1]
    index = np.zeros(points.shape[:-1], dtype=np.int64)
    for i in range(n):
        index = index * field.q + points[..., i]
    return index


def gaussian_binomial(n, k, q):
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def _check_point(field, point, n=None):
    point = tuple(field.check(x) for x in point)
    if n is not None and len(point) != n:
        raise DimensionMismatch('point %r has %d coordinates, expected %d'
                                % (point, len(point), n))
    return point


###############################################################################
# Directions and lines

@dataclass(frozen=True)
class Direction:
    """A point of P^(n-1)(F): a nonzero vector up to scaling, stored with
    its first nonzero coordinate equal to 1."""
    field: FieldSpec
    rep: tuple

    @classmethod
    def from_vector(cls, field, vector):
        vector = tuple(field.check(x) for x in vector)
        for x in vector:
            if x:
                inv = field.inv(x)
                return cls(field, tuple(field.mul(y, inv) for y in vector))
        raise DegenerateDirection('the zero vector has no direction')

    @property
    def n(self):
        return len(self.rep)

    @property
    def pivot(self):
        """Index of the leading 1."""
        return next(i for i, x in enumerate(self.rep) if x)

    def sort_key(self):
        return self.rep

    def to_dict(self):
        return list(self.rep)

    def __repr__(self):
        return 'Direction(%r)' % (self.rep,)


def direction_count(q, n):
    return (q ** n - 1) // (q - 1)


def enum_directions(field, n):
    """All directions of F^n in lexicographic order of their
    representatives.

    Raises
    ------
    EnumerationTooLarge
    """
    if n < 1:
        raise BadParameters('directions need n >= 1, got %d' % n)
    check_enumeration(direction_count(field.q, n),
                      'directions of F_%d^%d' % (field.q, n))
    out = []
    for i in range(n - 1, -1, -1):
        for tail in itertools.product(range(field.q), repeat=n - 1 - i):
            out.append(Direction(field, (0,) * i + (1,) + tail))
    return out


@dataclass(frozen=True)
class Line:
    """An affine line ``{base + t * direction}``.

    ``base`` is the lexicographically least point of the line, which is the
    point whose coordinate at the direction's pivot is 0. Build lines with
    :meth:`through`.
    """
    field: FieldSpec
    base: tuple
    direction: Direction

    @classmethod
    def through(cls, field, point, direction):
        if not isinstance(direction, Direction):
            direction = Direction.from_vector(field, direction)
        point = _check_point(field, point, direction.n)
        s = point[direction.pivot]
        base = tuple(field.sub(x, field.mul(s, d))
                     for x, d in zip(point, direction.rep))
        return cls(field, base, direction)

    @property
    def n(self):
        return len(self.base)

    def parametrize(self, t):
        f = self.field
        return tuple(f.add(b, f.mul(t, d))
                     for b, d in zip(self.base, self.direction.rep))

    def points_list(self):
        return [self.parametrize(t) for t in range(self.field.q)]

    def points(self):
        return frozenset(self.points_list())

    def points_array(self):
        t = np.arange(self.field.q, dtype=np.int64)[:, None]
        d = np.asarray(self.direction.rep, dtype=np.int64)[None, :]
        b = np.asarray(self.base, dtype=np.int64)[None, :]
        return self.field.add_arr(b, self.field.mul_arr(t, d))

    def contains(self, point):
        point = tuple(point)
        return Line.through(self.field, point, self.direction) == self

    def as_curve(self):
        return ParametricCurve.line(self.field, self.base, self.direction.rep)

    def sort_key(self):
        return (self.direction.rep, self.base)

    def to_dict(self):
        return {'base': list(self.base), 'dir': list(self.direction.rep)}

    def __repr__(self):
        return 'Line(base=%r, dir=%r)' % (self.base, self.direction.rep)


def line_points(line):
    """The q points of ``line``."""
    return line.points()


def direction_line_coords(field, direction):
    """Points of every line with the given direction.

    Returns an int64 array of shape (q**(n-1), q, n): entry ``[j, t]`` is the
    point at parameter t on the j-th line, lines in canonical order.
    """
    bases = direction_line_bases(field, direction)
    t = np.arange(field.q, dtype=np.int64)[None, :, None]
    d = np.asarray(direction.rep, dtype=np.int64)[None, None, :]
    return field.add_arr(bases[:, None, :], field.mul_arr(t, d))


def direction_line_bases(field, direction):
    others = points_array(field, direction.n - 1)
    return np.insert(others, direction.pivot, 0, axis=1)


def enum_lines(field, n):
    """Every line of F^n, sorted by (direction, base)."""
    directions = enum_directions(field, n)
    check_enumeration(len(directions) * field.q ** (n - 1),
                      'lines of F_%d^%d' % (field.q, n))
    out = []
    for d in directions:
        for base in direction_line_bases(field, d):
            out.append(Line(field, tuple(int(x) for x in base), d))
    return out


def lines_through(field, point):
    """One line per direction through ``point``, in direction order."""
    point = tuple(point)
    return [Line.through(field, point, d)
            for d in enum_directions(field, len(point))]


def enum_projective_points(field, n):
    """P^n(F) as F^n followed by the hyperplane at infinity.

    Returns ``(chart, coordinates)`` pairs with chart ``'affine'`` or
    ``'infinity'``; points at infinity are direction representatives.
    """
    out = [('affine', p) for p in enum_points(field, n)]
    out.extend(('infinity', d.rep) for d in enum_directions(field, n))
    return out


###############################################################################
# k-planes

@dataclass(frozen=True)
class KPlane:
    """An affine k-plane ``offset + span(basis)``.

    ``basis`` is in reduced row echelon form and ``offset`` is zero at the
    pivot coordinates, so equal cosets have equal representations.
    """
    field: FieldSpec
    basis: tuple
    offset: tuple

    @classmethod
    def span(cls, field, vectors, offset=None):
        vectors = [tuple(field.check(x) for x in v) for v in vectors]
        if not vectors:
            raise BadParameters('a k-plane needs at least one vector')
        n = len(vectors[0])
        R, pivots = row_reduce(field, vectors)
        if len(pivots) != len(vectors):
            raise BadParameters('spanning vectors are linearly dependent')
        basis = tuple(tuple(int(x) for x in row) for row in R[:len(pivots)])
        if offset is None:
            offset = (0,) * n
        offset = cls._reduce(field, basis, pivots,
                             _check_point(field, offset, n))
        return cls(field, basis, offset)

    @staticmethod
    def _reduce(field, basis, pivots, point):
        point = list(point)
        for row, c in zip(basis, pivots):
            s = point[c]
            if s:
                point = [field.sub(x, field.mul(s, r))
                         for x, r in zip(point, row)]
        return tuple(point)

    @property
    def k(self):
        return len(self.basis)

    @property
    def n(self):
        return len(self.offset)

    @property
    def pivots(self):
        return tuple(next(i for i, x in enumerate(row) if x)
                     for row in self.basis)

    def direction(self):
        """The subspace parallel to this plane."""
        return KPlane(self.field, self.basis, (0,) * self.n)

    def translate(self, point):
        """The coset through ``point`` parallel to this plane."""
        return KPlane(self.field, self.basis,
                      self._reduce(self.field, self.basis, self.pivots,
                                   _check_point(self.field, point, self.n)))

    def contains(self, point):
        return self.translate(point) == self

    def points_array(self):
        field = self.field
        coeffs = points_array(field, self.k)
        out = np.broadcast_to(np.asarray(self.offset, dtype=np.int64),
                              (len(coeffs), self.n)).copy()
        for i, row in enumerate(self.basis):
            out = field.add_arr(out, field.mul_arr(
                coeffs[:, i][:, None], np.asarray(row, dtype=np.int64)))
        return out

    def points(self):
        return frozenset(tuple(int(x) for x in p)
                         for p in self.points_array())

    def sort_key(self):
        return (self.basis, self.offset)

    def to_dict(self):
        return {'echelon_basis': [list(row) for row in self.basis],
                'offset': list(self.offset)}


def _echelon_forms(field, n, k):
    q = field.q
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        slots = [(i, j) for i, c in enumerate(pivots)
                 for j in range(c + 1, n) if j not in pivot_set]
        for values in itertools.product(range(q), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(slots, values):
                rows[i][j] = v
            yield pivots, tuple(tuple(r) for r in rows)


def enum_kplanes(field, n, k, through_origin=True):
    """Every k-dimensional subspace of F^n, or every coset of one when
    ``through_origin`` is false.

    Raises
    ------
    EnumerationTooLarge
    """
    if not 1 <= k <= n:
        raise BadParameters('need 1 <= k <= n, got k=%d, n=%d' % (k, n))
    count = gaussian_binomial(n, k, field.q)
    if count > MAX_GRASSMANNIAN:
        raise EnumerationTooLarge('Gr(F_%d^%d, %d) has %d elements, above %d'
                                  % (field.q, n, k, count, MAX_GRASSMANNIAN))
    total = count if through_origin else count * field.q ** (n - k)
    check_enumeration(total, 'k-planes of F_%d^%d' % (field.q, n))
    out = []
    for pivots, basis in _echelon_forms(field, n, k):
        if through_origin:
            out.append(KPlane(field, basis, (0,) * n))
            continue
        free = [j for j in range(n) if j not in pivots]
        for values in itertools.product(range(field.q), repeat=len(free)):
            offset = [0] * n
            for j, v in zip(free, values):
                offset[j] = v
            out.append(KPlane(field, basis, tuple(offset)))
    return out


###############################################################################
# Parametric curves

class ParametricCurve(object):
    """The image of the affine line under ``t -> (g_1(t), ..., g_n(t))``.

    Parameters
    ----------
    field: FieldSpec
    components: sequence of MultivariatePolynomial
        Univariate polynomials, not all constant.
    declared_degree: int, optional
        Defaults to the largest component degree; may not be smaller.
    """

    def __init__(self, field, components, declared_degree=None):
        components = tuple(components)
        if not components:
            raise BadParameters('a curve needs at least one component')
        for g in components:
            if g.n_vars != 1 or g.field != field:
                raise DimensionMismatch('curve components must be univariate '
                                        'polynomials over %r' % (field,))
        if all(g.is_constant() for g in components):
            raise BadParameters('all components of the curve are constant')
        degree = max(int(g.degree) for g in components if not g.is_zero())
        if declared_degree is None:
            declared_degree = degree
        elif declared_degree < degree:
            raise InvalidDeclaration('declared degree %d is below the '
                                     'component degree %d'
                                     % (declared_degree, degree))
        self.field = field
        self.components = components
        self.declared_degree = int(declared_degree)

    @classmethod
    def from_strings(cls, field, texts, declared_degree=None):
        """Build a curve from component texts in the variable ``x1``
        (read as t)."""
        return cls(field, [MultivariatePolynomial.from_string(field, 1, s)
                           for s in texts], declared_degree)

    @classmethod
    def line(cls, field, base, direction):
        comps = [MultivariatePolynomial(field, 1, {(0,): b, (1,): d})
                 for b, d in zip(base, direction)]
        return cls(field, comps)

    @property
    def n(self):
        return len(self.components)

    @property
    def degree(self):
        return self.declared_degree

    def evaluate(self, t):
        return tuple(g.evaluate((t,)) for g in self.components)

    def image_array(self):
        """Array of shape (q, n) whose row t is the point at parameter t."""
        return np.stack([g.evaluate_all() for g in self.components], axis=-1)

    def fibers(self):
        """Map from image point to the number of parameters hitting it."""
        out = {}
        for row in self.image_array():
            key = tuple(int(x) for x in row)
            out[key] = out.get(key, 0) + 1
        return out

    def points(self):
        return frozenset(self.fibers())

    def __eq__(self, other):
        return (isinstance(other, ParametricCurve)
                and self.components == other.components)

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return 'ParametricCurve(%s)' % ', '.join(str(g)
                                                 for g in self.components)

    def to_dict(self):
        return {'components': [str(g) for g in self.components],
                'degree': self.declared_degree}


def curve_points(curve):
    """Return ``(points, fibers)`` for ``curve``: the image point set and the
    size of the parameter fiber above each image point."""
    fibers = curve.fibers()
    return frozenset(fibers), fibers


###############################################################################
# Varieties

class Variety(object):
    """The common zero set in F^n of explicit polynomials.

    Dimension and degree are declared metadata. The declaration is checked
    against the point count bound ``|V(F)| <= degree * (q + 1)**dim``.

    Raises
    ------
    InvalidDeclaration
    """

    def __init__(self, field, n, polys, declared_dim=None,
                 declared_degree=None):
        polys = [MultivariatePolynomial.from_string(field, n, P)
                 if isinstance(P, str) else P for P in polys]
        for P in polys:
            if P.n_vars != n or P.field != field:
                raise DimensionMismatch('defining polynomial %s does not live '
                                        'in F_%d^%d' % (P, field.q, n))
        self.field = field
        self.n = n
        self.polys = tuple(polys)
        syntactic = 1
        for P in polys:
            syntactic *= max(int(P.degree), 0) if not P.is_zero() else 1
        self.syntactic_degree = syntactic
        self.declared_dim = n - 1 if declared_dim is None else declared_dim
        self.declared_degree = (syntactic if declared_degree is None
                                else declared_degree)
        if self.declared_degree != syntactic:
            logger.debug('declared degree %d differs from syntactic degree %d'
                         ' for %s', self.declared_degree, syntactic, self)
        mask = np.ones(field.q ** n, dtype=bool)
        for P in polys:
            mask &= P.evaluate_all() == 0
        self._points = points_array(field, n)[mask]
        bound = self.declared_degree * (field.q + 1) ** self.declared_dim
        if len(self._points) > bound:
            raise InvalidDeclaration(
                '%s has %d points, above degree * (q+1)^dim = %d'
                % (self, len(self._points), bound))

    @classmethod
    def hyperplane(cls, field, n, coordinate=None, value=0):
        """The hyperplane ``x_coordinate = value`` (default: last
        coordinate)."""
        if coordinate is None:
            coordinate = n - 1
        exps = [0] * n
        exps[coordinate] = 1
        P = MultivariatePolynomial(field, n, {tuple(exps): 1,
                                              (0,) * n: field.neg(value)})
        return cls(field, n, [P], declared_dim=n - 1)

    @property
    def degree_discrepancy(self):
        return self.declared_degree != self.syntactic_degree

    def points_array(self):
        return self._points

    def points(self):
        return frozenset(tuple(int(x) for x in p) for p in self._points)

    def __len__(self):
        return len(self._points)

    def contains(self, point):
        return all(P.evaluate(point) == 0 for P in self.polys)

    def __repr__(self):
        return 'Variety(%s)' % '; '.join(str(P) for P in self.polys)

    def to_dict(self):
        return {'polys': [str(P) for P in self.polys],
                'declared_dim': self.declared_dim,
                'declared_degree': self.declared_degree,
                'syntactic_degree': self.syntactic_degree}


def curve_in_variety(curve, variety):
    """True iff every defining polynomial composed with the curve is the zero
    polynomial (symbolic containment)."""
    polys = getattr(variety, 'polys', variety)
    for P in polys:
        if P.n_vars != curve.n:
            raise DimensionMismatch('curve in F^%d against a polynomial in %d '
                                    'variables' % (curve.n, P.n_vars))
        if not P.compose(curve.components).is_zero():
            return False
    return True


def _projected_components(curve, T):
    field = curve.field
    T = np.asarray(T, dtype=np.int64)
    if T.ndim != 2 or T.shape[1] != curve.n:
        raise DimensionMismatch('cannot apply a %r matrix to a curve in F^%d'
                                % (T.shape, curve.n))
    comps = []
    for row in T:
        g = MultivariatePolynomial.zero(field, 1)
        for c, gi in zip(row, curve.components):
            if c:
                g = g + gi.scale(int(c))
        comps.append(g)
    return comps


def project_curve(curve, T):
    """The curve ``t -> T(curve(t))`` for an n x N matrix ``T``.

    Raises
    ------
    DimensionMismatch
        If ``T`` does not have ``curve.n`` columns.
    BadParameters
        If the projection is constant.
    """
    comps = _projected_components(curve, T)
    projected = ParametricCurve(curve.field, comps)
    if projected.degree > curve.degree:
        raise InternalCheckFailure('projection raised the curve degree')
    return ParametricCurve(curve.field, comps, declared_degree=curve.degree)


def is_constant_after(curve, T):
    """True iff ``T`` maps the whole curve to a single point."""
    return all(g.is_constant() for g in _projected_components(curve, T))


def bezout_count(curve, Q):
    """Number of parameters t in F with Q(curve(t)) = 0, counted with
    multiplicity.

    Raises
    ------
    CurveContained
        If Q vanishes identically along the curve.
    """
    if Q.n_vars != curve.n:
        raise DimensionMismatch('curve in F^%d against a polynomial in %d '
                                'variables' % (curve.n, Q.n_vars))
    h = Q.compose(curve.components)
    if h.is_zero():
        raise CurveContained('%r lies in {%s = 0}' % (curve, Q))
    values = h.evaluate_all()
    count = sum(root_multiplicity(h, int(t))
                for t in np.flatnonzero(values == 0))
    if count > h.degree:
        raise InternalCheckFailure('%d roots for a polynomial of degree %d'
                                   % (count, h.degree))
    return count


###############################################################################
# Conics with a prescribed asymptote

@dataclass(frozen=True)
class ConicDescriptor:
    """``A x^2 + B xy + C y^2 + D x + E y + F0 = 0`` with its coefficients
    scaled so the first nonzero one is 1."""
    field: FieldSpec
    coefficients: tuple
    degenerate: bool
    point_count: int

    def polynomial(self):
        A, B, C, D, E, F0 = self.coefficients
        return MultivariatePolynomial(self.field, 2, {
            (2, 0): A, (1, 1): B, (0, 2): C, (1, 0): D, (0, 1): E,
            (0, 0): F0})

    def points(self):
        values = self.polynomial().evaluate_all()
        pts = points_array(self.field, 2)[values == 0]
        return frozenset(tuple(int(x) for x in p) for p in pts)

    def points_array(self):
        values = self.polynomial().evaluate_all()
        return points_array(self.field, 2)[values == 0]

    def directions_at_infinity(self):
        """Directions (x : y) where the quadratic part vanishes."""
        field = self.field
        A, B, C = self.coefficients[:3]
        out = []
        for d in enum_directions(field, 2):
            x, y = d.rep
            v = field.add(field.add(field.mul(A, field.mul(x, x)),
                                    field.mul(B, field.mul(x, y))),
                          field.mul(C, field.mul(y, y)))
            if v == 0:
                out.append(d)
        return out

    def to_dict(self):
        return {'coefficients': list(self.coefficients),
                'degenerate': self.degenerate,
                'point_count': self.point_count}


def _normalize_projective(field, coeffs):
    for c in coeffs:
        if c:
            inv = field.inv(c)
            return tuple(field.mul(x, inv) for x in coeffs)
    return None


def conic_discriminant(field, coeffs):
    """``4ACF + BDE - AE^2 - CD^2 - FB^2``; zero iff the conic is
    degenerate."""
    A, B, C, D, E, F0 = coeffs
    f = field
    four = f.scalar(4)
    terms = [
        f.mul(four, f.mul(A, f.mul(C, F0))),
        f.mul(B, f.mul(D, E)),
        f.neg(f.mul(A, f.mul(E, E))),
        f.neg(f.mul(C, f.mul(D, D))),
        f.neg(f.mul(F0, f.mul(B, B))),
    ]
    total = 0
    for t in terms:
        total = f.add(total, t)
    return total


def conics_with_asymptote(field, ell, include_degenerate=False):
    """Every conic ``ell * ell' + D = 0`` for linear forms ell' and
    constants D.

    Parameters
    ----------
    ell: tuple (a, b, c)
        The form ``a x + b y + c``, with (a, b) != (0, 0).
    include_degenerate: bool
        Keep conics that split into lines.

    Returns a list of :class:`ConicDescriptor` sorted by coefficients.

    Raises
    ------
    EnumerationTooLarge
        If q exceeds 16.
    """
    if field.q > MAX_CONIC_FIELD:
        raise EnumerationTooLarge('conic enumeration needs q <= %d, got %d'
                                  % (MAX_CONIC_FIELD, field.q))
    a, b, c = (field.check(x) for x in ell)
    if a == 0 and b == 0:
        raise DegenerateDirection('the asymptote must be a line')
    f = field
    seen = {}
    q = field.q
    for a2, b2, c2 in itertools.product(range(q), repeat=3):
        if a2 == 0 and b2 == 0:
            continue
        base = (f.mul(a, a2),
                f.add(f.mul(a, b2), f.mul(b, a2)),
                f.mul(b, b2),
                f.add(f.mul(a, c2), f.mul(c, a2)),
                f.add(f.mul(b, c2), f.mul(c, b2)),
                f.mul(c, c2))
        for D in range(q):
            coeffs = base[:5] + (f.add(base[5], D),)
            key = _normalize_projective(field, coeffs)
            if key is None or key in seen:
                continue
            degenerate = conic_discriminant(field, key) == 0
            if degenerate and not include_degenerate:
                seen[key] = None
                continue
            conic = ConicDescriptor(field, key, degenerate, 0)
            seen[key] = ConicDescriptor(field, key, degenerate,
                                        len(conic.points_array()))
    return [seen[k] for k in sorted(seen) if seen[k] is not None]
