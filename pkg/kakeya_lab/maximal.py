"""
Discrete maximal operators over F^n and the norms and ratio reports built
on them.

A maximal operator maps a non-negative function f on F^n to a function on
some domain (directions, points, subspaces) whose value at each domain
element is the largest sum of f over an admissible averaging set: a line, a
curve from a supplied family, or a k-plane. Every value carries the
averaging set that attains it, and sums are computed with :func:`math.fsum`
so that re-summing a witness reproduces the stored value exactly.
"""

import functools
import logging
import math
import numbers
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .exceptions import (AnchorMissing, BadExponent, BadParameters,
                         ContainmentViolation, DimensionMismatch,
                         ExponentOutOfRange, IntersectionTooSmall,
                         InternalCheckFailure, ZeroFunction)
from .geometry import (Direction, KPlane, Line, Variety, conics_with_asymptote,
                       curve_in_variety, direction_line_coords,
                       enum_directions, enum_kplanes, enum_lines,
                       gaussian_binomial, points_array, point_index)
from .logger import Logger
from .parallel import run_parallel
from .rng import make_rng, sub_seed

logger = logging.getLogger(__name__)

THEOREMS = ('exp', 'shoop', 'kakeq', 'restricted_W', 'nikodym',
            'kplane_conj', 'mixedq')


###############################################################################
# Point functions

class PointFunction(object):
    """A non-negative function on F^n stored as a dense read-only array.

    Parameters
    ----------
    field: FieldSpec
    n: int
    values: array-like of shape (q,) * n
        Function values; the absolute value is stored.
    """

    def __init__(self, field, n, values):
        values = np.abs(np.array(values, dtype=np.float64))
        shape = (field.q,) * n
        if values.size != field.q ** n:
            raise DimensionMismatch('expected %d values for F_%d^%d, got %d'
                                    % (field.q ** n, field.q, n,
                                       values.size))
        values = values.reshape(shape)
        if not np.all(np.isfinite(values)):
            raise BadParameters('function values must be finite')
        values.setflags(write=False)
        self.field = field
        self.n = n
        self.values = values

    @classmethod
    def zeros(cls, field, n):
        return cls(field, n, np.zeros((field.q,) * n))

    @classmethod
    def constant(cls, field, n, c=1.0):
        return cls(field, n, np.full((field.q,) * n, float(c)))

    @classmethod
    def from_dict(cls, field, n, mapping):
        """Build from a map ``point -> value``; absent points are 0."""
        values = np.zeros((field.q,) * n)
        for point, v in mapping.items():
            point = tuple(field.check(x) for x in point)
            if len(point) != n:
                raise DimensionMismatch('point %r is not in F^%d'
                                        % (point, n))
            values[point] = v
        return cls(field, n, values)

    @classmethod
    def indicator(cls, field, n, points):
        return cls.from_dict(field, n, {tuple(p): 1.0 for p in points})

    @property
    def flat(self):
        """Values in lexicographic point order."""
        return self.values.reshape(-1)

    def __call__(self, point):
        return float(self.values[tuple(point)])

    def is_zero(self):
        return not np.any(self.values)

    def support(self):
        return [tuple(int(x) for x in p) for p in np.argwhere(self.values)]

    def as_dict(self):
        return {p: float(self.values[p]) for p in self.support()}

    def _same_space(self, other):
        if other.field != self.field or other.n != self.n:
            raise DimensionMismatch('functions live on different spaces')

    def __add__(self, other):
        self._same_space(other)
        return PointFunction(self.field, self.n, self.values + other.values)

    def __mul__(self, c):
        if not isinstance(c, numbers.Real) or c < 0:
            return NotImplemented
        return PointFunction(self.field, self.n, self.values * float(c))

    __rmul__ = __mul__

    def __le__(self, other):
        self._same_space(other)
        return bool(np.all(self.values <= other.values))

    def __eq__(self, other):
        return (isinstance(other, PointFunction) and self.field == other.field
                and self.n == other.n
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self):
        return 'PointFunction(F_%d^%d, support=%d)' % (
            self.field.q, self.n, len(self.support()))

    def to_dict(self):
        return {'p': self.field.p, 'm': self.field.m, 'n': self.n,
                'values': [list(p) + [v] for p, v in self.as_dict().items()]}


def random_point_function(field, n, seed, density=None):
    """A seeded random non-negative function with random sparsity.

    Values are uniform on [0, 1) on a random subset of density ``density``
    (drawn uniformly from [0.05, 1] when omitted); at least one point is
    nonzero.
    """
    rng = make_rng(seed)
    shape = (field.q,) * n
    if density is None:
        density = rng.uniform(0.05, 1.0)
    values = rng.random(shape) * (rng.random(shape) < density)
    if not np.any(values):
        values[tuple(rng.integers(0, field.q, size=n))] = 1.0
    return PointFunction(field, n, values)


###############################################################################
# Results

class MaximalResult(object):
    """Values of a maximal operator with the averaging set attaining each.

    Attributes
    ----------
    domain_tag: str
        ``'directions'``, ``'hyperplane_points'``, ``'variety_points'``,
        ``'ambient_points'``, ``'grassmannian'`` or ``'asymptotes'``.
    keys: list
        Domain elements in canonical order.
    values: numpy array of float
    witnesses: list
        Averaging set attaining each value (None for an empty supremum).
    excluded: frozenset, optional
        Points left out of every sum.
    """

    def __init__(self, domain_tag, keys, values, witnesses, excluded=None,
                 lookup=None):
        self.domain_tag = domain_tag
        self.keys = list(keys)
        self.values = np.asarray(values, dtype=np.float64)
        self.witnesses = list(witnesses)
        self.excluded = excluded
        self._lookup = lookup

    def __len__(self):
        return len(self.keys)

    def as_dict(self):
        return dict(zip(self.keys, self.values.tolist()))

    def __getitem__(self, key):
        return float(self.values[self.keys.index(key)])

    def witness_points(self, i):
        w = self.witnesses[i]
        if w is None:
            return []
        pts = w.points()
        if self.excluded:
            pts = [p for p in pts if p not in self.excluded]
        return sorted(pts)

    def verify_witnesses(self, f):
        """Re-sum every witness and compare with the stored value exactly.

        Raises
        ------
        InternalCheckFailure
        """
        lookup = self._lookup if self._lookup is not None else f
        for i, key in enumerate(self.keys):
            total = math.fsum(lookup(p) for p in self.witness_points(i))
            if total != self.values[i]:
                raise InternalCheckFailure(
                    'witness %r of %r sums to %r, stored %r'
                    % (self.witnesses[i], key, total, self.values[i]))
        return True

    def to_dict(self):
        return {'domain': self.domain_tag,
                'entries': [{'key': k, 'value': v, 'witness': w}
                            for k, v, w in zip(self.keys,
                                               self.values.tolist(),
                                               self.witnesses)]}


def _direction_sums(flat, field, direction):
    coords = direction_line_coords(field, direction)
    idx = point_index(field, coords)
    return np.array([math.fsum(row) for row in flat[idx].tolist()])


def _all_direction_sums(flat, field, directions):
    return run_parallel(functools.partial(_direction_sums, flat, field),
                        directions)


###############################################################################
# Maximal operators

def kakeya_maximal(f):
    """For each direction, the largest sum of f over a line with that
    direction.

    Raises
    ------
    EnumerationTooLarge
    """
    field, n = f.field, f.n
    directions = enum_directions(field, n)
    sums = _all_direction_sums(f.flat, field, directions)
    others = points_array(field, n - 1)
    values, witnesses = [], []
    for d, s in zip(directions, sums):
        j = int(np.argmax(s))
        base = np.insert(others[j], d.pivot, 0)
        values.append(s[j])
        witnesses.append(Line(field, tuple(int(x) for x in base), d))
    return MaximalResult('directions', directions, values, witnesses)


def _best_lines_through(f, points, flat):
    """Largest line sum through each point (rows of ``points``), with the
    direction attaining it; ties go to the first direction."""
    field, n = f.field, f.n
    directions = enum_directions(field, n)
    sums = _all_direction_sums(flat, field, directions)
    points = np.asarray(points, dtype=np.int64).reshape(-1, n)
    best = np.full(len(points), -1.0)
    which = np.zeros(len(points), dtype=np.int64)
    for j, (d, s) in enumerate(zip(directions, sums)):
        rep = np.asarray(d.rep, dtype=np.int64)[None, :]
        base = field.sub_arr(points,
                             field.mul_arr(points[:, [d.pivot]], rep))
        cand = s[point_index(field, np.delete(base, d.pivot, axis=1))]
        better = cand > best
        best[better] = cand[better]
        which[better] = j
    witnesses = [Line.through(field, tuple(int(x) for x in p),
                              directions[j])
                 for p, j in zip(points, which)]
    return best, witnesses


def _family_records(f, family, excluded=None):
    records = []
    for curve in family:
        pts = curve.points()
        kept = [p for p in pts if not excluded or p not in excluded]
        records.append((curve, pts, math.fsum(f(p) for p in kept)))
    return records


def _sup_over_records(records, anchors):
    values, witnesses = [], []
    for w in anchors:
        best, arg = 0.0, None
        for curve, pts, total in records:
            if w in pts and (arg is None or total > best):
                best, arg = total, curve
        values.append(best)
        witnesses.append(arg)
    return values, witnesses


def curve_maximal(f, family='lines'):
    """For each w in F^(n-1), the largest sum of f over the points of a
    family member through (w, 0) that lie off the hyperplane x_n = 0.

    ``family`` is ``'lines'`` (every line) or a list of curves; an empty
    supremum is 0.
    """
    field, n = f.field, f.n
    anchors = [tuple(int(x) for x in p) + (0,)
               for p in points_array(field, n - 1)]
    hyper = frozenset(anchors)
    if isinstance(family, str):
        if family != 'lines':
            raise BadParameters('unknown curve family %r' % family)
        on_hyperplane = np.zeros((field.q,) * n, dtype=bool)
        on_hyperplane[..., 0] = True
        flat = np.where(on_hyperplane.reshape(-1), 0.0, f.flat)
        values, witnesses = _best_lines_through(f, anchors, flat)
    else:
        records = _family_records(f, family, excluded=hyper)
        values, witnesses = _sup_over_records(records, anchors)
    keys = [a[:-1] for a in anchors]
    return MaximalResult('hyperplane_points', keys, values, witnesses,
                         excluded=hyper)


def _anchor_family(anchor, families):
    if isinstance(families, str):
        if families != 'lines':
            raise BadParameters('unknown curve family %r' % families)
        return None
    if callable(families):
        return list(families(anchor))
    return list(families.get(anchor, ()))


def variety_maximal(f, W, families='lines', ambient=None, exclude=False):
    """For each anchor w of W, the largest sum of f over a curve through w
    that is not contained in the ambient set.

    Parameters
    ----------
    W: Variety or iterable of points
    families: 'lines', dict or callable
        Curves per anchor. With ``'lines'`` every line through the anchor is
        used and lines inside ``ambient`` are skipped.
    ambient: Variety, optional
        The algebraic set curves must not lie in; defaults to W when W is a
        Variety.
    exclude: bool
        Leave the points of W out of the sums.

    Raises
    ------
    AnchorMissing, ContainmentViolation
    """
    field, n = f.field, f.n
    if isinstance(W, Variety):
        anchors = sorted(W.points())
        tag = 'variety_points'
        if ambient is None:
            ambient = W
    else:
        anchors = sorted(tuple(int(x) for x in p) for p in W)
        tag = 'variety_points' if ambient is not None else 'ambient_points'
    excluded = frozenset(anchors) if exclude else None
    values, witnesses = [], []
    for w in anchors:
        family = _anchor_family(w, families)
        if family is None:
            family = [line.as_curve() for line in _lines_through(field, w)]
            if ambient is not None:
                family = [c for c in family
                          if not curve_in_variety(c, ambient)]
        else:
            for curve in family:
                if w not in curve.points():
                    raise AnchorMissing('%r does not pass through %r'
                                        % (curve, w))
                if ambient is not None and curve_in_variety(curve, ambient):
                    raise ContainmentViolation('%r lies in the ambient set'
                                               % (curve,))
        records = _family_records(f, family, excluded)
        v, wit = _sup_over_records(records, [w])
        values.extend(v)
        witnesses.extend(wit)
    return MaximalResult(tag, anchors, values, witnesses, excluded=excluded)


def _lines_through(field, point):
    return [Line.through(field, point, d)
            for d in enum_directions(field, len(point))]


def nikodym_maximal(f, family='lines', W=None):
    """For each point x (of F^n, or of W), the largest sum of f over a
    family member through x."""
    field, n = f.field, f.n
    if W is None:
        points = [tuple(int(x) for x in p) for p in points_array(field, n)]
    else:
        points = sorted(tuple(int(x) for x in p) for p in W)
    if isinstance(family, str):
        if family != 'lines':
            raise BadParameters('unknown curve family %r' % family)
        if not points:
            values, witnesses = [], []
        else:
            values, witnesses = _best_lines_through(f, points, f.flat)
    else:
        values, witnesses = _sup_over_records(_family_records(f, family),
                                              points)
    return MaximalResult('ambient_points', points, values, witnesses)


def _kplane_sums(flat, field, plane):
    n, k = plane.n, plane.k
    span = plane.points_array()
    free = [j for j in range(n) if j not in plane.pivots]
    offsets = np.zeros((field.q ** (n - k), n), dtype=np.int64)
    offsets[:, free] = points_array(field, n - k)
    coords = field.add_arr(offsets[:, None, :], span[None, :, :])
    sums = [math.fsum(row) for row in flat[point_index(field,
                                                      coords)].tolist()]
    j = int(np.argmax(sums))
    return sums[j], tuple(int(x) for x in offsets[j])


def kplane_maximal(f, k):
    """For each k-dimensional subspace, the largest sum of f over one of its
    cosets.

    Raises
    ------
    EnumerationTooLarge
    """
    field = f.field
    planes = enum_kplanes(field, f.n, k)
    results = run_parallel(functools.partial(_kplane_sums, f.flat, field),
                           planes)
    values = [v for v, _ in results]
    witnesses = [KPlane(field, plane.basis, offset)
                 for plane, (_, offset) in zip(planes, results)]
    return MaximalResult('grassmannian', planes, values, witnesses)


def asymptote_maximal(f, by='horizontal_lines'):
    """Largest sum of f over nondegenerate conics with a given asymptote.

    With ``by='horizontal_lines'`` the domain is the lines y = c (keyed by
    c); with ``by='directions'`` the domain is the directions of F^2 and
    every asymptote with that direction is allowed. Needs n = 2.
    """
    field = f.field
    if f.n != 2:
        raise DimensionMismatch('conic asymptotes live in F^2, got n=%d'
                                % f.n)
    if by == 'horizontal_lines':
        keys = list(range(field.q))
        asymptotes = [[(0, 1, field.neg(c))] for c in keys]
        tag = 'asymptotes'
    elif by == 'directions':
        keys = enum_directions(field, 2)
        asymptotes = []
        for d in keys:
            x0, y0 = d.rep
            a, b = y0, field.neg(x0)
            asymptotes.append([(a, b, c) for c in range(field.q)])
        tag = 'directions'
    else:
        raise BadParameters("by must be 'horizontal_lines' or 'directions'")
    values, witnesses = [], []
    for ells in asymptotes:
        family = []
        for ell in ells:
            family.extend(conics_with_asymptote(field, ell))
        v, w = _sup_all(f, family)
        values.append(v)
        witnesses.append(w)
    return MaximalResult(tag, keys, values, witnesses)


def _sup_all(f, family):
    best, arg = 0.0, None
    for curve, _, total in _family_records(f, family):
        if arg is None or total > best:
            best, arg = total, curve
    return best, arg


@dataclass(frozen=True)
class ProjectiveLine:
    """A line of P^n(F): an affine line closed up by its point at infinity,
    or a line inside the hyperplane at infinity."""
    affine: Optional[Line] = None
    plane: Optional[KPlane] = None

    def points(self):
        if self.affine is not None:
            pts = [('affine', p) for p in self.affine.points_list()]
            pts.append(('infinity', self.affine.direction.rep))
            return frozenset(pts)
        field = self.plane.field
        dirs = set()
        for p in self.plane.points():
            if any(p):
                dirs.add(('infinity',
                          Direction.from_vector(field, p).rep))
        return frozenset(dirs)

    def to_dict(self):
        if self.affine is not None:
            return {'affine': self.affine}
        return {'at_infinity': self.plane}


def projective_nikodym_maximal(f, at_infinity=None, W=None):
    """Nikodym maximal function on P^n(F) over projective lines.

    ``f`` gives the values on the affine chart and ``at_infinity`` maps
    direction representatives to values on the hyperplane at infinity.
    Domain elements are chart-tagged points; ``W`` restricts them.
    """
    field, n = f.field, f.n
    at_infinity = dict(at_infinity or {})

    def lookup(point):
        chart, coords = point
        if chart == 'affine':
            return f(coords)
        return abs(float(at_infinity.get(tuple(coords), 0.0)))

    lines = [ProjectiveLine(affine=line) for line in enum_lines(field, n)]
    if n >= 2:
        lines.extend(ProjectiveLine(plane=plane)
                     for plane in enum_kplanes(field, n, 2))
    best = {}
    for line in lines:
        pts = line.points()
        total = math.fsum(lookup(p) for p in pts)
        for p in pts:
            if p not in best or total > best[p][0]:
                best[p] = (total, line)
    if W is None:
        keys = [('affine', tuple(int(x) for x in p))
                for p in points_array(field, n)]
        keys.extend(('infinity', d.rep) for d in enum_directions(field, n))
    else:
        keys = sorted((c, tuple(x)) for c, x in W)
    values = [best[k][0] for k in keys]
    witnesses = [best[k][1] for k in keys]
    return MaximalResult('ambient_points', keys, values, witnesses,
                         lookup=lookup)


###############################################################################
# Norms

def _check_exponent(p):
    if isinstance(p, str):
        if p.lower() in ('inf', 'infinity'):
            return math.inf
        try:
            p = float(p)
        except ValueError:
            raise BadExponent('exponent %r is not a number' % p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise BadExponent('exponent must be >= 1 or infinite, got %r' % p)
    return p


def _values_of(obj):
    if isinstance(obj, PointFunction):
        return obj.flat
    if isinstance(obj, MaximalResult):
        return obj.values
    if isinstance(obj, dict):
        return np.asarray(list(obj.values()), dtype=np.float64)
    return np.asarray(obj, dtype=np.float64).reshape(-1)


def lp_norm(obj, p, normalized=False):
    """The l^p norm of a function given as a PointFunction, a MaximalResult,
    a dict or an array.

    With ``normalized`` the sum is divided by the domain size before the
    1/p power.

    Raises
    ------
    BadExponent
    """
    p = _check_exponent(p)
    values = np.abs(_values_of(obj))
    if math.isinf(p):
        return float(values.max()) if values.size else 0.0
    total = math.fsum((values ** p).tolist())
    if normalized:
        if not values.size:
            return 0.0
        total /= values.size
    return total ** (1.0 / p)


def _as_lookup(g):
    if isinstance(g, MaximalResult):
        g = g.as_dict()
    if isinstance(g, dict):
        return lambda plane: float(g.get(plane, 0.0))
    return g


def _lines_of_span(field, basis):
    """Nonzero vectors of span(basis), one per line, plus the index of the
    leading nonzero coordinate (relative to ``basis``)."""
    out = []
    for d in enum_directions(field, len(basis)):
        vec = [0] * len(basis[0])
        for c, b in zip(d.rep, basis):
            if c:
                vec = [field.add(x, field.mul(c, y)) for x, y in zip(vec, b)]
        out.append((d, tuple(vec)))
    return out


def _mixed(g, exponents, field, basis, prefix, rule):
    q1 = exponents[0]
    inner = []
    for d, vec in _lines_of_span(field, basis):
        if len(exponents) == 1:
            inner.append(abs(g(KPlane.span(field, list(prefix) + [vec]))))
            continue
        nonzero = [i for i, c in enumerate(d.rep) if c]
        drop = nonzero[0] if rule == 'coordinate' else nonzero[-1]
        complement = [b for i, b in enumerate(basis) if i != drop]
        inner.append(_mixed(g, exponents[1:], field, complement,
                            prefix + (vec,), rule))
    return lp_norm(inner, q1, normalized=True)


def mixed_norm(g, exponents, field, n, complement_rule='coordinate'):
    """Recursive normalized mixed norm of a function on Gr(F^n, k),
    k = len(exponents).

    ``g`` maps subspaces (as :class:`~kakeya_lab.geometry.KPlane` through
    the origin) to values: a dict, a callable or a ``kplane_maximal``
    result. For each line pi the complement is spanned by the basis vectors
    of the current space except the one at pi's first nonzero coordinate
    (``'coordinate'``) or its last one (``'reverse'``).

    Raises
    ------
    BadExponent
    """
    exponents = [_check_exponent(e) for e in exponents]
    if not exponents:
        raise BadExponent('at least one exponent is needed')
    if len(exponents) > n:
        raise BadParameters('k = %d exceeds n = %d' % (len(exponents), n))
    if complement_rule not in ('coordinate', 'reverse'):
        raise BadParameters("complement_rule must be 'coordinate' or "
                            "'reverse', got %r" % (complement_rule,))
    basis = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return _mixed(_as_lookup(g), exponents, field, basis, (),
                  complement_rule)


def mixedq_exponents(n, k):
    """q_i = (n - i)(n - i + 1) / (n - k) for i = 1..k."""
    if not 1 <= k < n:
        raise ExponentOutOfRange('mixed exponents need 1 <= k < n, got '
                                 'k=%d, n=%d' % (k, n))
    return [(n - i) * (n - i + 1) / (n - k) for i in range(1, k + 1)]


###############################################################################
# Ratio reports

@dataclass
class RatioReport:
    theorem: str
    params: dict
    lhs_norm: float
    rhs_scale: float
    ratio: float
    seed: Optional[int] = None
    witnesses: Optional[MaximalResult] = None
    ensemble_stats: Optional[dict] = None

    def to_dict(self):
        out = {'theorem': self.theorem, 'params': self.params,
               'lhs': self.lhs_norm, 'rhs_scale': self.rhs_scale,
               'ratio': self.ratio, 'seed': self.seed}
        if self.witnesses is not None:
            out['witnesses'] = self.witnesses
        if self.ensemble_stats is not None:
            out['ensemble'] = self.ensemble_stats
        return out


def check_shoop_region(n, p_exp, q_exp):
    """1 <= p <= n and 1 <= q <= (n - 1) p / (p - 1)."""
    p_exp, q_exp = _check_exponent(p_exp), _check_exponent(q_exp)
    if p_exp > n:
        raise ExponentOutOfRange('p = %g exceeds n = %d' % (p_exp, n))
    limit = math.inf if p_exp == 1 else (n - 1) * p_exp / (p_exp - 1)
    if q_exp > limit:
        raise ExponentOutOfRange('q = %g exceeds (n-1)p/(p-1) = %g'
                                 % (q_exp, limit))
    return p_exp, q_exp


def check_kplane_region(n, k, p_exp, q_exp):
    """1 <= p <= n/k and 1 <= q <= (n - k) p / (p - 1)."""
    p_exp, q_exp = _check_exponent(p_exp), _check_exponent(q_exp)
    if p_exp > n / k:
        raise ExponentOutOfRange('p = %g exceeds n/k = %g' % (p_exp, n / k))
    limit = math.inf if p_exp == 1 else (n - k) * p_exp / (p_exp - 1)
    if q_exp > limit:
        raise ExponentOutOfRange('q = %g exceeds (n-k)p/(p-1) = %g'
                                 % (q_exp, limit))
    return p_exp, q_exp


def _scale_power(base, exponent):
    return 1.0 if math.isinf(exponent) else base ** (1.0 / exponent)


def ratio_report(f, theorem, keep_witnesses=False, **params):
    """Evaluate one maximal inequality on ``f``.

    Parameters
    ----------
    theorem: str
        ``'exp'``; ``'shoop'`` (``p_exp``, ``q_exp``); ``'kakeq'`` and
        ``'restricted_W'`` (``W``, optional ``families`` and ``ambient``);
        ``'nikodym'`` (optional ``W``, ``at_infinity`` for the projective
        version); ``'kplane_conj'`` (``k``, ``p_exp``, ``q_exp``);
        ``'mixedq'`` (``k``, optional ``complement_rule``).

    Raises
    ------
    ZeroFunction, ExponentOutOfRange, BadParameters
    """
    field, n = f.field, f.n
    q = field.q
    if f.is_zero():
        raise ZeroFunction('the ratio is undefined for f = 0')
    recorded = {}
    if theorem == 'exp':
        result = kakeya_maximal(f)
        lhs = lp_norm(result, n)
        rhs = q ** ((n - 1) / n) * lp_norm(f, n)
    elif theorem == 'shoop':
        p_exp, q_exp = check_shoop_region(n, params.pop('p_exp'),
                                          params.pop('q_exp'))
        recorded = {'p_exp': p_exp, 'q_exp': q_exp}
        result = kakeya_maximal(f)
        lhs = lp_norm(result, q_exp)
        rhs = _scale_power(q ** (n - 1), q_exp) * lp_norm(f, p_exp)
    elif theorem in ('kakeq', 'restricted_W'):
        W = params.pop('W')
        result = variety_maximal(f, W, params.pop('families', 'lines'),
                                 ambient=params.pop('ambient', None))
        lhs = lp_norm(result, n)
        if theorem == 'kakeq':
            rhs = q ** ((n - 1) / n) * lp_norm(f, n)
        else:
            rhs = max(len(result), q ** (n - 1)) ** (1 / n) * lp_norm(f, n)
        recorded = {'W_size': len(result)}
    elif theorem == 'nikodym':
        W = params.pop('W', None)
        at_infinity = params.pop('at_infinity', None)
        if at_infinity is not None:
            result = projective_nikodym_maximal(f, at_infinity, W)
            f_norm = (lp_norm(f, n) ** n + lp_norm(
                [abs(v) for v in at_infinity.values()], n) ** n) ** (1 / n)
        else:
            result = nikodym_maximal(f, params.pop('family', 'lines'), W)
            f_norm = lp_norm(f, n)
        lhs = lp_norm(result, n)
        rhs = max(len(result), q ** n) ** (1 / n) * f_norm
        recorded = {'W_size': len(result)}
    elif theorem == 'kplane_conj':
        k = params.pop('k')
        p_exp, q_exp = check_kplane_region(n, k, params.pop('p_exp'),
                                           params.pop('q_exp'))
        recorded = {'k': k, 'p_exp': p_exp, 'q_exp': q_exp}
        result = kplane_maximal(f, k)
        lhs = lp_norm(result, q_exp)
        rhs = _scale_power(gaussian_binomial(n, k, q), q_exp) \
            * lp_norm(f, p_exp)
    elif theorem == 'mixedq':
        k = params.pop('k')
        exponents = mixedq_exponents(n, k)
        rule = params.pop('complement_rule', 'coordinate')
        recorded = {'k': k, 'exponents': exponents, 'complement_rule': rule}
        result = kplane_maximal(f, k)
        lhs = mixed_norm(result, exponents, field, n, rule)
        rhs = lp_norm(f, n / k)
    else:
        raise BadParameters('unknown theorem %r; expected one of %s'
                            % (theorem, ', '.join(THEOREMS)))
    if params:
        raise BadParameters('unexpected parameters for %s: %s'
                            % (theorem, ', '.join(sorted(params))))
    if rhs <= 0:
        raise ZeroFunction('the right-hand side vanishes')
    return RatioReport(theorem, recorded, lhs, rhs, lhs / rhs,
                       witnesses=result if keep_witnesses else None)


###############################################################################
# Ensembles

@dataclass
class EnsembleResult:
    theorem: str
    seed: int
    rows: list = dc_field(default_factory=list)

    @property
    def ratios(self):
        return [r for _, _, r in self.rows]

    @property
    def stats(self):
        ratios = self.ratios
        j = int(np.argmax(ratios))
        return {'trials': len(ratios), 'max': ratios[j],
                'mean': math.fsum(ratios) / len(ratios),
                'argmax_seed': self.rows[j][1]}

    def to_dict(self):
        return {'theorem': self.theorem, 'seed': self.seed,
                'rows': [{'trial': i, 'seed': s, 'ratio': r}
                         for i, s, r in self.rows],
                'stats': self.stats}


def _ensemble_trial(field, n, theorem, seed, params, index):
    s = sub_seed(seed, index)
    f = random_point_function(field, n, s)
    return index, s, ratio_report(f, theorem, **dict(params)).ratio


class EnsembleRunner(Logger):
    """Ratio reports over seeded random functions."""

    def __init__(self, field, n, theorem, seed, **params):
        super().__init__(name='kakeya_lab.maximal')
        self.field = field
        self.n = n
        self.theorem = theorem
        self.seed = seed
        self.params = params

    def __call__(self, trials):
        if trials < 1:
            raise BadParameters('trials must be >= 1, got %d' % trials)
        self.info('%d trials of %s on F_%d^%d' % (trials, self.theorem,
                                                  self.field.q, self.n))
        rows = run_parallel(
            functools.partial(_ensemble_trial, self.field, self.n,
                              self.theorem, self.seed, self.params),
            range(trials))
        result = EnsembleResult(self.theorem, self.seed, list(rows))
        self.debug(self.format(result.stats))
        return result


def ratio_ensemble(field, n, theorem, trials, seed, **params):
    """Ratio reports for ``trials`` random functions with sub-seeds of
    ``seed``."""
    return EnsembleRunner(field, n, theorem, seed, **params)(trials)


###############################################################################
# Sets

@dataclass
class SetReport:
    J: int
    lam: float
    size: int
    c_hat: float
    n: int
    q: int

    def to_dict(self):
        return {'J': self.J, 'lambda': self.lam, 'size': self.size,
                'c_hat': self.c_hat, 'n': self.n, 'q': self.q}


def kakeya_set_report(E, anchors, curves, lam, field, W=None):
    """Empirical constant of the curve Kakeya set bound
    ``|E| >= C^-n J lam^n / q^(n-1)``.

    Each curve must pass through its anchor, stay out of ``W`` when given,
    and meet E in at least ``lam`` points.

    Raises
    ------
    BadParameters, AnchorMissing, ContainmentViolation, IntersectionTooSmall
    """
    E = frozenset(tuple(p) for p in E)
    anchors = [tuple(w) for w in anchors]
    if len(anchors) != len(curves):
        raise BadParameters('%d anchors for %d curves'
                            % (len(anchors), len(curves)))
    if len(set(anchors)) != len(anchors):
        raise BadParameters('anchors must be distinct')
    if not anchors:
        raise BadParameters('at least one anchor is needed')
    if not E:
        raise BadParameters('E is empty')
    n = len(anchors[0])
    for w, curve in zip(anchors, curves):
        pts = curve.points()
        if w not in pts:
            raise AnchorMissing('%r does not pass through %r' % (curve, w))
        if W is not None and curve_in_variety(curve, W):
            raise ContainmentViolation('%r lies in W' % (curve,))
        if len(E & pts) < lam:
            raise IntersectionTooSmall('%r meets E in %d < %g points'
                                       % (curve, len(E & pts), lam))
    J = len(anchors)
    q = field.q
    c_hat = (J * lam ** n / (len(E) * q ** (n - 1))) ** (1.0 / n)
    logger.debug('set report: J=%d lam=%g |E|=%d c_hat=%g', J, lam, len(E),
                 c_hat)
    return SetReport(J, lam, len(E), c_hat, n, q)


def dual_estimate(field, n, g):
    """Both sides of the elementary lower bound for the dual Kakeya
    estimate.

    ``g`` maps directions to non-negative weights; gamma_omega is the line
    through the origin with direction omega. Returns ``(lhs, lower)`` with
    lhs = ||sum g(w) 1_gamma_w||_{n/(n-1)} and
    lower = (sum ||g(w) 1_gamma_w||^{n/(n-1)})^{(n-1)/n}.
    """
    if n < 2:
        raise BadParameters('the dual estimate needs n >= 2')
    p = n / (n - 1)
    total = np.zeros((field.q,) * n)
    parts = []
    origin = (0,) * n
    for d in enum_directions(field, n):
        w = abs(float(g.get(d, 0.0)))
        line = Line.through(field, origin, d)
        for pt in line.points():
            total[pt] += w
        parts.append(w ** p * field.q)
    lhs = lp_norm(total, p)
    lower = math.fsum(parts) ** (1 / p)
    return lhs, lower
