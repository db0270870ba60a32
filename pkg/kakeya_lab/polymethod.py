"""
The polynomial method with multiplicities.

A multiplicity function m on F^n asks for a polynomial of degree <= D whose
Hasse coefficients at every point v vanish below order m(v). Each condition
is linear in the coefficients, so the question is the kernel of a constraint
matrix. A nonzero kernel vector is returned as a witness polynomial and
re-checked against every condition; a trivial kernel is confirmed by a
second elimination with a different pivot rule.
"""

import functools
import logging
import math
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import numpy as np

from ._config import check_enumeration, get_config
from .exceptions import (BadParameters, DegreeTooLarge, EvenCharacteristic,
                         InternalCheckFailure, LabWarning, MatrixTooLarge,
                         NotHomogeneous, ZeroPolynomial)
from .geometry import (Direction, direction_line_coords, enum_directions,
                       enum_kplanes, gaussian_binomial, points_array,
                       point_index, Line)
from .linalg import incremental_rank, nullspace, row_reduce
from .logger import Logger
from .parallel import run_parallel
from .polynomials import MultivariatePolynomial, monomials

logger = logging.getLogger(__name__)


###############################################################################
# Multiplicities and constraints

class MultiplicityFunction(object):
    """Integer multiplicities on points of F^n, clamped to q unless
    ``clamp`` is false.

    Parameters
    ----------
    field: FieldSpec
    n: int
    values: dict
        Map from points to non-negative integers; zeros are dropped.
    clamp: bool, default True
        Replace multiplicities above q by q, with a warning.
    """

    def __init__(self, field, n, values, clamp=True):
        clean = {}
        clamped = 0
        for point, m in values.items():
            point = tuple(field.check(x) for x in point)
            if len(point) != n:
                raise BadParameters('point %r is not in F^%d' % (point, n))
            m = int(m)
            if m < 0:
                raise BadParameters('negative multiplicity at %r' % (point,))
            if clamp and m > field.q:
                clamped += 1
                m = field.q
            if m:
                clean[point] = m
        if clamped:
            warnings.warn('%d multiplicities above q = %d were clamped'
                          % (clamped, field.q), LabWarning)
        self.field = field
        self.n = n
        self.values = dict(sorted(clean.items()))

    @classmethod
    def indicator(cls, field, n, points, m=1, clamp=True):
        return cls(field, n, {tuple(p): m for p in points}, clamp)

    @classmethod
    def constant(cls, field, n, m, clamp=True):
        return cls(field, n, {p: m for p in
                              map(tuple, points_array(field, n).tolist())},
                   clamp)

    def __len__(self):
        return len(self.values)

    def constraint_count(self):
        n = self.n
        return sum(math.comb(m + n - 1, n) for m in self.values.values())

    def to_dict(self):
        return {'n': self.n, 'q': self.field.q,
                'values': [list(p) + [m] for p, m in self.values.items()]}


def monomial_count(n, D):
    """Dimension of the space of polynomials of degree <= D in n
    variables."""
    if n < 0 or D < 0:
        raise BadParameters('need n, D >= 0')
    return math.comb(n + D, D)


def _point_block(field, columns, max_degree, item):
    point, m = item
    rows = monomials(len(point), m - 1)
    p = field.p
    powers = [[field.pow(v, e) for e in range(max_degree + 1)]
              for v in point]
    block = np.zeros((len(rows), len(columns)), dtype=np.int64)
    for r, e in enumerate(rows):
        for c, a in enumerate(columns):
            value = 1
            for ai, ei, pw in zip(a, e, powers):
                if ai < ei:
                    value = 0
                    break
                b = math.comb(ai, ei) % p
                if b == 0:
                    value = 0
                    break
                value = field.mul(value, field.mul(b, pw[ai - ei]))
            block[r, c] = value
    return block


def constraint_matrix(mult, D):
    """Hasse-coefficient conditions for vanishing to order ``mult``.

    Rows run over (point, e) with points in lexicographic order and |e| <
    mult(point) in graded-lex order; columns over the monomials of degree
    <= D in graded-lex order. Returns ``(matrix, columns)``.

    Raises
    ------
    MatrixTooLarge
    """
    if D < 0:
        raise BadParameters('degree bound must be >= 0, got %d' % D)
    n_cols = monomial_count(mult.n, D)
    n_rows = mult.constraint_count()
    cap = get_config()['cap_matrix']
    if n_rows * n_cols > cap:
        raise MatrixTooLarge('constraint matrix %d x %d exceeds %d entries'
                             % (n_rows, n_cols, cap))
    columns = monomials(mult.n, D)
    if not n_rows:
        return np.zeros((0, n_cols), dtype=np.int64), columns
    blocks = run_parallel(
        functools.partial(_point_block, mult.field, columns, D),
        list(mult.values.items()))
    return np.concatenate(blocks, axis=0), columns


###############################################################################
# Certificates

@dataclass
class VanishingCertificate:
    """Outcome of a vanishing-polynomial search.

    ``kind`` is ``'witness_poly'`` or ``'kernel_trivial'``; ``status`` is
    ``'failure'`` when the outcome contradicts what the caller expected.
    """
    kind: str
    D: int
    constraint_count: int
    dim_PD: int
    rank: int
    witness: Optional[MultivariatePolynomial] = None
    verification: dict = dc_field(default_factory=dict)
    status: str = 'ok'

    @property
    def kernel_trivial(self):
        return self.kind == 'kernel_trivial'

    def to_dict(self):
        return {'kind': self.kind, 'D': self.D,
                'rows': self.constraint_count, 'cols': self.dim_PD,
                'rank': self.rank,
                'witness': None if self.witness is None
                else str(self.witness),
                'verification': self.verification,
                'status': self.status}


def verify_vanishing(P, mult):
    """True iff P vanishes to order mult(v) at every point v."""
    return all(P.vanishes_to_order(v, m) for v, m in mult.values.items())


class VanishingSolver(Logger):
    """Find a nonzero polynomial of degree <= D vanishing to the requested
    orders, or certify that none exists."""

    def __init__(self, mult, D):
        super().__init__(name='kakeya_lab.polymethod')
        self.mult = mult
        self.D = D

    def __call__(self):
        field = self.mult.field
        matrix, columns = constraint_matrix(self.mult, self.D)
        self.debug('constraint matrix %d x %d' % matrix.shape)
        R, pivots = row_reduce(field, matrix)
        rank = len(pivots)
        n_rows, n_cols = matrix.shape
        if rank == n_cols:
            second = incremental_rank(field, matrix)
            if second != rank:
                raise InternalCheckFailure(
                    'elimination passes disagree: rank %d vs %d'
                    % (rank, second))
            self.info('kernel trivial, rank %d' % rank)
            return VanishingCertificate(
                'kernel_trivial', self.D, n_rows, n_cols, rank,
                verification={'hasse_checks_passed': None,
                              'second_pass_rank': second})
        vector = nullspace(field, matrix)[0]
        witness = MultivariatePolynomial(
            field, self.mult.n,
            {a: int(c) for a, c in zip(columns, vector) if c})
        if witness.is_zero() or witness.degree > self.D:
            raise InternalCheckFailure('invalid kernel vector')
        passed = verify_vanishing(witness, self.mult)
        if not passed:
            raise InternalCheckFailure('witness %s fails a vanishing '
                                       'condition' % witness)
        self.info('witness of degree %d' % witness.degree)
        return VanishingCertificate(
            'witness_poly', self.D, n_rows, n_cols, rank, witness,
            verification={'hasse_checks_passed': passed,
                          'second_pass_rank': None})


def find_vanishing_poly(mult, D):
    """Search for a nonzero P of degree <= D vanishing to order ``mult``.

    Raises
    ------
    MatrixTooLarge
    """
    return VanishingSolver(mult, D)()


def _point_set(E):
    return sorted(set(tuple(int(x) for x in p) for p in E))


def dvir_check(E, field, n=None):
    """Vanishing-polynomial search on E with multiplicity 1 and D = q - 1.

    A trivial kernel is the obstruction every Kakeya set must satisfy.
    """
    E = _point_set(E)
    if n is None:
        if not E:
            raise BadParameters('cannot infer n from an empty set')
        n = len(E[0])
    mult = MultiplicityFunction.indicator(field, n, E)
    return find_vanishing_poly(mult, field.q - 1)


###############################################################################
# Line and plane containment

def _mask(E, field, n):
    mask = np.zeros(field.q ** n, dtype=bool)
    E = _point_set(E)
    if E:
        mask[point_index(field, np.asarray(E, dtype=np.int64))] = True
    return mask


def _covered_lines(mask, field, direction):
    coords = direction_line_coords(field, direction)
    return mask[point_index(field, coords)].all(axis=1)


def kakeya_line_check(E, field, n):
    """Return ``(True, None)`` if E contains a line in every direction, else
    ``(False, first_missing_direction)``."""
    mask = _mask(E, field, n)
    for d in enum_directions(field, n):
        if not _covered_lines(mask, field, d).any():
            return False, d
    return True, None


def nikodym_check(E, field, n):
    """Return ``(True, None)`` if every point x outside E lies on a line
    whose other points are in E, else ``(False, first_failing_point)``."""
    mask = _mask(E, field, n)
    directions = enum_directions(field, n)
    for flat_index in np.flatnonzero(~mask):
        x = tuple(int(c) for c in np.unravel_index(flat_index,
                                                   (field.q,) * n))
        ok = False
        for d in directions:
            pts = Line.through(field, x, d).points_array()
            others = [p for p in point_index(field, pts).tolist()
                      if p != flat_index]
            if mask[others].all():
                ok = True
                break
        if not ok:
            return False, x
    return True, None


def kplane_kakeya_check(E, k, field, n):
    """Return ``(True, None)`` if E contains a coset of every k-dimensional
    subspace, else ``(False, first_missing_subspace)``.

    Raises
    ------
    EnumerationTooLarge
    """
    mask = _mask(E, field, n)
    for plane in enum_kplanes(field, n, k):
        span = plane.points_array()
        free = [j for j in range(n) if j not in plane.pivots]
        offsets = np.zeros((field.q ** (n - k), n), dtype=np.int64)
        offsets[:, free] = points_array(field, n - k)
        coords = field.add_arr(offsets[:, None, :], span[None, :, :])
        if not mask[point_index(field, coords)].all(axis=1).any():
            return False, plane
    return True, None


###############################################################################
# Constructions

def build_small_kakeya(field, n):
    """A Kakeya set of size about q^n / 2^(n-1) for odd q.

    In F^2 this is ``{(x, y): x^2 - y is a square or 0}`` plus the line
    x = 0; in F^n it is that set times F^(n-2).

    Raises
    ------
    EvenCharacteristic
    """
    if field.p == 2:
        raise EvenCharacteristic('the tangent-line construction needs odd q, '
                                 'got q = %d' % field.q)
    if n < 2:
        raise BadParameters('need n >= 2, got %d' % n)
    q = field.q
    squares = {field.mul(a, a) for a in range(q)}
    plane = set()
    for x in range(q):
        x2 = field.mul(x, x)
        for y in range(q):
            if field.sub(x2, y) in squares:
                plane.add((x, y))
    plane.update((0, y) for y in range(q))
    if n == 2:
        return frozenset(plane)
    rest = points_array(field, n - 2).tolist()
    return frozenset(p + tuple(r) for p in plane for r in rest)


def build_kplane_kakeya(field, n, k):
    """A k-plane Kakeya set in F^n: a small Kakeya set of F^(n-k+1) placed
    where the last k-1 coordinates vanish, plus every point where they do
    not."""
    if not 1 <= k < n:
        raise BadParameters('need 1 <= k < n, got k=%d, n=%d' % (k, n))
    small = build_small_kakeya(field, n - k + 1)
    out = set(p + (0,) * (k - 1) for p in small)
    for p in points_array(field, n).tolist():
        if any(p[n - k + 1:]):
            out.add(tuple(p))
    return frozenset(out)


###############################################################################
# Bounds

def kakeya_size_bound(n, q):
    """C(q - 1 + n, n), the dimension count lower bound for Kakeya sets."""
    return math.comb(q - 1 + n, n)


def multiplicity_bound(n, q, m):
    """C(mq + n - 1, n) / C(m + n - 1, n) as an exact fraction."""
    if m < 1:
        raise BadParameters('multiplicity must be >= 1, got %d' % m)
    return Fraction(math.comb(m * q + n - 1, n), math.comb(m + n - 1, n))


@dataclass
class KPlaneBound:
    n: int
    k: int
    q: int
    m: int
    binomial_form: Fraction
    closed_form: Fraction
    chain: dict

    @property
    def bound(self):
        return self.binomial_form

    def to_dict(self):
        return {'n': self.n, 'k': self.k, 'q': self.q, 'm': self.m,
                'binomial_form': self.binomial_form,
                'closed_form': self.closed_form,
                'binomial_float': float(self.binomial_form),
                'closed_float': float(self.closed_form),
                'chain': self.chain}


def kplane_bound(n, k, field_or_q):
    """Lower bound for k-plane Kakeya sets in F_q^n with m = q^(k-1).

    Raises
    ------
    BadParameters
        Unless 2 <= k < n.
    """
    q = getattr(field_or_q, 'q', field_or_q)
    if not 2 <= k < n:
        raise BadParameters('need 2 <= k < n, got k=%d, n=%d' % (k, n))
    m = q ** (k - 1)
    dim = math.comb(m * q + n - 1, n)
    per_point = math.comb(m + n - 1, n)
    required = (q ** (k + 1) - 1) // (q - 1)
    ceiling = m * q - 1
    if ceiling >= required:
        raise InternalCheckFailure('degree ceiling %d does not fall below '
                                   '%d' % (ceiling, required))
    closed = Fraction(q) ** n * (1 - Fraction(1, q ** (k - 1))) \
        ** math.comb(n, 2)
    chain = {'m': m, 'dim_P': dim, 'conditions_per_point': per_point,
             'degree_ceiling': ceiling, 'required_degree': required,
             'bound': '%d/%d' % (dim, per_point)}
    return KPlaneBound(n, k, q, m, Fraction(dim, per_point), closed, chain)


###############################################################################
# Linear forms and plane restrictions

def linear_forms_classes(field, k, homogeneous=False):
    """Representatives (first nonzero coefficient 1) of the nonzero linear
    forms ``a_0 + a_1 x_1 + ... + a_k x_k`` up to scaling, as coefficient
    tuples (a_0, ..., a_k).

    Without ``homogeneous`` the constant class is left out; with it the
    forms are read as homogeneous forms in k + 1 variables and all classes
    are kept.
    """
    out = []
    for d in enum_directions(field, k + 1):
        if not homogeneous and not any(d.rep[1:]):
            continue
        out.append(d.rep)
    return out


def linear_forms_product(k, field, homogeneous=False):
    """Product of one representative of every class of linear forms.

    The affine product (in k variables) has degree (q^(k+1) - q)/(q - 1)
    and vanishes to order (q^k - 1)/(q - 1) at every point of F^k; the
    homogeneous product (in k + 1 variables) has degree
    (q^(k+1) - 1)/(q - 1). Both facts are re-checked.

    Raises
    ------
    DegreeTooLarge
    """
    if k < 1:
        raise BadParameters('need k >= 1, got %d' % k)
    q = field.q
    n_vars = k + 1 if homogeneous else k
    degree = (q ** (k + 1) - (1 if homogeneous else q)) // (q - 1)
    if monomial_count(n_vars, degree) > get_config()['cap_enum']:
        raise DegreeTooLarge('product of degree %d in %d variables is too '
                             'large to expand' % (degree, n_vars))
    product = MultivariatePolynomial.constant(field, n_vars, 1)
    for rep in linear_forms_classes(field, k, homogeneous):
        if homogeneous:
            form = MultivariatePolynomial.linear_form(field, rep)
        else:
            form = MultivariatePolynomial.linear_form(field, rep[1:], rep[0])
        product = product * form
    if product.degree != degree:
        raise InternalCheckFailure('product has degree %r, expected %d'
                                   % (product.degree, degree))
    if not homogeneous:
        order = (q ** k - 1) // (q - 1)
        for v in points_array(field, k).tolist():
            if not product.vanishes_to_order(tuple(v), order):
                raise InternalCheckFailure('product vanishes to order < %d '
                                           'at %r' % (order, v))
    return product


@dataclass
class PlaneCheckResult:
    vanishes: bool
    degree: float
    required_degree: int
    first_nonvanishing: object = None
    status: str = 'ok'

    def to_dict(self):
        return {'vanishes': self.vanishes, 'degree': self.degree,
                'required_degree': self.required_degree,
                'first_nonvanishing': self.first_nonvanishing,
                'status': self.status}


def plane_parametrization(plane):
    """Linear polynomials x_j = sum_i t_i b_i[j] in k variables t."""
    field = plane.field
    comps = []
    for j in range(plane.n):
        terms = {}
        for i, row in enumerate(plane.basis):
            if row[j]:
                e = [0] * plane.k
                e[i] = 1
                terms[tuple(e)] = row[j]
        comps.append(MultivariatePolynomial(field, plane.k, terms))
    return comps


def leading_form_plane_check(Q, k):
    """Does the homogeneous Q vanish on every projective (k-1)-plane?

    Planes are k-dimensional subspaces of F^N, N = Q.n_vars, and vanishing
    is tested by symbolic substitution. When Q is nonzero and vanishes on
    all of them, its degree must reach (q^(k+1) - 1)/(q - 1); a smaller
    degree is reported with status ``'failure'``.

    Raises
    ------
    NotHomogeneous
    """
    if not Q.is_homogeneous():
        raise NotHomogeneous('%s is not homogeneous' % Q)
    field = Q.field
    q = field.q
    required = (q ** (k + 1) - 1) // (q - 1)
    first = None
    for plane in enum_kplanes(field, Q.n_vars, k):
        if not Q.compose(plane_parametrization(plane)).is_zero():
            first = plane
            break
    vanishes = first is None
    status = 'ok'
    if vanishes and not Q.is_zero() and Q.degree < required:
        status = 'failure'
        logger.warning('%s vanishes on every (k-1)-plane with degree %d < %d',
                       Q, Q.degree, required)
    return PlaneCheckResult(vanishes, Q.degree, required, first, status)


def multiplicity_sz_check(k, m, field):
    """Confirm that no nonzero polynomial of degree < mq on F^k vanishes to
    order m at every point. m may exceed q. A witness comes back with
    status ``'failure'``."""
    if m < 1:
        raise BadParameters('need m >= 1, got %d' % m)
    mult = MultiplicityFunction.constant(field, k, m, clamp=False)
    cert = find_vanishing_poly(mult, m * field.q - 1)
    if not cert.kernel_trivial:
        cert.status = 'failure'
        logger.warning('multiplicity vanishing lemma fails for k=%d m=%d '
                       'q=%d: %s', k, m, field.q, cert.witness)
    return cert


###############################################################################
# Refutation diagnostics

@dataclass
class RefutationReport:
    factor_exponent: int
    cofactor: MultivariatePolynomial
    leading_form: MultivariatePolynomial
    candidate_directions: list
    missing_direction: Optional[Direction]

    def to_dict(self):
        return {'factor_exponent': self.factor_exponent,
                'cofactor': str(self.cofactor),
                'leading_form': str(self.leading_form),
                'candidate_directions': self.candidate_directions,
                'missing_direction': self.missing_direction}


def refutation_diagnostics(E, witness):
    """Trace why a set with a low-degree vanishing polynomial is not
    Kakeya.

    Factors the last variable out of the witness, takes the leading form,
    and lists the directions where the leading form does not vanish: a line
    of such a direction inside E would force the witness to vanish along
    it, so none of them can be covered. The first one confirmed uncovered is
    reported.

    Raises
    ------
    ZeroPolynomial
    """
    if witness.is_zero():
        raise ZeroPolynomial('no diagnostics for the zero polynomial')
    field, n = witness.field, witness.n_vars
    j, Q = witness.factor_out(n - 1)
    lead = witness.leading_form()
    candidates = [d for d in enum_directions(field, n)
                  if lead.evaluate(d.rep) != 0]
    mask = _mask(E, field, n)
    missing = None
    for d in candidates:
        if not _covered_lines(mask, field, d).any():
            missing = d
            break
    if candidates and missing is None and witness.degree < field.q:
        raise InternalCheckFailure('every candidate direction is covered')
    return RefutationReport(j, Q, lead, candidates, missing)


def certify_set(E, field, n, D=None):
    """Vanishing search on E with multiplicity 1 (D defaults to q - 1),
    with refutation diagnostics attached when a witness exists."""
    E = _point_set(E)
    D = field.q - 1 if D is None else D
    check_enumeration(field.q ** n, 'F_%d^%d' % (field.q, n))
    cert = find_vanishing_poly(MultiplicityFunction.indicator(field, n, E), D)
    diagnostics = None
    if cert.witness is not None and D < field.q:
        diagnostics = refutation_diagnostics(E, cert.witness)
    return cert, diagnostics


def grassmannian_size(field, n, k):
    return gaussian_binomial(n, k, field.q)
