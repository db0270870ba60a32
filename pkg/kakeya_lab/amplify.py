"""
Random translation amplification and random projection flattening.

Amplification replaces f by f_M(v) = (sum_m f(v - u_m)^n)^(1/n) for random
translations u_1..u_M of the first n-1 coordinates, which multiplies the
n-th power of the l^n norm by M exactly while dominating every translate.
Flattening pushes a function on F^N down to F^n along a random linear map
T_hat(w, v_N) = (T w, v_N) and compares the maximal functions on both
sides.
"""

import functools
import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from ._config import check_enumeration, get_config
from .exceptions import (BadParameters, DimensionMismatch,
                         InternalCheckFailure, LabWarning, ZeroFunction)
from .geometry import (ParametricCurve, enum_lines, is_constant_after,
                       points_array, point_index)
from .linalg import apply_linear, identity, rank
from .logger import Logger
from .maximal import MaximalResult, PointFunction, curve_maximal, lp_norm
from .parallel import run_parallel
from .rng import check_seed, make_rng, sub_seed

logger = logging.getLogger(__name__)

# Relative tolerance of the floating point identities.
REL_TOL = 1e-12


def _rel_close(a, b, tol=REL_TOL):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


###############################################################################
# Translation amplification

@dataclass
class AmplifiedInstance:
    """Result of :func:`amplify`.

    ``translations`` and ``omega`` live in F^(n-1); ``f_M`` on F^n.
    """
    translations: list
    f_M: PointFunction
    omega: frozenset
    anchors: list
    seed: int
    mode: str = 'random'
    norm_check: dict = dc_field(default_factory=dict)

    @property
    def M(self):
        return len(self.translations)

    def to_dict(self):
        return {'M': self.M, 'J': len(self.anchors), 'seed': self.seed,
                'mode': self.mode,
                'translations': [list(u) for u in self.translations],
                'omega_size': len(self.omega),
                'norm_check': self.norm_check}


def _translate_values(f, u):
    """Array of f(v - (u, 0)) in lexicographic order of v."""
    field, n = f.field, f.n
    pts = points_array(field, n)
    src = pts.copy()
    src[:, :n - 1] = field.sub_arr(pts[:, :n - 1],
                                   np.asarray(u, dtype=np.int64)[None, :])
    return f.flat[point_index(field, src)]


def _omega(field, anchors, translations):
    return frozenset(tuple(field.add(a, b) for a, b in zip(w, u))
                     for w in anchors for u in translations)


def _sample_translations(field, n, M, seed, key):
    rng = make_rng(seed, key)
    draws = rng.integers(0, field.q, size=(M, n - 1))
    return [tuple(int(x) for x in row) for row in draws]


def _check_anchors(field, n, anchors):
    anchors = [tuple(field.check(x) for x in w) for w in anchors]
    if any(len(w) != n - 1 for w in anchors):
        raise DimensionMismatch('anchors must be points of F^%d' % (n - 1))
    if len(set(anchors)) != len(anchors):
        raise BadParameters('anchors must be distinct')
    return anchors


class Amplifier(Logger):
    """Build f_M from f and a set of translations, checking the norm
    identity and pointwise domination."""

    def __init__(self, f):
        super().__init__(name='kakeya_lab.amplify')
        self.f = f

    def __call__(self, translations):
        f = self.f
        n = f.n
        shifted = [_translate_values(f, u) for u in translations]
        powers = np.stack(shifted) ** n
        totals = np.array([math.fsum(col) for col in powers.T.tolist()])
        f_M = PointFunction(f.field, n, totals ** (1.0 / n))
        lhs = lp_norm(f_M, n) ** n
        rhs = len(translations) * lp_norm(f, n) ** n
        if not _rel_close(lhs, rhs):
            raise InternalCheckFailure('norm identity fails: %r != %r'
                                       % (lhs, rhs))
        for vals in shifted:
            if np.any(f_M.flat < vals * (1 - REL_TOL)):
                raise InternalCheckFailure('f_M does not dominate a '
                                           'translate of f')
        self.debug('M=%d, |f_M|^n=%r' % (len(translations), lhs))
        return f_M, {'lhs': lhs, 'rhs': rhs, 'dominates': True}


def amplify(f, anchors, M, seed, mode='random', retries=None,
            translations=None):
    """Random translation amplification of ``f``.

    Parameters
    ----------
    f: PointFunction
    anchors: list of points of F^(n-1)
        Distinct points w_1..w_J.
    M: int
        Number of translations.
    seed: int
    mode: {'random', 'best_of'}
        ``'best_of'`` draws ``retries`` translation sets (default from
        :func:`~kakeya_lab.lab_config`) and keeps the one with the largest
        Omega; ties go to the earliest draw.
    translations: list, optional
        Explicit translations; M and mode are then ignored.
    """
    field, n = f.field, f.n
    seed = check_seed(seed)
    anchors = _check_anchors(field, n, anchors)
    if translations is not None:
        translations = [tuple(field.check(x) for x in u)
                        for u in translations]
        if not translations or any(len(u) != n - 1 for u in translations):
            raise DimensionMismatch('translations must be points of F^%d'
                                    % (n - 1))
    else:
        if M < 1:
            raise BadParameters('M must be >= 1, got %r' % (M,))
        if mode == 'random':
            translations = _sample_translations(field, n, M, seed, 0)
        elif mode == 'best_of':
            R = retries if retries is not None else get_config()['best_of']
            best = None
            for r in range(R):
                us = _sample_translations(field, n, M, seed, r)
                size = len(_omega(field, anchors, us))
                if best is None or size > best[0]:
                    best = (size, us)
            translations = best[1]
        else:
            raise BadParameters("mode must be 'random' or 'best_of', got %r"
                                % (mode,))
    f_M, check = Amplifier(f)(translations)
    return AmplifiedInstance(translations, f_M,
                             _omega(field, anchors, translations), anchors,
                             seed, mode, check)


def expected_omega_size(J, M, q, n):
    """E|Omega| for J anchors and M uniform translations in F^(n-1)."""
    size = q ** (n - 1)
    return size * (1 - (1 - J / size) ** M)


def _omega_trial(field, n, anchors, M, seed, index):
    us = _sample_translations(field, n, M, sub_seed(seed, index), 0)
    return len(_omega(field, anchors, us))


def omega_statistics(field, n, anchors, M, trials, seed):
    """Monte Carlo mean of |Omega| against the exact expectation."""
    anchors = _check_anchors(field, n, anchors)
    if trials < 1:
        raise BadParameters('need at least one trial')
    sizes = run_parallel(
        functools.partial(_omega_trial, field, n, anchors, M, seed),
        range(trials))
    J = len(anchors)
    return {'seed': seed, 'trials': trials,
            'mean': math.fsum(sizes) / trials,
            'expected': expected_omega_size(J, M, field.q, n),
            'scale': min(M * J, field.q ** (n - 1))}


@dataclass
class MChoice:
    M: int
    clamped: bool
    raw: float


def choose_M(lam, f, K0=None):
    """Greatest integer <= lam^n / (K0 |f|_n)^n, raised to 1 with a flag.

    Raises
    ------
    ZeroFunction
    """
    if K0 is None:
        K0 = get_config()['k0']
    norm = lp_norm(f, f.n)
    if norm == 0:
        raise ZeroFunction('cannot amplify the zero function')
    raw = (lam / (K0 * norm)) ** f.n
    M = math.floor(raw * (1 + REL_TOL))
    clamped = M < 1
    if clamped:
        warnings.warn('lambda is below K0 * |f|; using M = 1', LabWarning)
        M = 1
    return MChoice(M, clamped, raw)


def translated_curve_sums(instance, f, curves):
    """Compare each curve sum of f with the sum of f_M over every
    translate of the curve by (u_m, 0).

    Points on the hyperplane x_n = 0 are left out of both sums. Returns a
    list of ``(curve_index, m, original, translated)`` rows.
    """
    field, n = f.field, f.n
    rows = []
    for i, curve in enumerate(curves):
        pts = [p for p in curve.points() if p[-1] != 0]
        original = math.fsum(f(p) for p in pts)
        for m, u in enumerate(instance.translations):
            moved = [tuple(field.add(a, b) for a, b in zip(p[:-1], u))
                     + (p[-1],) for p in pts]
            translated = math.fsum(instance.f_M(p) for p in moved)
            if translated < original * (1 - REL_TOL):
                raise InternalCheckFailure(
                    'translate %d of curve %d loses mass: %r < %r'
                    % (m, i, translated, original))
            rows.append((i, m, original, translated))
    return rows


###############################################################################
# Projection flattening

@dataclass
class FlatProjection:
    """A surjective map T: F^(N-1) -> F^(n-1) and its extension
    T_hat(w, v_N) = (T w, v_N)."""
    field: object
    T: np.ndarray
    T_hat: np.ndarray
    seed: int
    fallback: bool = False

    @property
    def N(self):
        return self.T_hat.shape[1]

    @property
    def n(self):
        return self.T_hat.shape[0]

    def apply(self, points):
        return apply_linear(self.field, self.T_hat, points)

    def apply_base(self, points):
        return apply_linear(self.field, self.T, points)

    def to_dict(self):
        return {'T': self.T.tolist(), 'seed': self.seed,
                'fallback': self.fallback}


def extend_projection(T):
    T = np.asarray(T, dtype=np.int64)
    rows, cols = T.shape
    T_hat = np.zeros((rows + 1, cols + 1), dtype=np.int64)
    T_hat[:rows, :cols] = T
    T_hat[rows, cols] = 1
    return T_hat


def random_flat_projection(field, N, n, seed, attempts=None):
    """Uniform random surjective T: F^(N-1) -> F^(n-1) by rejection.

    After ``attempts`` rank-deficient draws (default from
    :func:`~kakeya_lab.lab_config`) the coordinate projection is used and
    flagged.
    """
    if not N >= n >= 2:
        raise BadParameters('need N >= n >= 2, got N=%d, n=%d' % (N, n))
    seed = check_seed(seed)
    if attempts is None:
        attempts = get_config()['projection_attempts']
    rng = make_rng(seed)
    for _ in range(attempts):
        T = rng.integers(0, field.q, size=(n - 1, N - 1)).astype(np.int64)
        if rank(field, T) == n - 1:
            return FlatProjection(field, T, extend_projection(T), seed)
    warnings.warn('no surjective map after %d draws, using the coordinate '
                  'projection' % attempts, LabWarning)
    T = identity(N - 1)[:n - 1]
    return FlatProjection(field, T, extend_projection(T), seed, True)


def pushforward_power(f, projection):
    """f_T(x) = (sum over T_hat(v) = x of f(v)^n)^(1/n) on F^n.

    Fibers are summed with :func:`math.fsum`, so the result does not depend
    on the order of points within a fiber.
    """
    field = f.field
    if f.n != projection.N:
        raise DimensionMismatch('function on F^%d, projection from F^%d'
                                % (f.n, projection.N))
    n = projection.n
    images = projection.apply(points_array(field, f.n))
    idx = point_index(field, images)
    powers = f.flat ** n
    order = np.argsort(idx, kind='stable')
    cuts = np.flatnonzero(np.diff(idx[order])) + 1
    totals = np.zeros(field.q ** n)
    for group in np.split(order, cuts):
        if group.size:
            totals[idx[group[0]]] = math.fsum(powers[group].tolist())
    f_T = PointFunction(field, n, totals ** (1.0 / n))
    lhs, rhs = lp_norm(f_T, n), lp_norm(f.flat, n)
    if not _rel_close(lhs, rhs):
        raise InternalCheckFailure('pushforward changed the l^%d norm: %r vs '
                                   '%r' % (n, lhs, rhs))
    return f_T


def pushforward_sup(g, projection, W=None):
    """g_T(y) = sup of g(w) over w in W with T w = y, zero when empty.

    ``g`` is a dict or a MaximalResult keyed by points of F^(N-1); ``W``
    defaults to the keys of ``g``. Returns a dict over all of F^(n-1) in
    lexicographic order.
    """
    if isinstance(g, MaximalResult):
        g = g.as_dict()
    field = projection.field
    domain = sorted(g) if W is None else sorted(tuple(w) for w in W)
    out = {tuple(int(x) for x in y): 0.0
           for y in points_array(field, projection.n - 1)}
    if not domain:
        return out
    images = projection.apply_base(np.asarray(domain, dtype=np.int64))
    for w, y in zip(domain, images.tolist()):
        y = tuple(y)
        out[y] = max(out[y], float(g.get(w, 0.0)))
    return out


@dataclass
class FlatteningReport:
    violations: list
    max_ratio: float
    g_T: dict
    f_T_star: dict

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {'violations': self.violations, 'max_ratio': self.max_ratio,
                'ok': self.ok}


def flattening_check(f, projection, W=None):
    """Compare g_T with (f_T)* pointwise for the line family, where g is
    the line maximal function of f on F^N restricted to W."""
    g = curve_maximal(f)
    g_T = pushforward_sup(g, projection, W)
    f_T_star = curve_maximal(pushforward_power(f, projection)).as_dict()
    violations = []
    max_ratio = 0.0
    for y, value in g_T.items():
        bound = f_T_star[y]
        if value > bound * (1 + 1e-9) + 1e-12:
            violations.append(y)
        if bound > 0:
            max_ratio = max(max_ratio, value / bound)
    if violations:
        logger.warning('%d points where g_T exceeds (f_T)*', len(violations))
    return FlatteningReport(violations, max_ratio, g_T, f_T_star)


def curve_fiber_bound(curve, projection):
    """Largest number of points of the curve in one fiber of T_hat.

    Returns ``None`` when T_hat maps the curve to a point; otherwise the
    fiber size, which must not exceed the curve degree.
    """
    if is_constant_after(curve, projection.T_hat):
        return None
    pts = sorted(curve.points())
    images = projection.apply(np.asarray(pts, dtype=np.int64))
    counts = {}
    for y in map(tuple, images.tolist()):
        counts[y] = counts.get(y, 0) + 1
    largest = max(counts.values())
    if largest > curve.degree:
        raise InternalCheckFailure('%d points of %r in one fiber, degree %d'
                                   % (largest, curve, curve.degree))
    return largest


def _collision_trial(field, N, n, omega, seed, index):
    projection = random_flat_projection(field, N, n, sub_seed(seed, index))
    images = projection.apply_base(omega)
    _, counts = np.unique(images, axis=0, return_counts=True)
    collisions = int(np.sum(counts * (counts - 1)))
    return collisions, len(counts)


def collision_stats(omega, field, n, trials, seed, c=0.2):
    """Collision counts of |Omega| points under random surjections
    F^(N-1) -> F^(n-1).

    A collision is an ordered pair w != w' with T w = T w'. The mean is
    compared with |Omega|^2 q^(1-n) (``pass`` when within a factor 4), and
    ``image_success`` is the fraction of trials with
    |T(Omega)| >= c |Omega| min(1, q^(n-1) / |Omega|).
    """
    if trials < 1:
        raise BadParameters('need at least one trial')
    seed = check_seed(seed)
    omega = np.asarray(sorted(set(tuple(int(x) for x in w) for w in omega)),
                       dtype=np.int64)
    if not len(omega):
        raise BadParameters('Omega is empty')
    N = omega.shape[1] + 1
    results = run_parallel(
        functools.partial(_collision_trial, field, N, n, omega, seed),
        range(trials))
    size = len(omega)
    mean = math.fsum(r[0] for r in results) / trials
    bound = size ** 2 * float(field.q) ** (1 - n)
    target = c * size * min(1.0, field.q ** (n - 1) / size)
    success = sum(1 for r in results if r[1] >= target) / trials
    return {'seed': seed, 'trials': trials, 'mean': mean, 'bound': bound,
            'pass': mean <= 4 * bound, 'image_success': success, 'c': c,
            'omega_size': size}


def exact_collision_probability(w1, w2, field, n):
    """Probability that T w1 = T w2 for T uniform among surjections
    F^(N-1) -> F^(n-1), by enumerating every matrix."""
    w1 = np.asarray(w1, dtype=np.int64)
    w2 = np.asarray(w2, dtype=np.int64)
    cols = len(w1)
    check_enumeration(field.q ** ((n - 1) * cols), 'matrices')
    diff = field.sub_arr(w1, w2)
    hits = total = 0
    for entries in itertools.product(range(field.q), repeat=(n - 1) * cols):
        T = np.asarray(entries, dtype=np.int64).reshape(n - 1, cols)
        if rank(field, T) != n - 1:
            continue
        total += 1
        if not apply_linear(field, T, diff).any():
            hits += 1
    return Fraction(hits, total)


def line_curves(field, n):
    """Every line of F^n as a :class:`ParametricCurve`."""
    return [ParametricCurve.line(field, line.base, line.direction.rep)
            for line in enum_lines(field, n)]
