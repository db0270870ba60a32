"""
Kakeya geometry over the finite local rings F_q[x]/x^k and Z/p^k.

An element of F_q[x]/x^k is encoded by c_0 + c_1 q + ... + c_{k-1} q^{k-1},
where c_j is the field encoding of the coefficient of x^j; an element of
Z/p^k is its residue in [0, p^k). Points of R^n are tuples of encodings
ordered lexicographically.

A direction is a vector with at least one unit coordinate up to
multiplication by units, stored with its first unit coordinate equal to 1.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._config import check_enumeration
from .exceptions import (BadParameters, DegenerateDirection, EmptySet,
                         InternalCheckFailure, NonUnitDivisor, NotKakeya,
                         UnsupportedRing)
from .gf import field_make
from .geometry import enum_directions
from .linalg import identity, mat_mul
from .parallel import run_parallel
from .polymethod import dvir_check, kakeya_line_check, kakeya_size_bound
from .rng import check_seed, make_rng, sub_seed

logger = logging.getLogger(__name__)

# Rings up to this size get full addition and multiplication tables.
RING_TABLE_LIMIT = 1024

RING_KINDS = ('fxk', 'zpk')


class RingSpec(object):
    """The ring F_q[x]/x^k (``kind='fxk'``) or Z/p^k (``kind='zpk'``).

    Use :meth:`poly_mod_xk` or :meth:`int_mod_pk` rather than the
    constructor.
    """

    def __init__(self, kind, field, k):
        if kind not in RING_KINDS:
            raise BadParameters('unknown ring kind %r' % (kind,))
        if k < 1:
            raise BadParameters('need k >= 1, got %d' % k)
        if kind == 'zpk' and field.m != 1:
            raise BadParameters('Z/p^k needs a prime residue field')
        self.kind = kind
        self.field = field
        self.k = int(k)
        self.residue_size = field.q
        self.size = field.q ** self.k
        self._add = self._mul = None
        if self.size <= RING_TABLE_LIMIT:
            elements = range(self.size)
            self._add = np.array([[self.add(a, b) for b in elements]
                                  for a in elements], dtype=np.int64)
            self._mul = np.array([[self.mul(a, b) for b in elements]
                                  for a in elements], dtype=np.int64)

    @classmethod
    def poly_mod_xk(cls, field, k):
        return cls('fxk', field, k)

    @classmethod
    def int_mod_pk(cls, p, k):
        return cls('zpk', field_make(p), k)

    # Encoding ################################################################

    def digits(self, a):
        """Coefficients c_0..c_{k-1} (base-q digits for Z/p^k)."""
        q = self.residue_size
        out = []
        for _ in range(self.k):
            a, c = divmod(a, q)
            out.append(c)
        return out

    def from_digits(self, digits):
        q = self.residue_size
        return sum(int(c) * q ** j for j, c in enumerate(digits))

    def check(self, a):
        a = int(a)
        if not 0 <= a < self.size:
            raise BadParameters('%d is not an element of %r' % (a, self))
        return a

    # Scalar arithmetic #######################################################

    def add(self, a, b):
        if self.kind == 'zpk':
            return (a + b) % self.size
        F = self.field
        return self.from_digits([F.add(x, y) for x, y in
                                 zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self.kind == 'zpk':
            return (-a) % self.size
        F = self.field
        return self.from_digits([F.neg(x) for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul is not None:
            return int(self._mul[a, b])
        if self.kind == 'zpk':
            return (a * b) % self.size
        F = self.field
        x, y = self.digits(a), self.digits(b)
        out = [0] * self.k
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j in range(self.k - i):
                out[i + j] = F.add(out[i + j], F.mul(xi, y[j]))
        return self.from_digits(out)

    def is_unit(self, a):
        return a % self.residue_size != 0

    def valuation(self, a):
        """Largest v <= k with a in m^v, where m is the maximal ideal."""
        for v, c in enumerate(self.digits(a)):
            if c:
                return v
        return self.k

    def inv(self, a):
        if not self.is_unit(a):
            raise NonUnitDivisor('%d is not a unit of %r' % (a, self))
        if self.kind == 'zpk':
            return pow(a, -1, self.size)
        F = self.field
        c = self.digits(a)
        c0_inv = F.inv(c[0])
        b = [c0_inv]
        for j in range(1, self.k):
            s = 0
            for i in range(1, j + 1):
                s = F.add(s, F.mul(c[i], b[j - i]))
            b.append(F.neg(F.mul(c0_inv, s)))
        return self.from_digits(b)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def units(self):
        return [a for a in range(self.size) if self.is_unit(a)]

    def maximal_ideal(self):
        return [a for a in range(self.size) if not self.is_unit(a)]

    # Array arithmetic ########################################################

    def _vectorized(self, func, *arrays):
        ufunc = np.frompyfunc(func, len(arrays), 1)
        return np.asarray(ufunc(*[np.asarray(a, dtype=object)
                                  for a in arrays]), dtype=np.int64)

    def add_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._add is not None:
            return self._add[a, b]
        return self._vectorized(self.add, a, b)

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._mul is not None:
            return self._mul[a, b]
        return self._vectorized(self.mul, a, b)

    # Misc ####################################################################

    def __eq__(self, other):
        return (isinstance(other, RingSpec) and self.kind == other.kind
                and self.field == other.field and self.k == other.k)

    def __hash__(self):
        return hash((self.kind, self.field, self.k))

    def __repr__(self):
        if self.kind == 'zpk':
            return 'RingSpec(Z/%d^%d)' % (self.field.p, self.k)
        return 'RingSpec(F_%d[x]/x^%d)' % (self.field.q, self.k)

    def to_dict(self):
        return {'kind': self.kind, 'q': self.residue_size, 'k': self.k}


def ring_arith(ring, a, b, op):
    """Apply ``op`` ('add', 'sub', 'mul' or 'div') to a and b in ``ring``.

    Raises
    ------
    NonUnitDivisor
    """
    a, b = ring.check(a), ring.check(b)
    try:
        func = {'add': ring.add, 'sub': ring.sub, 'mul': ring.mul,
                'div': ring.div}[op]
    except KeyError:
        raise BadParameters('unknown ring operation %r' % (op,))
    return func(a, b)


###############################################################################
# Points, directions and lines

def ring_points_array(ring, n):
    """All points of R^n as an int64 array, lexicographic order."""
    size = check_enumeration(ring.size ** n, '%r^%d' % (ring, n))
    coords = np.unravel_index(np.arange(size, dtype=np.int64),
                              (ring.size,) * n)
    return np.stack(coords, axis=-1).astype(np.int64)


def ring_point_index(ring, points):
    points = np.asarray(points, dtype=np.int64)
    index = np.zeros(points.shape[:-1], dtype=np.int64)
    for i in range(points.shape[-1]):
        index = index * ring.size + points[..., i]
    return index


@dataclass(frozen=True)
class RingDirection:
    ring: RingSpec
    rep: tuple

    @classmethod
    def from_vector(cls, ring, vector):
        vector = tuple(ring.check(x) for x in vector)
        for x in vector:
            if ring.is_unit(x):
                inv = ring.inv(x)
                return cls(ring, tuple(ring.mul(y, inv) for y in vector))
        raise DegenerateDirection('%r has no unit coordinate' % (vector,))

    @property
    def n(self):
        return len(self.rep)

    @property
    def pivot(self):
        return next(i for i, x in enumerate(self.rep)
                    if self.ring.is_unit(x))

    def to_dict(self):
        return list(self.rep)

    def __repr__(self):
        return 'RingDirection(%r)' % (self.rep,)


def ring_direction_count(ring, n):
    units = ring.size - ring.size // ring.residue_size
    ideal = ring.size // ring.residue_size
    return (ring.size ** n - ideal ** n) // units


def ring_directions(ring, n):
    """Every direction of R^n, sorted by representative.

    Raises
    ------
    EnumerationTooLarge
    """
    if n < 1:
        raise BadParameters('directions need n >= 1, got %d' % n)
    check_enumeration(ring.size ** n, '%r^%d' % (ring, n))
    ideal = ring.maximal_ideal()
    out = []
    for i in range(n):
        for head in itertools.product(ideal, repeat=i):
            for tail in itertools.product(range(ring.size),
                                          repeat=n - 1 - i):
                out.append(RingDirection(ring, head + (1,) + tail))
    out.sort(key=lambda d: d.rep)
    if len(out) != ring_direction_count(ring, n):
        raise InternalCheckFailure('direction count %d does not match the '
                                   'orbit formula' % len(out))
    return out


def ring_line_points(ring, a, b):
    """The line {a + t b : t in R}.

    Raises
    ------
    DegenerateDirection
        If no coordinate of ``b`` is a unit.
    """
    a = tuple(ring.check(x) for x in a)
    b = tuple(ring.check(x) for x in b)
    if len(a) != len(b):
        raise BadParameters('base and direction differ in length')
    if not any(ring.is_unit(x) for x in b):
        raise DegenerateDirection('%r lies in the maximal ideal' % (b,))
    pts = frozenset(tuple(ring.add(x, ring.mul(t, y)) for x, y in zip(a, b))
                    for t in range(ring.size))
    if len(pts) != ring.size:
        raise InternalCheckFailure('line of %d points in %r'
                                   % (len(pts), ring))
    return pts


def _ring_line_coords(ring, direction):
    """Points of every line with this direction, shape
    (|R|^(n-1), |R|, n); bases vanish at the pivot."""
    n = direction.n
    others = ring_points_array(ring, n - 1) if n > 1 \
        else np.zeros((1, 0), dtype=np.int64)
    bases = np.insert(others, direction.pivot, 0, axis=1)
    t = np.arange(ring.size, dtype=np.int64)[None, :, None]
    d = np.asarray(direction.rep, dtype=np.int64)[None, None, :]
    return ring.add_arr(bases[:, None, :], ring.mul_arr(t, d))


def _ring_mask(E, ring, n):
    mask = np.zeros(ring.size ** n, dtype=bool)
    E = [tuple(int(x) for x in p) for p in E]
    if E:
        mask[ring_point_index(ring, np.asarray(E, dtype=np.int64))] = True
    return mask


def _covered_line(mask, ring, direction):
    coords = _ring_line_coords(ring, direction)
    full = mask[ring_point_index(ring, coords)].all(axis=1)
    hits = np.flatnonzero(full)
    if not hits.size:
        return None
    return tuple(int(x) for x in coords[hits[0], 0])


def first_missing_ring_direction(E, ring, n):
    """The first direction with no line inside E, or None."""
    mask = _ring_mask(E, ring, n)
    directions = ring_directions(ring, n)
    found = run_parallel(functools.partial(_covered_line, mask, ring),
                         directions)
    for d, base in zip(directions, found):
        if base is None:
            return d
    return None


def ring_kakeya_check(E, ring, n):
    """True iff E contains a line in every direction of R^n."""
    return first_missing_ring_direction(E, ring, n) is None


###############################################################################
# The coefficient embedding

@dataclass
class RingEmbedding:
    """The F-linear isomorphism R^n -> F^(nk) sending the coefficient of
    x^j in coordinate i to position i*k + j, with the matrix X of
    multiplication by x."""
    ring: RingSpec
    n: int
    X: np.ndarray

    @property
    def dim(self):
        return self.n * self.ring.k

    def phi(self, point):
        out = []
        for a in point:
            out.extend(self.ring.digits(a))
        return tuple(out)

    def phi_inv(self, vector):
        k = self.ring.k
        return tuple(self.ring.from_digits(vector[i * k:(i + 1) * k])
                     for i in range(self.n))

    def pushforward(self, E):
        return frozenset(self.phi(p) for p in E)


def phi_embed(ring, n):
    """Coefficient embedding of (F[x]/x^k)^n into F^(nk).

    Raises
    ------
    UnsupportedRing
        For Z/p^k, which is not a vector space over its residue field.
    """
    if ring.kind != 'fxk':
        raise UnsupportedRing('%r is not an algebra over its residue field'
                              % (ring,))
    k = ring.k
    X = np.zeros((n * k, n * k), dtype=np.int64)
    for i in range(n):
        for j in range(k - 1):
            X[i * k + j + 1, i * k + j] = 1
    power = identity(n * k)
    for _ in range(k):
        power = mat_mul(ring.field, power, X)
    if power.any():
        raise InternalCheckFailure('X^k is not zero')
    return RingEmbedding(ring, n, X)


@dataclass
class RingBoundReport:
    size: int
    ring_size: int
    dimension_bound: int
    c: float
    c_form: float
    slice_bound: int
    directions_confirmed: int
    phi_kakeya: bool
    certificate: Optional[object] = None

    @property
    def passed(self):
        return self.phi_kakeya and self.size >= self.dimension_bound

    def to_dict(self):
        return {'size': self.size, 'ring_size': self.ring_size,
                'dimension_bound': self.dimension_bound, 'c': self.c,
                'c_form': self.c_form, 'slice_bound': self.slice_bound,
                'directions_confirmed': self.directions_confirmed,
                'phi_kakeya': self.phi_kakeya,
                'certificate': self.certificate, 'pass': self.passed}


def _unit_part(ring, w):
    """(s, v0) with w = x^s v0 and some coordinate of v0 a unit."""
    s = min(ring.valuation(a) for a in w)
    v0 = tuple(ring.from_digits(ring.digits(a)[s:] + [0] * s) for a in w)
    return s, v0


def ring_bound_check(E, ring, n, certify=False):
    """Run the embedding argument on an R-Kakeya set E in (F[x]/x^k)^n.

    Every F-direction v of F^(nk) is traced back to an R-direction v0 with
    phi^-1(v) in R v0; the R-line of E in direction v0 must push forward to
    contain an F-line in direction v. The image phi(E) is then checked to be
    Kakeya in F^(nk) and |E| is compared with the dimension-count bound.

    Raises
    ------
    NotKakeya, UnsupportedRing, EnumerationTooLarge
    """
    E = frozenset(tuple(int(x) for x in p) for p in E)
    emb = phi_embed(ring, n)
    missing = first_missing_ring_direction(E, ring, n)
    if missing is not None:
        raise NotKakeya('no line of E has direction %r' % (missing.rep,))
    field = ring.field
    image = emb.pushforward(E)
    mask = _ring_mask(E, ring, n)
    confirmed = 0
    for v in enum_directions(field, emb.dim):
        w = emb.phi_inv(v.rep)
        s, v0 = _unit_part(ring, w)
        direction = RingDirection.from_vector(ring, v0)
        base = _covered_line(mask, ring, direction)
        if base is None:
            raise InternalCheckFailure('direction %r lost' % (direction,))
        start = emb.phi(base)
        line = [tuple(field.add(a, field.mul(c, b))
                      for a, b in zip(start, v.rep)) for c in range(field.q)]
        if not all(p in image for p in line):
            raise InternalCheckFailure('F-line in direction %r missing from '
                                       'phi(E)' % (v.rep,))
        confirmed += 1
    phi_kakeya, _ = kakeya_line_check(image, field, emb.dim)
    if not phi_kakeya:
        raise InternalCheckFailure('phi(E) is not Kakeya in F^%d' % emb.dim)
    certificate = dvir_check(image, field, emb.dim) if certify else None
    bound = kakeya_size_bound(emb.dim, field.q)
    c = (bound / field.q ** emb.dim) ** (1.0 / emb.dim)
    slice_bound = kakeya_size_bound(n, field.q)
    if bound < slice_bound:
        raise InternalCheckFailure('embedding bound %d below the slice bound '
                                   '%d' % (bound, slice_bound))
    return RingBoundReport(len(E), ring.size, bound, c,
                           c ** emb.dim * ring.size ** n, slice_bound,
                           confirmed, phi_kakeya, certificate)


###############################################################################
# Minkowski dimension and search

def minkowski_dim(E, ring):
    """log|E| / log|R|.

    Raises
    ------
    EmptySet
    """
    size = len(set(map(tuple, E)))
    if not size:
        raise EmptySet('the dimension of the empty set is undefined')
    return math.log(size) / math.log(ring.size)


def minkowski_report(family, n):
    """Dimensions of a family of sets E_k in (F[x]/x^k)^n.

    ``family`` is a list of ``(ring, E)`` pairs. Each row holds the
    dimension, the density |E_k| q^(-nk) and the lower bound
    n (1 + log c / log q) where c^(nk) q^(nk) is the dimension-count bound.
    """
    rows = []
    for ring, E in family:
        size = len(set(map(tuple, E)))
        dim = minkowski_dim(E, ring)
        q = ring.residue_size
        nk = n * ring.k
        bound = kakeya_size_bound(nk, q)
        c = (bound / q ** nk) ** (1.0 / nk)
        rows.append({'k': ring.k, 'size': size, 'dimension': dim,
                     'density': size / q ** nk,
                     'lower_bound': n * (1 + math.log(c) / math.log(q))})
    densities = [r['density'] for r in rows]
    decreasing = all(a >= b for a, b in zip(densities, densities[1:]))
    return {'rows': rows, 'density_decreasing': decreasing}


def grow_random_kakeya(ring, n, seed):
    """Union of one random line per direction."""
    rng = make_rng(check_seed(seed))
    E = set()
    for d in ring_directions(ring, n):
        coords = _ring_line_coords(ring, d)
        j = int(rng.integers(len(coords)))
        E.update(tuple(int(x) for x in p) for p in coords[j])
    return frozenset(E)


def prune_kakeya(E, ring, n, seed):
    """Drop points in random order while the set stays Kakeya."""
    rng = make_rng(check_seed(seed), 1)
    E = set(E)
    order = sorted(E)
    for i in rng.permutation(len(order)):
        p = order[int(i)]
        E.discard(p)
        if first_missing_ring_direction(E, ring, n) is not None:
            E.add(p)
    return frozenset(E)


def _search_trial(ring, n, seed, index):
    s = sub_seed(seed, index)
    return prune_kakeya(grow_random_kakeya(ring, n, s), ring, n, s)


def search_small_kakeya(ring, n, trials, seed):
    """Random growth then greedy pruning, keeping the smallest set."""
    if trials < 1:
        raise BadParameters('need at least one trial')
    seed = check_seed(seed)
    sets = run_parallel(functools.partial(_search_trial, ring, n, seed),
                        range(trials))
    sizes = [len(E) for E in sets]
    best = sets[int(np.argmin(sizes))]
    report = {'seed': seed, 'trials': trials, 'sizes': sizes,
              'best_size': len(best), 'best': sorted(best),
              'density': len(best) / ring.size ** n}
    if ring.kind == 'fxk':
        report['dimension_bound'] = kakeya_size_bound(n * ring.k,
                                                      ring.field.q)
    return report
