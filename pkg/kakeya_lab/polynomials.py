"""
Sparse multivariate polynomials over a finite field.

A polynomial maps exponent vectors to nonzero coefficient encodings (see
:mod:`kakeya_lab.gf`). Taylor coefficients around a point are Hasse
coefficients: the coefficient of (x - v)^e in P, which is the notion that
stays meaningful in characteristic p.
"""

import math
import numbers
import re
from types import MappingProxyType

import numpy as np

from .gf import FieldElement
from ._config import check_enumeration
from .exceptions import (DimensionMismatch, ZeroPolynomial, BadParameters,
                         InternalCheckFailure)

# Degree of the zero polynomial.
NEG_INF = float('-inf')

# Largest F^n that zero counting enumerates, independent of cap_enum.
ZERO_COUNT_CAP = 10 ** 8


def graded_lex_key(exponents):
    """Sort key listing monomials by degree, then x1 before x2 before ..."""
    return (sum(exponents), tuple(-e for e in exponents))


def _text_order_key(exponents):
    return (-sum(exponents), tuple(-e for e in exponents))


def monomials(n, D):
    """All exponent vectors in ``n`` variables of total degree <= ``D``,
    in graded-lex order."""
    if n == 0:
        return [()] if D >= 0 else []
    out = []

    def rec(prefix, left, vars_left):
        if vars_left == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, vars_left - 1)

    for degree in range(D + 1):
        rec((), degree, n)
    return out


def _binom_mod(a, e, p):
    return math.comb(a, e) % p


class MultivariatePolynomial(object):
    """A polynomial in ``n_vars`` variables over ``field``.

    Parameters
    ----------
    field: FieldSpec
    n_vars: int
    terms: dict, optional
        Map from exponent tuples to coefficients, given as encodings or
        :class:`~kakeya_lab.gf.FieldElement`. Repeated exponents are summed
        and zero coefficients dropped.

    Notes
    -----
    Plain integers used in arithmetic (``P * 2``, ``P + 1``) are read as
    elements of the prime subfield; integers inside ``terms`` are element
    encodings.
    """

    __slots__ = ('field', 'n_vars', '_terms')

    def __init__(self, field, n_vars, terms=None):
        self.field = field
        self.n_vars = int(n_vars)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n_vars:
                raise DimensionMismatch(
                    'exponent %r has %d entries, expected %d'
                    % (exps, len(exps), self.n_vars))
            if any(e < 0 for e in exps):
                raise BadParameters('negative exponent in %r' % (exps,))
            if isinstance(c, FieldElement):
                c = field.element(c).value
            else:
                c = field.check(c)
            if c:
                clean[exps] = field.add(clean.get(exps, 0), c)
        self._terms = {e: c for e, c in clean.items() if c}

    # Constructors ############################################################

    @classmethod
    def zero(cls, field, n_vars):
        return cls(field, n_vars)

    @classmethod
    def constant(cls, field, n_vars, c):
        return cls(field, n_vars, {(0,) * n_vars: c})

    @classmethod
    def variable(cls, field, n_vars, index):
        exps = [0] * n_vars
        exps[index] = 1
        return cls(field, n_vars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, field, n_vars, exponents, c=1):
        return cls(field, n_vars, {tuple(exponents): c})

    @classmethod
    def linear_form(cls, field, coefficients, constant=0):
        """sum_i coefficients[i] * x_i + constant."""
        n = len(coefficients)
        terms = {(0,) * n: constant}
        for i, c in enumerate(coefficients):
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(field, n, terms)

    # Accessors ###############################################################

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coefficient(self, exponents):
        return self._terms.get(tuple(exponents), 0)

    @property
    def degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self):
        return all(sum(e) == 0 for e in self._terms)

    def degree_in(self, index):
        if not self._terms:
            return NEG_INF
        return max(e[index] for e in self._terms)

    # Arithmetic ##############################################################

    def _same_ring(self, other):
        if other.field != self.field or other.n_vars != self.n_vars:
            raise DimensionMismatch(
                'cannot combine polynomials over %r in %d variables and over '
                '%r in %d variables' % (self.field, self.n_vars, other.field,
                                        other.n_vars))

    def _coerce(self, other):
        if isinstance(other, MultivariatePolynomial):
            self._same_ring(other)
            return other
        if isinstance(other, FieldElement):
            return MultivariatePolynomial.constant(
                self.field, self.n_vars, self.field.element(other).value)
        if isinstance(other, numbers.Integral):
            return MultivariatePolynomial.constant(
                self.field, self.n_vars, self.field.scalar(other))
        return NotImplemented

    def _new(self, terms):
        poly = MultivariatePolynomial.__new__(MultivariatePolynomial)
        poly.field = self.field
        poly.n_vars = self.n_vars
        poly._terms = {e: c for e, c in terms.items() if c}
        return poly

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        add = self.field.add
        for e, c in other._terms.items():
            terms[e] = add(terms.get(e, 0), c)
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return self._new({e: neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c):
        """Multiply by the field element with encoding ``c``."""
        mul = self.field.mul
        return self._new({e: mul(v, c) for e, v in self._terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        add, mul = self.field.add, self.field.mul
        out = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                e = tuple(x + y for x, y in zip(a, b))
                out[e] = add(out.get(e, 0), mul(c, d))
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            raise BadParameters('negative power of a polynomial')
        result = MultivariatePolynomial.constant(self.field, self.n_vars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultivariatePolynomial):
            return NotImplemented
        return (self.field == other.field and self.n_vars == other.n_vars
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.field, self.n_vars,
                     frozenset(self._terms.items())))

    # Evaluation ##############################################################

    def _check_point(self, point):
        if len(point) != self.n_vars:
            raise DimensionMismatch('point %r has %d coordinates, expected %d'
                                    % (tuple(point), len(point),
                                       self.n_vars))

    def evaluate(self, point):
        """Value (an encoding) of the polynomial at ``point``."""
        self._check_point(point)
        field = self.field
        point = [field.element(x).value if isinstance(x, FieldElement)
                 else field.check(x) for x in point]
        total = 0
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = field.mul(term, field.pow(x, e))
            total = field.add(total, term)
        return total

    def evaluate_all(self, cap=None):
        """Values at every point of F^n, in lexicographic point order.

        Returns a numpy int64 array of length q**n_vars whose entry at index
        sum_i x_i q^(n-1-i) is the value at (x_1, ..., x_n). ``cap`` overrides
        the configured enumeration cap.
        """
        field = self.field
        q, n = field.q, self.n_vars
        size = check_enumeration(q ** n, 'F_%d^%d' % (q, n), cap=cap)
        coords = np.unravel_index(np.arange(size), (q,) * n) if n else ()
        total = np.zeros(size, dtype=np.int64)
        if not self._terms:
            return total
        max_exp = max(max(e) if e else 0 for e in self._terms)
        table = field.power_table(max_exp)
        for exps, c in self._terms.items():
            term = np.full(size, c, dtype=np.int64)
            for i, e in enumerate(exps):
                if e:
                    term = field.mul_arr(term, table[e][coords[i]])
            total = field.add_arr(total, term)
        return total

    def zero_count(self):
        if not self._terms:
            raise ZeroPolynomial('the zero polynomial vanishes everywhere')
        return int(np.count_nonzero(
            self.evaluate_all(cap=ZERO_COUNT_CAP) == 0))

    # Taylor expansion ########################################################

    def hasse_coefficient(self, point, e):
        """Coefficient (an encoding) of (x - point)^e in the polynomial."""
        self._check_point(point)
        if len(e) != self.n_vars:
            raise DimensionMismatch('exponent %r has %d entries, expected %d'
                                    % (tuple(e), len(e), self.n_vars))
        field = self.field
        p = field.p
        total = 0
        for a, c in self._terms.items():
            if any(ai < ei for ai, ei in zip(a, e)):
                continue
            term = c
            for ai, ei, v in zip(a, e, point):
                b = _binom_mod(ai, ei, p)
                if b == 0:
                    term = 0
                    break
                term = field.mul(term, field.mul(b, field.pow(v, ai - ei)))
            if term:
                total = field.add(total, term)
        return total

    def shift(self, point, max_degree=None):
        """The polynomial x -> P(x + point), optionally truncated to total
        degree <= ``max_degree``."""
        self._check_point(point)
        field = self.field
        p = field.p
        out = {}
        for a, c in self._terms.items():
            # per variable: list of (e_i, C(a_i, e_i) v_i^(a_i - e_i))
            factors = []
            for ai, v in zip(a, point):
                row = []
                for ei in range(ai + 1):
                    if max_degree is not None and ei > max_degree:
                        break
                    b = _binom_mod(ai, ei, p)
                    if b:
                        w = field.mul(b, field.pow(v, ai - ei))
                        if w:
                            row.append((ei, w))
                factors.append(row)
            partial = {(): c}
            for row in factors:
                nxt = {}
                for exps, val in partial.items():
                    used = sum(exps)
                    for ei, w in row:
                        if max_degree is not None and used + ei > max_degree:
                            continue
                        key = exps + (ei,)
                        nxt[key] = field.add(nxt.get(key, 0),
                                             field.mul(val, w))
                partial = nxt
            for exps, val in partial.items():
                out[exps] = field.add(out.get(exps, 0), val)
        return self._new(out)

    def vanishing_order(self, point):
        """Largest m such that every Hasse coefficient of order < m at
        ``point`` vanishes (infinite for the zero polynomial)."""
        if not self._terms:
            return float('inf')
        shifted = self.shift(point)
        return min(sum(e) for e in shifted._terms)

    def vanishes_to_order(self, point, order):
        """True iff all Hasse coefficients at ``point`` of total order
        < ``order`` are zero."""
        if order <= 0:
            return True
        return self.shift(point, max_degree=order - 1).is_zero()

    # Structure ###############################################################

    def homogeneous_part(self, d):
        return self._new({e: c for e, c in self._terms.items()
                          if sum(e) == d})

    def leading_form(self):
        """Top-degree homogeneous part."""
        if not self._terms:
            return self._new({})
        return self.homogeneous_part(self.degree)

    def is_homogeneous(self):
        return len({sum(e) for e in self._terms}) <= 1

    def factor_out(self, index):
        """Return (j, Q) with P = x_index^j * Q and x_index not dividing Q."""
        if not self._terms:
            raise ZeroPolynomial('cannot factor the zero polynomial')
        if not 0 <= index < self.n_vars:
            raise DimensionMismatch('variable index %d out of range for %d '
                                    'variables' % (index, self.n_vars))
        j = min(e[index] for e in self._terms)
        terms = {}
        for e, c in self._terms.items():
            e = list(e)
            e[index] -= j
            terms[tuple(e)] = c
        return j, self._new(terms)

    def compose(self, substitutions):
        """Substitute polynomial ``substitutions[i]`` for x_i.

        All substitutions must share one field and variable count, which
        become those of the result.
        """
        if len(substitutions) != self.n_vars:
            raise DimensionMismatch('%d substitutions for %d variables'
                                    % (len(substitutions), self.n_vars))
        if self.n_vars == 0:
            raise BadParameters('cannot compose a polynomial in 0 variables')
        target = substitutions[0]
        for s in substitutions:
            if s.field != self.field:
                raise DimensionMismatch('substitution over another field')
            target._same_ring(s)
        powers = [[MultivariatePolynomial.constant(self.field, target.n_vars,
                                                   1)]
                  for _ in substitutions]
        result = MultivariatePolynomial.zero(self.field, target.n_vars)
        for a, c in self._terms.items():
            term = MultivariatePolynomial.constant(self.field, target.n_vars,
                                                   c)
            for i, e in enumerate(a):
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(cache[-1] * substitutions[i])
                if e:
                    term = term * cache[e]
            result = result + term
        return result

    # Text form ###############################################################

    def __str__(self):
        if not self._terms:
            return '0'
        parts = []
        for e in sorted(self._terms, key=_text_order_key):
            factors = [str(self._terms[e])]
            for i, ei in enumerate(e):
                if ei == 1:
                    factors.append('x%d' % (i + 1))
                elif ei > 1:
                    factors.append('x%d^%d' % (i + 1, ei))
            parts.append('*'.join(factors))
        return ' + '.join(parts)

    def __repr__(self):
        return 'MultivariatePolynomial(%r, %d, %r)' % (self.field,
                                                       self.n_vars, str(self))

    _FACTOR = re.compile(r'^(?:(\d+)|x(\d+)(?:\^(\d+))?)$')

    @classmethod
    def from_string(cls, field, n_vars, text):
        """Parse the text form ``"c*x1^a1*...*xn^an + ..."``.

        Coefficients are element encodings; a missing coefficient means 1.
        """
        text = text.strip()
        if text == '':
            raise BadParameters('empty polynomial text')
        terms = {}
        for raw_term in text.split('+'):
            raw_term = raw_term.strip()
            if not raw_term:
                raise BadParameters('empty term in %r' % text)
            coeff = 1
            exps = [0] * n_vars
            for factor in raw_term.split('*'):
                match = cls._FACTOR.match(factor.strip())
                if match is None:
                    raise BadParameters('cannot parse factor %r in %r'
                                        % (factor, text))
                number, var, power = match.groups()
                if number is not None:
                    coeff = field.mul(coeff, field.check(int(number)))
                else:
                    index = int(var) - 1
                    if not 0 <= index < n_vars:
                        raise DimensionMismatch(
                            'variable x%s in a polynomial with %d variables'
                            % (var, n_vars))
                    exps[index] += int(power) if power is not None else 1
            key = tuple(exps)
            terms[key] = field.add(terms.get(key, 0), coeff)
        return cls(field, n_vars, terms)

    def to_dict(self):
        return {'n_vars': self.n_vars, 'text': str(self)}


###############################################################################
# Functional interface

def poly_eval(P, v):
    """Value of ``P`` at ``v`` as a :class:`~kakeya_lab.gf.FieldElement`."""
    return FieldElement(P.field, P.evaluate(v))


def hasse_coefficient(P, v, e):
    """Coefficient of (x - v)^e in ``P`` as a FieldElement."""
    return FieldElement(P.field, P.hasse_coefficient(v, e))


def poly_factor_out(P, var_index):
    """Return ``(j, Q)`` with ``P = x_var^j * Q``, ``j`` maximal."""
    return P.factor_out(var_index)


def zero_count(P):
    """Number of zeros of ``P`` in F^n, checked against d * q^(n-1).

    Raises
    ------
    ZeroPolynomial, EnumerationTooLarge
    """
    count = P.zero_count()
    q, n = P.field.q, P.n_vars
    if n >= 1 and count > P.degree * q ** (n - 1):
        raise InternalCheckFailure(
            '%s has %d zeros, above the bound %d * %d^%d'
            % (P, count, P.degree, q, n - 1))
    return count


def root_multiplicity(h, t):
    """Multiplicity of ``t`` as a root of the univariate polynomial ``h``."""
    if h.n_vars != 1:
        raise DimensionMismatch('root multiplicity needs a univariate '
                                'polynomial, got %d variables' % h.n_vars)
    if h.is_zero():
        raise ZeroPolynomial('every element is a root of the zero '
                             'polynomial')
    return h.vanishing_order((t,))
