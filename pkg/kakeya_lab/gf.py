"""
Exact arithmetic in the finite fields F_{p^m}.

An element is the residue of c_0 + c_1 x + ... + c_{m-1} x^{m-1} modulo a
monic irreducible polynomial of degree m over F_p. It is encoded by the
integer c_0 + c_1 p + ... + c_{m-1} p^{m-1}, which lies in [0, q). Zero is
encoded by 0 and one by 1; for a prime field the encoding is the residue
itself. Every array-valued helper works on numpy int64 arrays of encodings.
"""

import functools
import numbers

import numpy as np

from .exceptions import (NonPrime, ReducibleModulus, DivisionByZero,
                         BadParameters)

# Fields up to this order get log/antilog and inverse tables.
TABLE_LIMIT = 2 ** 16
# Fields up to this order also get a full addition table.
ADD_TABLE_LIMIT = 2 ** 10
MAX_ORDER = 2 ** 32


def is_prime(n):
    """Deterministic primality test by trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n):
    """Return the sorted distinct prime factors of ``n >= 1``."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


###############################################################################
# Polynomials over F_p as coefficient lists, lowest degree first

def _poly_rem(a, b, p):
    """Remainder of ``a`` by the monic polynomial ``b`` over F_p."""
    a = list(a)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] % p
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    rem = [c % p for c in a[:db]]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _monic_polys(p, degree):
    """All monic polynomials of the given degree, in lexicographic order."""
    for value in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            value, c = divmod(value, p)
            coeffs.append(c)
        yield coeffs + [1]


def is_irreducible(coeffs, p):
    """Test a monic polynomial over F_p for irreducibility.

    Trial division by every monic polynomial of degree at most half the
    degree of ``coeffs`` (lowest degree first).
    """
    m = len(coeffs) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if coeffs[0] % p == 0:
        return False
    for degree in range(1, m // 2 + 1):
        for divisor in _monic_polys(p, degree):
            if not _poly_rem(coeffs, divisor, p):
                return False
    return True


def default_modulus(p, m):
    """First monic irreducible polynomial of degree ``m`` over F_p.

    Candidates x^m + c_{m-1} x^{m-1} + ... + c_0 are scanned in
    lexicographic order of (c_{m-1}, ..., c_0).
    """
    for coeffs in _monic_polys(p, m):
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ReducibleModulus('no irreducible polynomial of degree %d over '
                           'F_%d' % (m, p))  # pragma: no cover


###############################################################################
# Fields

class FieldSpec(object):
    """The finite field F_q with q = p^m.

    Parameters
    ----------
    p: int
        The characteristic, a prime.
    m: int, default=1
        The extension degree.
    modulus: sequence of int, optional
        Coefficients (lowest degree first) of a monic irreducible polynomial
        of degree ``m`` over F_p. Found by :func:`default_modulus` if omitted.
    """

    def __init__(self, p, m=1, modulus=None):
        p = int(p)
        m = int(m)
        if not is_prime(p):
            raise NonPrime('%d is not a prime' % p)
        if m < 1:
            raise BadParameters('extension degree must be >= 1, got %d' % m)
        q = p ** m
        if q > MAX_ORDER:
            raise BadParameters('fields with more than 2**32 elements are '
                                'not supported (q = %d^%d)' % (p, m))
        if modulus is None:
            modulus = (0, 1) if m == 1 else default_modulus(p, m)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ReducibleModulus(
                    'modulus must be monic of degree %d, got %r'
                    % (m, modulus))
            if not is_irreducible(modulus, p):
                raise ReducibleModulus('%r is reducible over F_%d'
                                       % (modulus, p))
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._int64_safe = (q - 1) ** 2 < 2 ** 63
        self._digits = None
        self._powers = np.array([p ** i for i in range(m)], dtype=np.int64)
        self._exp = self._log = self._inv = self._add = None
        self._build_tables()

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        if q > TABLE_LIMIT:
            return
        values = np.arange(q, dtype=np.int64)
        if m > 1:
            self._digits = np.stack(
                [(values // p ** i) % p for i in range(m)], axis=-1)
            if q <= ADD_TABLE_LIMIT:
                self._add = (
                    (self._digits[:, None, :] + self._digits[None, :, :]) % p
                ) @ self._powers
        order = q - 1
        generator = self._find_generator()
        exp = np.zeros(max(order, 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, generator)
        inv = np.zeros(q, dtype=np.int64)
        if order:
            inv[1:] = exp[(-log[1:]) % order]
        self._exp, self._log, self._inv = exp, log, inv
        self.generator = generator

    def _find_generator(self):
        order = self.q - 1
        if order <= 1:
            return 1
        factors = prime_factors(order)
        for g in range(2, self.q):
            if all(self._pow_slow(g, order // r) != 1 for r in factors):
                return g
        raise AssertionError('no primitive element found')  # pragma: no cover

    # Encodings ###############################################################

    def digits(self, a):
        """Coefficient vector (c_0, ..., c_{m-1}) of the encoded element."""
        a = int(a)
        out = []
        for _ in range(self.m):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_digits(self, rep):
        """Encoding of the coefficient vector ``rep`` (reduced mod p)."""
        if len(rep) != self.m:
            raise BadParameters('expected %d coefficients, got %d'
                                % (self.m, len(rep)))
        value = 0
        for c in reversed(rep):
            value = value * self.p + int(c) % self.p
        return value

    def element(self, x):
        """Return a :class:`FieldElement` from an encoding or a coefficient
        vector."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise BadParameters('element of %r used in %r'
                                    % (x.field, self))
            return x
        if isinstance(x, numbers.Integral):
            return FieldElement(self, self.check(x))
        return FieldElement(self, self.from_digits(x))

    def check(self, a):
        a = int(a)
        if not 0 <= a < self.q:
            raise BadParameters('%d is not an element encoding of F_%d'
                                % (a, self.q))
        return a

    def scalar(self, k):
        """Image of the integer ``k`` in the prime subfield."""
        return int(k) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    # Scalar arithmetic #######################################################

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return int(self._add[a, b])
        return self.from_digits([x + y for x, y in
                                 zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return int(self._exp[(self._log[a] + self._log[b])
                                 % (self.q - 1)])
        return self._mul_slow(a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero('zero has no inverse in F_%d' % self.q)
        if self._inv is not None:
            return int(self._inv[a])
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._pow_slow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        e = int(e)
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self._exp is not None:
            return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])
        return self._pow_slow(a, e)

    def _mul_slow(self, a, b):
        p, m = self.p, self.m
        if m == 1:
            return (a * b) % p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = (prod[i + j] + x * y) % p
        modulus = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for j in range(m):
                    prod[k - m + j] = (prod[k - m + j] - c * modulus[j]) % p
                prod[k] = 0
        return self.from_digits(prod[:m])

    def _pow_slow(self, a, e):
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    # Array arithmetic ########################################################

    def _vectorized(self, func, *arrays):
        ufunc = np.frompyfunc(func, len(arrays), 1)
        return np.asarray(ufunc(*[np.asarray(a, dtype=object)
                                  for a in arrays]), dtype=np.int64)

    def add_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            if self._int64_safe:
                return (a + b) % self.p
            return self._vectorized(self.add, a, b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add is not None:
            return self._add[a, b]
        if self._digits is not None:
            return ((self._digits[a] + self._digits[b]) % self.p) \
                @ self._powers
        return self._vectorized(self.add, a, b)

    def neg_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        if self._digits is not None:
            return ((-self._digits[a]) % self.p) @ self._powers
        return self._vectorized(self.neg, a)

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1 and self._int64_safe:
            return (a * b) % self.p
        if self._exp is not None:
            res = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, res)
        return self._vectorized(self.mul, a, b)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero('zero has no inverse in F_%d' % self.q)
        if self._inv is not None:
            return self._inv[a]
        return self._vectorized(self.inv, a)

    def power_table(self, max_exponent):
        """Array ``t`` with ``t[e, x] = x**e`` for every element x."""
        self._check_tabulable()
        xs = np.arange(self.q, dtype=np.int64)
        table = np.ones((max_exponent + 1, self.q), dtype=np.int64)
        for e in range(1, max_exponent + 1):
            table[e] = self.mul_arr(table[e - 1], xs)
        return table

    def _check_tabulable(self):
        if self.q > TABLE_LIMIT:
            raise BadParameters('element-indexed tables need q <= %d'
                                % TABLE_LIMIT)

    # Misc ####################################################################

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.m == other.m and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return 'FieldSpec(p=%d)' % self.p
        return 'FieldSpec(p=%d, m=%d, modulus=%r)' % (self.p, self.m,
                                                       self.modulus)

    def to_dict(self):
        return {'p': self.p, 'm': self.m, 'q': self.q,
                'modulus': list(self.modulus)}


@functools.lru_cache(maxsize=64)
def _cached_field(p, m, modulus):
    return FieldSpec(p, m, modulus)


def field_make(p, m=1, modulus=None):
    """Build (or fetch from cache) the field F_{p^m}.

    Parameters
    ----------
    p: int
        A prime.
    m: int, default=1
        Extension degree.
    modulus: sequence of int, optional
        Monic irreducible modulus, lowest degree first.

    Raises
    ------
    NonPrime, ReducibleModulus

    Examples
    --------
    >>> F4 = field_make(2, 2)
    >>> F4.modulus
    (1, 1, 1)
    >>> F4.mul(2, 2)  # x * x = x + 1
    3
    """
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    return _cached_field(int(p), int(m), modulus)


def field_from_order(q):
    """Build F_q from a prime power ``q``."""
    q = int(q)
    factors = prime_factors(q) if q > 1 else []
    if len(factors) != 1:
        raise NonPrime('%d is not a prime power' % q)
    p = factors[0]
    m = 0
    while q > 1:
        q //= p
        m += 1
    return field_make(p, m)


class FieldElement(object):
    """An element of a :class:`FieldSpec`, with Python operators.

    Plain integers mixed into arithmetic are read as elements of the prime
    subfield.
    """

    __slots__ = ('field', 'value')

    def __init__(self, field, value):
        self.field = field
        self.value = field.check(value)

    @property
    def rep(self):
        return self.field.digits(self.value)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise BadParameters('cannot combine elements of %r and %r'
                                    % (self.field, other.field))
            return other.value
        if isinstance(other, numbers.Integral):
            return self.field.scalar(other)
        return NotImplemented

    def _wrap(self, value):
        return FieldElement(self.field, value)

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.field.div(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self):
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self.value == b

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return 'FieldElement(%r, rep=%r)' % (self.field, self.rep)


_OPS = {
    'add': FieldSpec.add,
    'sub': FieldSpec.sub,
    'mul': FieldSpec.mul,
    'div': FieldSpec.div,
}


def field_arith(a, b, op):
    """Apply ``op`` in {'add', 'sub', 'mul', 'div', 'pow'} to two elements.

    For 'pow', ``b`` is an integer exponent.

    Raises
    ------
    DivisionByZero
        For division by zero (or a negative power of zero).
    """
    field = a.field
    if op == 'pow':
        return FieldElement(field, field.pow(a.value, int(b)))
    if op not in _OPS:
        raise BadParameters('unknown field operation %r' % op)
    b = field.element(b)
    return FieldElement(field, _OPS[op](field, a.value, b.value))
