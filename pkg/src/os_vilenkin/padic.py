from collections import namedtuple
from enum import Enum
from fractions import Fraction

import numpy as np

from os_vilenkin.exceptions import DomainError, PrecisionError, PrecisionMismatchError


class RingOp(str, Enum):
    ADD = "add"
    MUL = "mul"
    NEG = "neg"


def is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p):
    if not is_prime(p):
        raise DomainError(f"p must be prime ≥ 2, got {p!r}")
    return p


def to_digits(value, p, length):
    """Base-p digits of ``value mod p^length``, least significant first."""
    value %= p ** length
    digits = []
    for _ in range(length):
        value, d = divmod(value, p)
        digits.append(d)
    return tuple(digits)


def from_digits(digits, p):
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def digit_length(p, k):
    n = 0
    while k:
        k //= p
        n += 1
    return n


def digit_reverse(value, p, length):
    return from_digits(tuple(reversed(to_digits(value, p, length))), p)


def digit_reverse_array(values, p, length):
    """digit_reverse over an integer array."""
    values = np.asarray(values, dtype=np.int64) % p ** length
    out = np.zeros_like(values)
    for _ in range(length):
        values, digit = np.divmod(values, p)
        out = out * p + digit
    return out


def p_power_exponent(denominator, p):
    """Return n with p^n == denominator, or raise DomainError."""
    n = 0
    d = denominator
    while d % p == 0:
        d //= p
        n += 1
    if d != 1:
        raise DomainError(f"denominator {denominator} is not a power of {p}")
    return n


class PadicTrunc(namedtuple("PadicTrunc", "p precision digits")):
    __slots__ = ()

    def __new__(cls, p, precision, digits):
        check_prime(p)
        if precision < 1:
            raise DomainError(f"precision must be ≥ 1, got {precision}")
        digits = tuple(digits)
        if len(digits) > precision:
            raise DomainError(f"{len(digits)} digits exceed precision {precision}")
        for d in digits:
            if not 0 <= d < p:
                raise DomainError(f"digit {d} outside [0, {p - 1}]")
        digits = digits + (0,) * (precision - len(digits))
        return super(PadicTrunc, cls).__new__(cls, p, precision, digits)

    @classmethod
    def from_int(cls, p, precision, value):
        return cls(p, precision, to_digits(value, p, precision))

    @property
    def modulus(self):
        return self.p ** self.precision

    @property
    def value(self):
        return from_digits(self.digits, self.p)

    def residue(self, level):
        """The representative of ``self mod p^level`` in [0, p^level)."""
        if level > self.precision:
            raise PrecisionError(
                f"need precision {level}, element known to {self.precision}"
            )
        return from_digits(self.digits[:level], self.p)

    def __add__(self, other):
        return ring_ops(self, other, RingOp.ADD)

    def __mul__(self, other):
        return ring_ops(self, other, RingOp.MUL)

    def __neg__(self):
        return ring_ops(self, None, RingOp.NEG)

    def __sub__(self, other):
        return ring_ops(self, ring_ops(other, None, RingOp.NEG), RingOp.ADD)

    def __repr__(self):
        return f"PadicTrunc(p={self.p}, N={self.precision}, value={self.value})"


def ring_ops(a, b, op):
    op = RingOp(op)
    if op == RingOp.NEG:
        return PadicTrunc.from_int(a.p, a.precision, -a.value)
    if a.p != b.p or a.precision != b.precision:
        raise PrecisionMismatchError(
            f"operands differ: (p={a.p}, N={a.precision}) vs (p={b.p}, N={b.precision})"
        )
    if op == RingOp.ADD:
        value = a.value + b.value
    else:
        value = a.value * b.value
    return PadicTrunc.from_int(a.p, a.precision, value)


class Coset(namedtuple("Coset", "p level representative")):
    """The coset ``representative + p^level Z_p``."""

    __slots__ = ()

    def __new__(cls, p, level, representative):
        check_prime(p)
        if level < 0:
            raise DomainError(f"level must be ≥ 0, got {level}")
        return super(Coset, cls).__new__(cls, p, level, representative % p ** level)

    def __contains__(self, x):
        if isinstance(x, PadicTrunc):
            x = x.residue(self.level)
        return (x - self.representative) % self.p ** self.level == 0


class QpModZpRep(namedtuple("QpModZpRep", "p numerator denom_exponent")):
    """Reduced representative a/p^n of a class in Q_p/Z_p."""

    __slots__ = ()

    def __new__(cls, p, numerator=0, denom_exponent=0):
        check_prime(p)
        if denom_exponent < 0:
            raise DomainError(f"negative denominator exponent {denom_exponent}")
        a = numerator % p ** denom_exponent
        n = denom_exponent
        while n and a % p == 0:
            a //= p
            n -= 1
        if a == 0:
            n = 0
        return super(QpModZpRep, cls).__new__(cls, p, a, n)

    @classmethod
    def from_fraction(cls, p, q):
        return frac_part_p(q, p)

    @property
    def fraction(self):
        return Fraction(self.numerator, self.p ** self.denom_exponent)

    @property
    def is_trivial(self):
        return self.numerator == 0

    @property
    def norm(self):
        return padic_norm(self)

    def __neg__(self):
        return QpModZpRep(self.p, -self.numerator, self.denom_exponent)


def monna_map(x):
    """T(x) = sum x_k / p^(k+1) over the known digits."""
    p = x.p
    return Fraction(from_digits(tuple(reversed(x.digits)), p), p ** x.precision)


def monna_value(p, k):
    """T(k) for a natural number k."""
    n = digit_length(p, k)
    return Fraction(digit_reverse(k, p, n), p ** n)


def monna_inverse(t, p):
    t = Fraction(t)
    if not 0 <= t < 1:
        raise DomainError(f"{t} is not in [0, 1)")
    n = p_power_exponent(t.denominator, p)
    return digit_reverse(t.numerator, p, n)


def haar_measure(c):
    return Fraction(1, c.p ** c.level)


def measure_interval(c, precision):
    """Image [lo, hi) of the coset under T at the given precision."""
    if precision < c.level:
        raise PrecisionError(f"precision {precision} below coset level {c.level}")
    lo = monna_map(PadicTrunc.from_int(c.p, max(precision, 1), c.representative))
    return lo, lo + haar_measure(c)


def check_measure_compatibility(c, precision):
    lo, hi = measure_interval(c, precision)
    step = c.p ** c.level
    for j in range(c.p ** (precision - c.level)):
        x = PadicTrunc.from_int(c.p, max(precision, 1), c.representative + j * step)
        if not lo <= monna_map(x) < hi:
            return False
    return True


def frac_part_p(x, p):
    x = Fraction(x)
    n = p_power_exponent(x.denominator, p)
    return QpModZpRep(p, x.numerator % x.denominator, n)


def padic_norm(x):
    if x.is_trivial:
        return 1
    return x.p ** x.denom_exponent


def k0_generators(p, r):
    """The cosets x + p^r Z_p whose indicators generate K_0 at level r."""
    return [Coset(p, r, x) for x in range(p ** r)]
