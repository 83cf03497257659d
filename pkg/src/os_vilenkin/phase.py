"""Exact roots of unity of p-power order and their rational linear combinations."""
import cmath
import math
from collections import Counter, namedtuple
from fractions import Fraction
from numbers import Rational

from os_vilenkin.exceptions import (
    DomainError,
    PrecisionError,
    PrecisionMismatchError,
)
from os_vilenkin.padic import p_power_exponent


def _reduce(p, num, exp):
    num %= p ** exp
    while exp and num % p == 0:
        num //= p
        exp -= 1
    if num == 0:
        exp = 0
    return num, exp


class Phase(namedtuple("Phase", "p num exp")):
    """e^(2 pi i num / p^exp) with the exponent reduced mod 1."""

    __slots__ = ()

    def __new__(cls, p, num=0, exp=0):
        num, exp = _reduce(p, num, exp)
        return super(Phase, cls).__new__(cls, p, num, exp)

    @classmethod
    def from_fraction(cls, p, q):
        q = Fraction(q)
        return cls(p, q.numerator, p_power_exponent(q.denominator, p))

    @classmethod
    def one(cls, p):
        return cls(p, 0, 0)

    @property
    def exponent(self):
        return Fraction(self.num, self.p ** self.exp)

    @property
    def is_trivial(self):
        return self.num == 0

    def _check(self, other):
        if self.p != other.p:
            raise PrecisionMismatchError(f"phases over {self.p} and {other.p}")

    def __mul__(self, other):
        if isinstance(other, Phase):
            self._check(other)
            e = max(self.exp, other.exp)
            p = self.p
            num = self.num * p ** (e - self.exp) + other.num * p ** (e - other.exp)
            return Phase(p, num, e)
        return Cyclotomic.from_phase(self) * other

    def __rmul__(self, other):
        return Cyclotomic.from_phase(self) * other

    def __truediv__(self, other):
        if isinstance(other, Phase):
            return self * other.conjugate()
        return Cyclotomic.from_phase(self) / other

    def __pow__(self, k):
        return Phase(self.p, self.num * k, self.exp)

    def conjugate(self):
        return Phase(self.p, -self.num, self.exp)

    def to_complex(self):
        if self.num == 0:
            return complex(1.0, 0.0)
        return cmath.exp(2j * math.pi * self.num / self.p ** self.exp)

    __complex__ = to_complex

    def __repr__(self):
        return f"Phase({self.num}/{self.p}^{self.exp})"


class Cyclotomic(object):
    """Element of Q(zeta_{p^n}) in the power basis zeta^j, 0 <= j < (p-1)p^(n-1).

    Values of different orders are lifted to the larger order before
    combining, so equality and zero tests are exact.
    """

    __slots__ = ("p", "order", "coeffs")

    def __init__(self, p, order=0, coeffs=None):
        self.p = p
        self.order = order
        self.coeffs = self._canonical(p, order, coeffs or {})

    @staticmethod
    def _canonical(p, order, coeffs):
        if order == 0:
            total = sum((Fraction(c) for c in coeffs.values()), Fraction(0))
            return {0: total} if total else {}
        modulus = p ** order
        step = p ** (order - 1)
        top = (p - 1) * step
        out = {}
        for j, c in coeffs.items():
            if not c:
                continue
            j %= modulus
            if j < top:
                out[j] = out.get(j, 0) + c
            else:
                for t in range(1, p):
                    i = j - t * step
                    out[i] = out.get(i, 0) - c
        return {j: Fraction(c) for j, c in out.items() if c}

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def rational(cls, p, value):
        return cls(p, 0, {0: Fraction(value)})

    @classmethod
    def from_phase(cls, phase, coef=1):
        return cls(phase.p, phase.exp, {phase.num: Fraction(coef)})

    @classmethod
    def from_exponent_counts(cls, p, order, counts, scale=1):
        """Sum of ``scale * count * zeta_{p^order}^j`` over ``counts`` items."""
        scale = Fraction(scale)
        return cls(p, order, {j: scale * c for j, c in counts.items()})

    @classmethod
    def coerce(cls, p, value):
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, Phase):
            return cls.from_phase(value)
        if isinstance(value, Rational):
            return cls.rational(p, value)
        raise DomainError(f"{value!r} has no exact cyclotomic form")

    def _lifted(self, order):
        shift = self.p ** (order - self.order)
        if self.order == 0:
            return {0: c for c in self.coeffs.values()}
        return {j * shift: c for j, c in self.coeffs.items()}

    def exponent_counts(self, order):
        """Rational coefficients against the powers of zeta_{p^order}."""
        if order < self.order:
            raise PrecisionError(f"order {order} below {self.order}")
        return self._lifted(order)

    def _binary(self, other):
        other = Cyclotomic.coerce(self.p, other)
        if other.p != self.p:
            raise PrecisionMismatchError(f"cyclotomics over {self.p} and {other.p}")
        order = max(self.order, other.order)
        return order, self._lifted(order), other._lifted(order)

    def __add__(self, other):
        if isinstance(other, complex) or isinstance(other, float):
            return complex(self) + other
        order, a, b = self._binary(other)
        out = Counter(a)
        for j, c in b.items():
            out[j] = out.get(j, 0) + c
        return Cyclotomic(self.p, order, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.p, self.order, {j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, complex) or isinstance(other, float):
            return complex(self) - other
        return self + (-Cyclotomic.coerce(self.p, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, complex) or isinstance(other, float):
            return complex(self) * other
        if isinstance(other, Rational):
            other = Fraction(other)
            return Cyclotomic(
                self.p, self.order, {j: c * other for j, c in self.coeffs.items()}
            )
        if isinstance(other, Phase):
            return self.shift(other)
        order, a, b = self._binary(other)
        modulus = self.p ** order if order else 1
        out = {}
        for i, c in a.items():
            for j, e in b.items():
                k = (i + j) % modulus
                out[k] = out.get(k, 0) + c * e
        return Cyclotomic(self.p, order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (1 / Fraction(other))
        if isinstance(other, Phase):
            return self.shift(other.conjugate())
        return complex(self) / other

    def __pow__(self, k):
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = Cyclotomic.rational(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, phase):
        """Multiply by a single root of unity."""
        order = max(self.order, phase.exp)
        modulus = self.p ** order if order else 1
        s = phase.num * self.p ** (order - phase.exp)
        lifted = self._lifted(order)
        return Cyclotomic(
            self.p, order, {(j + s) % modulus: c for j, c in lifted.items()}
        )

    def conjugate(self):
        if self.order == 0:
            return self
        modulus = self.p ** self.order
        return Cyclotomic(
            self.p, self.order, {(-j) % modulus: c for j, c in self.coeffs.items()}
        )

    def is_zero(self):
        return not self.coeffs

    def is_rational(self):
        return all(j == 0 for j in self.coeffs)

    def rational_value(self):
        if not self.is_rational():
            raise DomainError(f"{self!r} is not rational")
        return self.coeffs.get(0, Fraction(0))

    def as_phase(self):
        """The Phase equal to this value, or None if the value is zero."""
        if self.is_zero():
            return None
        z = complex(self)
        modulus = self.p ** self.order if self.order else 1
        j = round(cmath.phase(z) / (2 * math.pi) * modulus) % modulus
        candidate = Phase(self.p, j, self.order)
        if Cyclotomic.from_phase(candidate) != self:
            raise DomainError(f"{self!r} is not a root of unity")
        return candidate

    def to_complex(self):
        if self.order == 0:
            return complex(float(self.coeffs.get(0, 0)), 0.0)
        modulus = self.p ** self.order
        return sum(
            (
                float(c) * cmath.exp(2j * math.pi * j / modulus)
                for j, c in self.coeffs.items()
            ),
            complex(0.0, 0.0),
        )

    __complex__ = to_complex

    def __abs__(self):
        return abs(complex(self))

    def __eq__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) == other
        try:
            order, a, b = self._binary(other)
        except DomainError:
            return NotImplemented
        left, right = Cyclotomic(self.p, order, a), Cyclotomic(self.p, order, b)
        return left.coeffs == right.coeffs

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return f"Cyclotomic({self.rational_value()})"
        terms = " + ".join(f"{c}*z^{j}" for j, c in sorted(self.coeffs.items()))
        return f"Cyclotomic[{self.p}^{self.order}]({terms})"


def exact_sum(p, values):
    total = Cyclotomic.zero(p)
    for v in values:
        total = total + v
    return total


def is_exact(value):
    return isinstance(value, (Cyclotomic, Phase, Rational))
