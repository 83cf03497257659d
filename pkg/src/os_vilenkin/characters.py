from collections import namedtuple
from fractions import Fraction
from functools import lru_cache

import numpy as np

from os_vilenkin.exceptions import DomainError, PrecisionError
from os_vilenkin.padic import (
    check_prime,
    digit_length,
    digit_reverse,
    digit_reverse_array,
    monna_inverse,
    monna_value,
    to_digits,
)
from os_vilenkin.phase import Phase


class CharIndexS(namedtuple("CharIndexS", "p m n")):
    """chi_{m,n} with chi_{m,n}(1) = e^(2 pi i m / p^n); (m, n) in S."""

    __slots__ = ()

    def __new__(cls, p, m, n):
        check_prime(p)
        if (m, n) != (1, 0) and not (n >= 1 and 0 < m < p ** n and m % p):
            raise DomainError(f"({m}, {n}) is not in S for p={p}")
        return super(CharIndexS, cls).__new__(cls, p, m, n)

    @classmethod
    def trivial(cls, p):
        return cls(p, 1, 0)

    @classmethod
    def from_monna(cls, p, k):
        if k < 0:
            raise DomainError(f"negative Monna index {k}")
        if k == 0:
            return cls(p, 1, 0)
        t = monna_value(p, k)
        n = digit_length(p, t.denominator) - 1
        return cls(p, t.numerator, n)

    @property
    def monna(self):
        if self.n == 0:
            return 0
        return digit_reverse(self.m, self.p, self.n)

    @property
    def shell(self):
        return self.n

    @property
    def exponent(self):
        if self.n == 0:
            return Fraction(0)
        return Fraction(self.m, self.p ** self.n)

    def __repr__(self):
        return f"chi({self.m},{self.n})"


def index_convert(p, k):
    return CharIndexS.from_monna(p, k)


def index_convert_inverse(idx):
    return idx.monna


def char_eval(idx, x):
    if x.precision < idx.n:
        raise PrecisionError(
            f"{idx!r} needs precision {idx.n}, element known to {x.precision}"
        )
    if idx.n == 0:
        return Phase.one(idx.p)
    return Phase(idx.p, idx.m * x.residue(idx.n), idx.n)


def char_eval_int(idx, x):
    """chi_{m,n} at an integer representative."""
    if idx.n == 0:
        return Phase.one(idx.p)
    return Phase(idx.p, idx.m * x, idx.n)


def monna_char_eval(p, k, x):
    return char_eval(CharIndexS.from_monna(p, k), x)


def characters_up_to(p, level):
    """All chi with n <= level, in Monna order."""
    return list(monna_characters(p, level))


@lru_cache(maxsize=64)
def monna_characters(p, level):
    """Shared tuple behind characters_up_to.

    Shell n holds the Monna indices [p^(n-1), p^n).
    """
    check_prime(p)
    out = [CharIndexS.trivial(p)]
    for n in range(1, level + 1):
        ms = digit_reverse_array(np.arange(p ** (n - 1), p ** n), p, n)
        out.extend(CharIndexS._make((p, int(m), n)) for m in ms)
    return tuple(out)


def sigma(p, a, b):
    t = (monna_value(p, a) + monna_value(p, b)) % 1
    return monna_inverse(t, p)


def sigma_inverse(p, k):
    return monna_inverse((-monna_value(p, k)) % 1, p)


def sigma_pm_closed(p, m, n):
    """sigma(p^m, n) from the digits of n; no rational arithmetic."""
    digits = to_digits(n, p, m + 1)
    kappa = None
    for k in range(m, -1, -1):
        if digits[k] != p - 1:
            kappa = k
            break
    if kappa is None:
        return n + 1 - p ** (m + 1)
    return n + p ** kappa + p ** (kappa + 1) - p ** (m + 1)


def sigma_iter_closed(p, m, l, i):
    period = p ** (m + 1)
    i %= period
    return l * period + digit_reverse(i, p, m + 1)


def sigma_iter_brute(p, a, n, i):
    for _ in range(i):
        n = sigma(p, a, n)
    return n


def orbit(p, m, start):
    out = [start]
    for _ in range(p ** (m + 1) - 1):
        out.append(sigma_pm_closed(p, m, out[-1]))
    return out


class BlockId(namedtuple("BlockId", "p m l")):
    """P_{m,l} = {l p^(m+1), ..., l p^(m+1) + p^(m+1) - 1}."""

    __slots__ = ()

    @property
    def size(self):
        return self.p ** (self.m + 1)

    @property
    def start(self):
        return self.l * self.size

    def members(self):
        return list(range(self.start, self.start + self.size))

    def __contains__(self, k):
        return self.start <= k < self.start + self.size


def block_of(p, m, k):
    return BlockId(p, m, k // p ** (m + 1))


def block_members(b):
    return b.members()
