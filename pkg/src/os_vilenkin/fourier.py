"""Finite-level Fourier analysis on Z_p.

A level-r function is stored by its p^r values on the residues mod p^r;
coefficients are kept in Monna order, so coefficient j belongs to the
character with Monna index j.
"""
import logging
from collections import OrderedDict
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from os_vilenkin.characters import (
    CharIndexS,
    char_eval_int,
    characters_up_to,
    monna_characters,
)
from os_vilenkin.exceptions import DomainError, PreconditionError
from os_vilenkin.padic import check_prime, digit_reverse_array
from os_vilenkin.phase import Cyclotomic, is_exact

logger = logging.getLogger(__name__)

# rows of the character matrix evaluated at once by the float naive transform
_CHUNK_ELEMENTS = 1 << 21


def _exact(p, value):
    return Cyclotomic.coerce(p, value)


def _half_power(p, r, sign):
    """p^(sign * r / 2); rational only for even r."""
    if r % 2 == 0:
        return Fraction(p) ** (sign * r // 2)
    return float(p) ** (sign * r / 2.0)


def _scaled(p, value, factor):
    if isinstance(factor, Fraction) and is_exact(value):
        return _exact(p, value) * factor
    return complex(value) * float(factor)


class LevelFunction(object):
    """A function on Z_p constant on the cosets mod p^level."""

    __slots__ = ("p", "level", "values")

    def __init__(self, p, level, values):
        check_prime(p)
        values = tuple(values)
        if len(values) != p ** level:
            raise DomainError(f"expected {p ** level} values, got {len(values)}")
        self.p = p
        self.level = level
        self.values = values

    @classmethod
    def constant(cls, p, level, value=1):
        return cls(p, level, [value] * p ** level)

    @classmethod
    def from_array(cls, p, level, array):
        return cls(p, level, [complex(v) for v in np.asarray(array).ravel()])

    @classmethod
    def indicator(cls, coset, level=None):
        level = coset.level if level is None else level
        if level < coset.level:
            raise PreconditionError(f"level {level} below coset level {coset.level}")
        return cls(
            coset.p, level, [1 if x in coset else 0 for x in range(coset.p ** level)]
        )

    @classmethod
    def character(cls, idx, level=None):
        level = idx.n if level is None else level
        if level < idx.n:
            raise PreconditionError(f"level {level} below character level {idx.n}")
        return cls(
            idx.p,
            level,
            [
                Cyclotomic.from_phase(char_eval_int(idx, x))
                for x in range(idx.p ** level)
            ],
        )

    @property
    def is_exact(self):
        return all(is_exact(v) for v in self.values)

    def to_array(self):
        return np.array([complex(v) for v in self.values], dtype=np.complex128)

    def promote(self, level):
        if level < self.level:
            raise PreconditionError(f"cannot lower level {self.level} to {level}")
        if level == self.level:
            return self
        size = self.p ** self.level
        return LevelFunction(
            self.p, level, [self.values[x % size] for x in range(self.p ** level)]
        )

    def _pair(self, other):
        if other.p != self.p:
            raise DomainError(f"functions over {self.p} and {other.p}")
        level = max(self.level, other.level)
        return level, self.promote(level), other.promote(level)

    def __mul__(self, other):
        if not isinstance(other, LevelFunction):
            return LevelFunction(self.p, self.level, [v * other for v in self.values])
        level, a, b = self._pair(other)
        if a.is_exact and b.is_exact:
            values = [_exact(self.p, u) * v for u, v in zip(a.values, b.values)]
        else:
            values = [complex(u) * complex(v) for u, v in zip(a.values, b.values)]
        return LevelFunction(self.p, level, values)

    __rmul__ = __mul__

    def __add__(self, other):
        level, a, b = self._pair(other)
        if a.is_exact and b.is_exact:
            values = [_exact(self.p, u) + v for u, v in zip(a.values, b.values)]
        else:
            values = [complex(u) + complex(v) for u, v in zip(a.values, b.values)]
        return LevelFunction(self.p, level, values)

    def __sub__(self, other):
        return self + other * -1

    def max_deviation(self, other):
        level, a, b = self._pair(other)
        if a.is_exact and b.is_exact:
            diffs = [_exact(self.p, u) - v for u, v in zip(a.values, b.values)]
            if all(d.is_zero() for d in diffs):
                return 0
        return float(np.max(np.abs(a.to_array() - b.to_array())))

    def __repr__(self):
        return f"LevelFunction(p={self.p}, level={self.level})"


class CoefSequence(object):
    """Character coefficients of a level function, keyed by CharIndexS."""

    __slots__ = ("p", "level", "coefficients")

    def __init__(self, p, level, coefficients=None):
        self.p = p
        self.level = level
        table = OrderedDict.fromkeys(monna_characters(p, level), 0)
        for idx, value in (coefficients or {}).items():
            if idx not in table:
                raise DomainError(f"{idx!r} lies outside level {level}")
            table[idx] = value
        self.coefficients = table

    @classmethod
    def from_monna_vector(cls, p, level, vector):
        keys = monna_characters(p, level)
        if len(vector) != len(keys):
            raise DomainError(f"expected {len(keys)} coefficients, got {len(vector)}")
        seq = cls.__new__(cls)
        seq.p = p
        seq.level = level
        seq.coefficients = OrderedDict(zip(keys, vector))
        return seq

    def __getitem__(self, idx):
        return self.coefficients[idx]

    def items(self):
        return self.coefficients.items()

    @property
    def is_exact(self):
        return all(is_exact(v) for v in self.coefficients.values())

    def monna_vector(self):
        return np.array(
            [complex(v) for v in self.coefficients.values()], dtype=np.complex128
        )

    def is_zero_at(self, idx, tol=1e-9):
        value = self.coefficients[idx]
        if is_exact(value):
            return _exact(self.p, value).is_zero()
        return abs(value) <= tol

    def support(self, tol=1e-9):
        return [idx for idx in self.coefficients if not self.is_zero_at(idx, tol)]

    def shells(self, tol=1e-9):
        return sorted({idx.n for idx in self.support(tol)})

    def promote(self, level):
        if level < self.level:
            raise PreconditionError(f"cannot lower level {self.level} to {level}")
        return CoefSequence(self.p, level, self.coefficients)

    def max_deviation(self, other):
        level = max(self.level, other.level)
        a = self.promote(level)
        b = other.promote(level)
        if a.is_exact and b.is_exact:
            if all(
                (_exact(self.p, a[idx]) - b[idx]).is_zero() for idx in a.coefficients
            ):
                return 0
        return float(np.max(np.abs(a.monna_vector() - b.monna_vector())))

    def __repr__(self):
        return f"CoefSequence(p={self.p}, level={self.level})"


@lru_cache(maxsize=64)
def monna_order(p, level):
    """perm[k] = position of Monna index k in natural DFT frequency order."""
    perm = digit_reverse_array(np.arange(p ** level), p, level)
    perm.setflags(write=False)
    return perm


def _naive_float(f):
    p, r = f.p, f.level
    size = p ** r
    values = f.to_array()
    x = np.arange(size, dtype=np.int64)
    freqs = monna_order(p, r)
    out = np.empty(size, dtype=np.complex128)
    rows = max(1, _CHUNK_ELEMENTS // size)
    for start in range(0, size, rows):
        block = freqs[start : start + rows]
        exps = np.outer(block, x) % size
        out[start : start + rows] = np.exp(-2j * np.pi * exps / size) @ values
    return out / size


def analyze_naive(f):
    p, r = f.p, f.level
    if not f.is_exact:
        return CoefSequence.from_monna_vector(p, r, _naive_float(f))
    scale = Fraction(1, p ** r)
    coefficients = OrderedDict()
    for idx in characters_up_to(p, r):
        total = Cyclotomic.zero(p)
        for x, value in enumerate(f.values):
            total = total + _exact(p, value).shift(char_eval_int(idx, x).conjugate())
        coefficients[idx] = total * scale
    return CoefSequence(p, r, coefficients)


def _butterfly_float(values, p, r, sign):
    """Radix-p decimation in time: out[j] = sum_x v[x] e^(sign 2 pi i x j / p^r).

    Row c of the working array holds the length-m transform of the
    samples x = c mod p^r / m; each stage merges p rows into one.
    """
    a = np.asarray(values, dtype=np.complex128).reshape(p ** r, 1)
    s = np.arange(p).reshape(p, 1, 1)
    for t in range(r - 1, -1, -1):
        m = a.shape[1]
        y = a.reshape(p, p ** t, m)
        k = np.arange(p).reshape(1, p, 1) * m + np.arange(m).reshape(1, 1, m)
        twiddle = np.exp(sign * 2j * np.pi * s * k / (p * m))
        a = np.einsum("sqk,sck->cqk", twiddle, y).reshape(p ** t, p * m)
    return a.reshape(p ** r)


def _to_group_ring(values, p, order):
    """Exponent counts over the p^order-th roots of unity.

    Row i of the returned integer array w satisfies
    values[i] = sum_j w[i, j] zeta^j / denom.
    """
    exact = [_exact(p, v) for v in values]
    order = max([order] + [c.order for c in exact])
    denom = 1
    for c in exact:
        for coef in c.coeffs.values():
            denom = denom * coef.denominator // gcd(denom, coef.denominator)
    counts = [
        {j: int(coef * denom) for j, coef in c.exponent_counts(order).items()}
        for c in exact
    ]
    largest = max((abs(w) for row in counts for w in row.values()), default=0)
    dtype = np.int64 if largest * max(len(values), 1) < 2 ** 62 else object
    rows = np.zeros((len(values), p ** order), dtype=dtype)
    for i, row in enumerate(counts):
        for j, w in row.items():
            rows[i, j] += w
    return rows, denom, order


def _from_group_ring(rows, p, order, denom):
    if order:
        step = p ** (order - 1)
        top = (p - 1) * step
        high = rows[:, top:]
        rows = rows[:, :top].copy()
        # zeta^(top + i) = -sum_t zeta^((p - 1 - t) step + i)
        for t in range(1, p):
            rows[:, (p - 1 - t) * step : (p - t) * step] -= high
    return [
        Cyclotomic(
            p, order, {int(j): Fraction(int(row[j]), denom) for j in np.nonzero(row)[0]}
        )
        for row in rows
    ]


def _butterfly_exact(values, p, r, sign, divisor=1):
    """_butterfly_float on exponent-count rows; every twiddle is a cyclic shift."""
    rows, denom, order = _to_group_ring(values, p, r)
    size = p ** order
    j = np.arange(size)
    a = rows.reshape(p ** r, 1, size)
    for level in range(1, r + 1):
        count = a.shape[0] // p
        m = a.shape[1]
        y = a.reshape(p, count, m, size)
        k = np.arange(p * m)
        out = np.zeros((count, p * m, size), dtype=rows.dtype)
        for s in range(p):
            shift = (sign * s * k % p ** level) * p ** (order - level)
            source = (j[None, :] - shift[:, None]) % size
            out += y[s][:, (k % m)[:, None], source]
        a = out
    return _from_group_ring(a.reshape(p ** r, size), p, order, denom * divisor)


def analyze_fast(f):
    p, r = f.p, f.level
    size = p ** r
    perm = monna_order(p, r)
    if f.is_exact:
        spectrum = _butterfly_exact(list(f.values), p, r, -1, divisor=size)
        return CoefSequence.from_monna_vector(p, r, [spectrum[j] for j in perm])
    spectrum = _butterfly_float(f.to_array(), p, r, -1)
    return CoefSequence.from_monna_vector(p, r, spectrum[perm] / size)


def synthesize(c):
    p, r = c.p, c.level
    size = p ** r
    perm = monna_order(p, r)
    if c.is_exact:
        freq = [None] * size
        for k, value in enumerate(c.coefficients.values()):
            freq[perm[k]] = value
        return LevelFunction(p, r, _butterfly_exact(freq, p, r, 1))
    freq = np.empty(size, dtype=np.complex128)
    freq[perm] = c.monna_vector()
    return LevelFunction(p, r, list(_butterfly_float(freq, p, r, 1)))


def indicator_coefficients(coset):
    """Coefficient of chi_{m,n} in 1_{x + p^r Z_p} is conj(chi_{m,n}(1))^x / p^r."""
    p, r, x = coset.p, coset.level, coset.representative
    scale = Fraction(1, p ** r)
    return CoefSequence(
        p,
        r,
        OrderedDict(
            (idx, Cyclotomic.from_phase(char_eval_int(idx, x).conjugate(), scale))
            for idx in characters_up_to(p, r)
        ),
    )


def psi_eval(coset, idx, level=None):
    p, r, x = coset.p, coset.level, coset.representative
    if idx.p != p:
        raise DomainError(f"character over {idx.p}, coset over {p}")
    level = r + idx.n if level is None else level
    if level < r + idx.n:
        raise PreconditionError(f"evaluation level {level} below {r + idx.n}")
    scale = _half_power(p, r, 1)
    step = p ** r
    values = []
    for z in range(p ** level):
        if (z - x) % step:
            values.append(0)
        else:
            w = (z - x) // step
            values.append(_scaled(p, char_eval_int(idx, w), scale))
    return LevelFunction(p, level, values)


def psi_char_expansion(coset, idx):
    p, r, x = coset.p, coset.level, coset.representative
    scale = _half_power(p, r, -1)
    coefficients = OrderedDict()
    if idx.n == 0:
        level = r
        for other in characters_up_to(p, r):
            coefficients[other] = _scaled(p, char_eval_int(other, x).conjugate(), scale)
    else:
        level = idx.n + r
        modulus = p ** idx.n
        for l in range(idx.m, p ** level, modulus):
            other = CharIndexS(p, l, level)
            coefficients[other] = _scaled(p, char_eval_int(other, x).conjugate(), scale)
    return CoefSequence(p, level, coefficients)


def inner(f, g):
    """<f, g> = p^-L sum_x f(x) conj(g(x)) at the common level L."""
    level, a, b = f._pair(g)
    if a.is_exact and b.is_exact:
        total = Cyclotomic.zero(f.p)
        for u, v in zip(a.values, b.values):
            total = total + _exact(f.p, u) * _exact(f.p, v).conjugate()
        return total * Fraction(1, f.p ** level)
    return complex(np.vdot(b.to_array(), a.to_array()) / f.p ** level)


def coefficient_energy(c):
    if c.is_exact:
        total = Cyclotomic.zero(c.p)
        for value in c.coefficients.values():
            v = _exact(c.p, value)
            total = total + v * v.conjugate()
        return total
    return float(np.sum(np.abs(c.monna_vector()) ** 2))


def shell_project(f, n):
    coefs = analyze_fast(f)
    level = max(f.level, n)
    kept = OrderedDict(
        (idx, value) for idx, value in coefs.items() if idx.n == n
    )
    return synthesize(CoefSequence(f.p, level, kept))


def filtration_product_check(f, g, tol=1e-9):
    """True when f.g lives in the shell of g, for f below that shell."""
    f_shells = analyze_fast(f).shells(tol)
    g_shells = analyze_fast(g).shells(tol)
    if len(g_shells) != 1:
        raise PreconditionError(f"g is not shell-pure: shells {g_shells}")
    n = g_shells[0]
    m = max(f_shells) if f_shells else 0
    if m >= n:
        raise PreconditionError(f"f reaches shell {m}, not below g's shell {n}")
    product = analyze_fast(f * g)
    bad = [idx for idx in product.support(tol) if idx.n != n]
    if bad:
        logger.debug(f"Product leaves shell {n} at {bad[:5]}")
    return not bad
