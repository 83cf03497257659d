"""The Heisenberg group H_d(Z_p) at finite truncation and its unitary dual."""
import itertools
import logging
from collections import Counter, OrderedDict, namedtuple
from fractions import Fraction
from functools import lru_cache

import numpy as np

from os_vilenkin.exceptions import DomainError, PrecisionError, PrecisionMismatchError
from os_vilenkin.padic import PadicTrunc, QpModZpRep, check_prime, p_power_exponent
from os_vilenkin.phase import Cyclotomic, Phase

logger = logging.getLogger(__name__)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


class HeisElement(namedtuple("HeisElement", "p d precision x y z")):
    """[x, y, z] with integer coordinates reduced mod p^precision."""

    __slots__ = ()

    def __new__(cls, p, d, precision, x, y, z):
        check_prime(p)
        if precision < 0:
            raise DomainError(f"precision must be ≥ 0, got {precision}")
        x = tuple(x)
        y = tuple(y)
        if len(x) != d or len(y) != d:
            raise DomainError(f"expected {d} coordinates, got {len(x)} and {len(y)}")
        mod = p ** precision
        return super(HeisElement, cls).__new__(
            cls,
            p,
            d,
            precision,
            tuple(v % mod for v in x),
            tuple(v % mod for v in y),
            z % mod,
        )

    @classmethod
    def identity(cls, p, d, precision):
        return cls(p, d, precision, (0,) * d, (0,) * d, 0)

    @classmethod
    def random(cls, p, d, precision, rng):
        mod = p ** precision
        coords = [int(v) for v in rng.integers(0, mod, size=2 * d + 1)]
        return cls(p, d, precision, coords[:d], coords[d : 2 * d], coords[-1])

    @property
    def modulus(self):
        return self.p ** self.precision

    def padic(self):
        """The coordinates as PadicTrunc values (x, y, z)."""
        n = max(self.precision, 1)

        def view(v):
            return PadicTrunc.from_int(self.p, n, v)

        return (
            tuple(view(v) for v in self.x),
            tuple(view(v) for v in self.y),
            view(self.z),
        )

    def reduce(self, precision):
        if precision > self.precision:
            raise PrecisionError(
                f"need precision {precision}, element known to {self.precision}"
            )
        return HeisElement(self.p, self.d, precision, self.x, self.y, self.z)

    def to_matrix(self):
        """The (d+2)x(d+2) unipotent integer matrix of this element."""
        size = self.d + 2
        m = np.eye(size, dtype=np.int64)
        m[0, 1 : self.d + 1] = self.x
        m[1 : self.d + 1, size - 1] = self.y
        m[0, size - 1] = self.z
        return m

    @classmethod
    def from_matrix(cls, p, d, precision, m):
        size = d + 2
        return cls(
            p,
            d,
            precision,
            [int(v) for v in m[0, 1 : d + 1]],
            [int(v) for v in m[1 : d + 1, size - 1]],
            int(m[0, size - 1]),
        )

    def __mul__(self, other):
        return heis_mul(self, other)

    def __invert__(self):
        return heis_inv(self)

    def __repr__(self):
        coords = f"[{list(self.x)}, {list(self.y)}, {self.z}]"
        return f"{coords} mod {self.p}^{self.precision}"


def _check_pair(g, h):
    if (g.p, g.d, g.precision) != (h.p, h.d, h.precision):
        raise PrecisionMismatchError(
            f"(p={g.p}, d={g.d}, N={g.precision}) "
            f"vs (p={h.p}, d={h.d}, N={h.precision})"
        )


def heis_mul(g, h):
    _check_pair(g, h)
    return HeisElement(
        g.p,
        g.d,
        g.precision,
        [a + b for a, b in zip(g.x, h.x)],
        [a + b for a, b in zip(g.y, h.y)],
        g.z + h.z + _dot(g.x, h.y),
    )


def heis_inv(g):
    return HeisElement(
        g.p,
        g.d,
        g.precision,
        [-a for a in g.x],
        [-b for b in g.y],
        -g.z + _dot(g.x, g.y),
    )


def heis_transversal(p, d, r):
    """Every [x, y, z] with coordinates in [0, p^r), as elements at precision r."""
    span = range(p ** r)
    for coords in itertools.product(span, repeat=2 * d + 1):
        yield HeisElement(p, d, r, coords[:d], coords[d : 2 * d], coords[-1])


def _coordinate_norm(p, q):
    if q == 0:
        return 1
    return p ** max(p_power_exponent(Fraction(q).denominator, p), 0)


class HeisDualIndex(namedtuple("HeisDualIndex", "p d alpha beta gamma")):
    """The class (alpha, beta, gamma) of an irreducible of H_d(Z_p).

    gamma is a reduced QpModZpRep a/p^j; alpha and beta hold canonical
    representatives in [0, p^-j), which is what makes equality componentwise.
    """

    __slots__ = ()

    def __new__(cls, p, d, alpha, beta, gamma):
        if not isinstance(gamma, QpModZpRep):
            gamma = QpModZpRep.from_fraction(p, gamma)
        bound = Fraction(1, p ** gamma.denom_exponent)
        alpha = tuple(Fraction(a) % bound for a in alpha)
        beta = tuple(Fraction(b) % bound for b in beta)
        if len(alpha) != d or len(beta) != d:
            raise DomainError(f"expected {d} coordinates in alpha and beta")
        for q in alpha + beta:
            p_power_exponent(q.denominator, p)
        return super(HeisDualIndex, cls).__new__(cls, p, d, alpha, beta, gamma)

    @classmethod
    def trivial(cls, p, d):
        return cls(p, d, (0,) * d, (0,) * d, QpModZpRep(p))

    @property
    def j(self):
        return self.gamma.denom_exponent

    @property
    def dim(self):
        return self.p ** (self.j * self.d)

    @property
    def norm(self):
        coordinates = self.alpha + self.beta
        return max(
            [self.gamma.norm] + [_coordinate_norm(self.p, q) for q in coordinates]
        )

    @property
    def level(self):
        return p_power_exponent(self.norm, self.p)

    @property
    def is_trivial(self):
        return self.gamma.is_trivial and not any(self.alpha) and not any(self.beta)

    def dual_space(self):
        """Indices k of (Z/p^j)^d in lexicographic order."""
        return list(itertools.product(range(self.p ** self.j), repeat=self.d))

    def as_tuple(self):
        return (
            [str(a) for a in self.alpha],
            [str(b) for b in self.beta],
            str(self.gamma.fraction),
        )

    def __repr__(self):
        alpha, beta, gamma = self.as_tuple()
        return f"zeta(alpha={alpha}, beta={beta}, gamma={gamma})"


def enumerate_dual(p, d, n):
    """All classes with norm at most p^n, ordered by j, gamma, alpha, beta."""
    return list(_dual_classes(p, d, n))


@lru_cache(maxsize=32)
def _dual_classes(p, d, n):
    check_prime(p)
    out = []
    for j in range(n + 1):
        numerators = [0] if j == 0 else [a for a in range(1, p ** j) if a % p]
        coords = [Fraction(c, p ** n) for c in range(p ** (n - j))]
        for a in numerators:
            gamma = QpModZpRep(p, a, j)
            for alpha in itertools.product(coords, repeat=d):
                for beta in itertools.product(coords, repeat=d):
                    out.append(HeisDualIndex(p, d, alpha, beta, gamma))
    logger.debug(f"Enumerated {len(out)} dual classes, p={p} d={d} n={n}")
    return tuple(out)


def dual_shell(p, d, n):
    return [zeta for zeta in enumerate_dual(p, d, n) if zeta.level == n]


def _check_precision(zeta, g):
    if g.p != zeta.p or g.d != zeta.d:
        raise PrecisionMismatchError(
            f"element over (p={g.p}, d={g.d}), class over (p={zeta.p}, d={zeta.d})"
        )
    if g.precision < zeta.level:
        raise PrecisionError(
            f"{zeta!r} needs precision {zeta.level}, element known to {g.precision}"
        )


def _phase(zeta, k, g):
    gamma = zeta.gamma.fraction
    exponent = (
        gamma * (g.z + _dot(k, g.y)) + _dot(g.x, zeta.alpha) + _dot(g.y, zeta.beta)
    )
    return Phase.from_fraction(zeta.p, exponent % 1)


def matrix_coeff(zeta, k, k_prime, g):
    """(chi_zeta)_{k,k'}(g): a Phase, or None where the entry vanishes."""
    _check_precision(zeta, g)
    mod = zeta.p ** zeta.j
    for xi, a, b in zip(g.x, k, k_prime):
        if (xi - (a - b)) % mod:
            return None
    return _phase(zeta, k_prime, g)


class RepMatrix(object):
    """Monomial unitary matrix with Phase entries; None marks a zero entry."""

    __slots__ = ("zeta", "basis", "entries")

    def __init__(self, zeta, basis, entries):
        self.zeta = zeta
        self.basis = basis
        self.entries = tuple(tuple(row) for row in entries)

    @property
    def size(self):
        return len(self.basis)

    @classmethod
    def identity(cls, zeta):
        basis = zeta.dual_space()
        one = Phase.one(zeta.p)
        return cls(
            zeta,
            basis,
            [
                [one if i == k else None for k in range(len(basis))]
                for i in range(len(basis))
            ],
        )

    def __matmul__(self, other):
        if other.zeta != self.zeta:
            raise DomainError("matrices of different classes")
        size = self.size
        out = []
        for i in range(size):
            support = [(t, a) for t, a in enumerate(self.entries[i]) if a is not None]
            if len(support) == 1:
                # monomial row: the product row is a scaled row of other
                t, a = support[0]
                out.append([None if b is None else a * b for b in other.entries[t]])
                continue
            row = []
            for k in range(size):
                total = Cyclotomic.zero(self.zeta.p)
                for t in range(size):
                    a = self.entries[i][t]
                    b = other.entries[t][k]
                    if a is not None and b is not None:
                        total = total + Cyclotomic.from_phase(a * b)
                row.append(total.as_phase())
            out.append(row)
        return RepMatrix(self.zeta, self.basis, out)

    def conjugate_transpose(self):
        size = self.size
        return RepMatrix(
            self.zeta,
            self.basis,
            [
                [
                    None
                    if self.entries[k][i] is None
                    else self.entries[k][i].conjugate()
                    for k in range(size)
                ]
                for i in range(size)
            ],
        )

    def is_identity(self):
        for i, row in enumerate(self.entries):
            for k, entry in enumerate(row):
                if i == k and (entry is None or not entry.is_trivial):
                    return False
                if i != k and entry is not None:
                    return False
        return True

    def is_unitary(self):
        return (self @ self.conjugate_transpose()).is_identity()

    def trace(self):
        total = Cyclotomic.zero(self.zeta.p)
        for i in range(self.size):
            if self.entries[i][i] is not None:
                total = total + Cyclotomic.from_phase(self.entries[i][i])
        return total

    def to_array(self):
        return np.array(
            [[0j if e is None else complex(e) for e in row] for row in self.entries],
            dtype=np.complex128,
        )

    def __eq__(self, other):
        return (
            isinstance(other, RepMatrix)
            and self.zeta == other.zeta
            and self.entries == other.entries
        )

    __hash__ = None

    def __repr__(self):
        return f"RepMatrix({self.zeta!r}, size={self.size})"


def rep_matrix(zeta, g):
    """The homomorphic matrix of g; entry (k, k') is matrix_coeff(zeta, k', k, g)."""
    _check_precision(zeta, g)
    basis = zeta.dual_space()
    return RepMatrix(
        zeta,
        basis,
        [[matrix_coeff(zeta, kp, k, g) for kp in basis] for k in basis],
    )


def irreducible_character(zeta, g):
    return rep_matrix(zeta, g).trace()


def coeff_norm(zeta, k, k_prime):
    """Exact squared L2 norm of (chi_zeta)_{k,k'} over the level truncation."""
    p, d, n = zeta.p, zeta.d, zeta.level
    mod = p ** zeta.j
    hits = 0
    for x in itertools.product(range(p ** n), repeat=d):
        if all((xi - (a - b)) % mod == 0 for xi, a, b in zip(x, k, k_prime)):
            hits += 1
    # |coefficient| is 1 wherever the x-indicator fires, independent of y and z
    return Fraction(hits, p ** (n * d))


def schur_inner(zeta, k, k_prime, other, l, l_prime, precision=None):
    """<(chi_zeta)_{kk'}, (chi_other)_{ll'}> as an exact Haar average."""
    if zeta.p != other.p or zeta.d != other.d:
        raise PrecisionMismatchError("classes over different groups")
    p, d = zeta.p, zeta.d
    needed = max(zeta.level, other.level)
    precision = needed if precision is None else precision
    if precision < needed:
        raise PrecisionError(f"schur_inner needs precision {needed}, got {precision}")
    counts = Counter()
    for g in heis_transversal(p, d, precision):
        a = matrix_coeff(zeta, k, k_prime, g)
        if a is None:
            continue
        b = matrix_coeff(other, l, l_prime, g)
        if b is None:
            continue
        counts[a * b.conjugate()] += 1
    total = Cyclotomic.zero(p)
    for phase, count in counts.items():
        total = total + Cyclotomic.from_phase(phase, count)
    return total * Fraction(1, p ** (precision * (2 * d + 1)))


def k0_decomposition(v, r):
    """Coefficients of the indicator of v.H_d(p^r Z_p) in matrix coefficients.

    Keys are (zeta, row, col) in the displayed indexing of matrix_coeff.
    """
    if v.precision < r:
        raise PrecisionError(f"k0_decomposition needs precision {r}, got {v.precision}")
    p, d = v.p, v.d
    v = v.reduce(r)
    scale = Fraction(1, p ** (r * (2 * d + 1)))
    out = OrderedDict()
    for zeta in _dual_classes(p, d, r):
        mod = p ** zeta.j
        for k in zeta.dual_space():
            row = tuple((a + xi) % mod for a, xi in zip(k, v.x))
            phase = _phase(zeta, k, v).conjugate()
            out[(zeta, row, k)] = Cyclotomic.from_phase(phase, zeta.dim * scale)
    return out


def k0_reconstruct(decomposition, g):
    """Evaluate sum coeff * (chi_zeta)_{row,col}(g) exactly."""
    total = None
    for (zeta, row, col), coef in decomposition.items():
        if total is None:
            total = Cyclotomic.zero(zeta.p)
        value = matrix_coeff(zeta, row, col, g)
        if value is not None:
            total = total + coef * value
    return total


def _transversal_coords(p, d, precision):
    """heis_transversal as an int array, one row of (x, y, z) per element."""
    span = np.arange(p ** precision, dtype=np.int64)
    grids = np.meshgrid(*([span] * (2 * d + 1)), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def coefficient_table(p, d, level, precision=None):
    """Float matrix coefficients of every class of norm <= p^level.

    Returns (terms, table): row t of the table is (chi_zeta)_{row,col} for
    terms[t] = (zeta, row, col) in the indexing of matrix_coeff, evaluated on
    heis_transversal(p, d, precision) in its order.
    """
    precision = level if precision is None else precision
    if precision < level:
        raise PrecisionError(
            f"coefficient table needs precision {level}, got {precision}"
        )
    coords = _transversal_coords(p, d, precision)
    x, y, z = coords[:, :d], coords[:, d : 2 * d], coords[:, -1]
    denom = p ** level
    roots = np.exp(2j * np.pi * np.arange(denom) / denom)
    terms = []
    rows = []
    for zeta in _dual_classes(p, d, level):
        mod = p ** zeta.j
        gamma = int(zeta.gamma.fraction * denom)
        alpha = np.array([int(q * denom) for q in zeta.alpha], dtype=np.int64)
        beta = np.array([int(q * denom) for q in zeta.beta], dtype=np.int64)
        base = gamma * z + x @ alpha + y @ beta
        for col in zeta.dual_space():
            values = roots[(base + gamma * (y @ np.array(col, dtype=np.int64))) % denom]
            for row in zeta.dual_space():
                shift = np.array(row, dtype=np.int64) - np.array(col, dtype=np.int64)
                hit = np.all((x - shift) % mod == 0, axis=1)
                terms.append((zeta, row, col))
                rows.append(np.where(hit, values, 0))
    logger.debug(f"Coefficient table {len(terms)} x {len(coords)}, p={p} d={d}")
    return terms, np.array(rows, dtype=np.complex128)


def _coset_indicator(v, coords, r):
    """1 where v^-1 g lies in H_d(p^r Z_p), for the rows g of coords."""
    d, mod = v.d, v.p ** r
    vx = np.array(v.x, dtype=np.int64)
    vy = np.array(v.y, dtype=np.int64)
    gx, gy, gz = coords[:, :d], coords[:, d : 2 * d], coords[:, -1]
    hz = gz - v.z + int(_dot(v.x, v.y)) - gy @ vx
    inside = (
        np.all((gx - vx) % mod == 0, axis=1)
        & np.all((gy - vy) % mod == 0, axis=1)
        & (hz % mod == 0)
    )
    return inside.astype(np.float64)


class _ReconstructionTable(object):
    __slots__ = ("r", "coords", "table", "position")

    def __init__(self, p, d, r, precision):
        terms, self.table = coefficient_table(p, d, r, precision)
        self.r = r
        self.coords = _transversal_coords(p, d, precision)
        self.position = {term: t for t, term in enumerate(terms)}

    def error(self, v):
        weights = np.zeros(len(self.position), dtype=np.complex128)
        for term, coef in k0_decomposition(v, self.r).items():
            weights[self.position[term]] = complex(coef)
        values = weights @ self.table
        deviation = np.abs(values - _coset_indicator(v, self.coords, self.r))
        return float(np.max(deviation))


def k0_reconstruction_error(v, r, precision=None):
    """Max deviation of the reconstructed indicator over the whole truncation."""
    precision = r if precision is None else precision
    return _ReconstructionTable(v.p, v.d, r, precision).error(v)


def k0_reconstruction_errors(p, d, r, precision=None):
    """k0_reconstruction_error for every v of heis_transversal(p, d, r).

    One coefficient table serves the whole sweep.
    """
    precision = r if precision is None else precision
    table = _ReconstructionTable(p, d, r, precision)
    return OrderedDict((v, table.error(v)) for v in heis_transversal(p, d, r))
