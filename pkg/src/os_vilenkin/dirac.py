"""Truncations of the shell-diagonal Dirac operator and its compressions."""
import logging
from collections import OrderedDict, namedtuple
from fractions import Fraction
from numbers import Rational

import numpy as np

from os_vilenkin.characters import CharIndexS, characters_up_to, sigma
from os_vilenkin.exceptions import DomainError, PreconditionError
from os_vilenkin.fourier import analyze_fast, psi_char_expansion
from os_vilenkin.groups import PadicIntegers

logger = logging.getLogger(__name__)


def shell_multiplicity(group, n):
    return group.shell_multiplicity(n)


class DiracTruncation(namedtuple("DiracTruncation", "group s bound multiplicities")):
    """D on shells 0..bound: eigenvalue ((n+1)^2 M_n)^(1/s) on shell n."""

    __slots__ = ()

    @classmethod
    def build(cls, group, s, bound):
        if s <= 0:
            raise DomainError(f"s must be > 0, got {s}")
        if bound < 0:
            raise DomainError(f"bound must be ≥ 0, got {bound}")
        return cls(
            group,
            s,
            bound,
            tuple(group.shell_multiplicity(n) for n in range(bound + 1)),
        )

    @property
    def p(self):
        return self.group.p

    def weight(self, n):
        """(n+1)^2 M_n, the exact s-th power of the eigenvalue."""
        return (n + 1) ** 2 * self.multiplicities[n]

    def eigenvalue(self, n):
        if n > self.bound:
            raise PreconditionError(f"shell {n} beyond truncation {self.bound}")
        w = self.weight(n)
        if self.s == 1:
            return w
        inverse = 1 / Fraction(self.s).limit_denominator(10 ** 6)
        if inverse.denominator == 1:
            return w ** int(inverse)
        return float(w) ** (1.0 / self.s)

    @property
    def eigenvalues(self):
        return [self.eigenvalue(n) for n in range(self.bound + 1)]


def dirac_spectrum(t):
    return [(t.eigenvalue(n), t.multiplicities[n]) for n in range(t.bound + 1)]


def dirac_trace_power(t):
    """Tr |D|^-s over the truncation and the certified tail bounds."""
    total = sum(
        (Fraction(t.multiplicities[n], t.weight(n)) for n in range(t.bound + 1)),
        Fraction(0),
    )
    return total, (Fraction(1, t.bound + 2), Fraction(1, t.bound + 1))


def dirac_trace_table(bound):
    """Partial sums S_0..S_bound of sum 1/(n+1)^2 with their tail intervals."""
    out = []
    total = Fraction(0)
    for n in range(bound + 1):
        total += Fraction(1, (n + 1) ** 2)
        out.append((n, total, Fraction(1, n + 2), Fraction(1, n + 1)))
    return out


def _shell_of(p, k):
    return CharIndexS.from_monna(p, k).n


def commutator_block(f, t, levels):
    """Matrix of [D, pi(f)] on the characters of shells <= levels, Monna order.

    Entry [sigma(j, k), k] collects c_j (lambda(shell sigma(j, k)) - lambda(shell k)).
    """
    if not isinstance(t.group, PadicIntegers) or t.p != f.p:
        raise DomainError(f"truncation over {t.group!r}, function over Z_{f.p}")
    coefs = analyze_fast(f)
    support = coefs.support()
    shells = sorted({idx.n for idx in support})
    if len(shells) > 1:
        raise DomainError(f"f is not shell-pure: shells {shells}")
    n0 = shells[0] if shells else 0
    if levels < n0:
        raise PreconditionError(f"levels {levels} below the shell {n0} of f")
    if levels > t.bound:
        raise PreconditionError(f"levels {levels} beyond truncation {t.bound}")
    p = f.p
    size = p ** levels
    lam = t.eigenvalues
    matrix = np.zeros((size, size), dtype=np.complex128)
    for idx in support:
        c = complex(coefs[idx])
        j = idx.monna
        for k in range(size):
            target = sigma(p, j, k)
            diff = lam[_shell_of(p, target)] - lam[_shell_of(p, k)]
            if diff:
                matrix[target, k] += c * float(diff)
    return matrix


def column_shells(p, levels):
    return np.array([_shell_of(p, k) for k in range(p ** levels)], dtype=np.int64)


QdqReport = namedtuple(
    "QdqReport",
    "basis matrix diagonal closed_form off_diagonal_max diagonal_error_max "
    "is_diagonal kernel_dim cokernel_dim index invertible",
)


def lambda_table(p, level, fn):
    """{idx: fn(idx)} over all characters up to level."""
    return OrderedDict((idx, fn(idx)) for idx in characters_up_to(p, level))


def _closed_form(lam, q, idx):
    p, r = q.p, q.level
    scale = Fraction(1, p ** r)
    if idx.n == 0:
        values = [lam[other] for other in characters_up_to(p, r)]
    else:
        level = idx.n + r
        values = [
            lam[CharIndexS(p, l, level)] for l in range(idx.m, p ** level, p ** idx.n)
        ]
    exact = all(isinstance(v, Rational) for v in values)
    total = sum(values, Fraction(0) if exact else 0.0)
    if isinstance(total, Rational):
        return total * scale
    return float(total) * float(scale)


def compressed_qdq(lam, q, levels, tol=1e-12):
    """q D q in the local basis psi_{m,n}, n <= levels, of the coset q."""
    p, r = q.p, q.level
    if levels < 1:
        raise PreconditionError(f"levels must be ≥ 1, got {levels}")
    characters = characters_up_to(p, levels + r)
    missing = [idx for idx in characters if idx not in lam]
    if missing:
        raise DomainError(
            f"eigenvalue table misses {len(missing)} indices, e.g. {missing[0]!r}"
        )
    basis = characters_up_to(p, levels)
    position = {idx: i for i, idx in enumerate(characters)}
    psi = np.zeros((len(basis), len(characters)), dtype=np.complex128)
    for a, idx in enumerate(basis):
        for other, value in psi_char_expansion(q, idx).items():
            psi[a, position[other]] = complex(value)
    weights = np.array([float(lam[idx]) for idx in characters])
    matrix = np.conj(psi) @ np.diag(weights) @ psi.T
    diagonal = np.real(np.diag(matrix))
    closed = [_closed_form(lam, q, idx) for idx in basis]
    off = matrix - np.diag(np.diag(matrix))
    off_max = float(np.max(np.abs(off))) if off.size else 0.0
    error = float(np.max(np.abs(diagonal - np.array([float(c) for c in closed]))))
    invertible = all(c != 0 for c in closed)
    rank = int(np.linalg.matrix_rank(matrix))
    kernel_dim = len(basis) - rank
    cokernel_dim = len(basis) - int(np.linalg.matrix_rank(matrix.conj().T))
    logger.debug(f"qDq over {len(basis)} basis vectors, off-diagonal max {off_max}")
    return QdqReport(
        basis=basis,
        matrix=matrix,
        diagonal=diagonal,
        closed_form=closed,
        off_diagonal_max=off_max,
        diagonal_error_max=error,
        is_diagonal=off_max <= tol,
        kernel_dim=kernel_dim,
        cokernel_dim=cokernel_dim,
        index=kernel_dim - cokernel_dim,
        invertible=invertible,
    )
