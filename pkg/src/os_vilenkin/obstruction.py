"""Finite checks of injections that commute with sigma(p^m, .).

Nothing here proves nonexistence; the reports state what was checked on
the range [m0, N) of a table.
"""
import logging
import math
from collections import Counter, namedtuple

from os_vilenkin.characters import block_of, sigma, sigma_iter_closed, sigma_pm_closed
from os_vilenkin.exceptions import DomainError, PreconditionError
from os_vilenkin.padic import digit_reverse

logger = logging.getLogger(__name__)

CheckReport = namedtuple("CheckReport", "passed violations checked")


class PhiTable(object):
    """A partial injection phi: [0, bound) -> N_0 and its declared deficiency."""

    __slots__ = ("bound", "values", "deficiency")

    def __init__(self, values, deficiency=()):
        values = tuple(int(v) for v in values)
        image = set(values)
        if len(image) != len(values):
            dup = [v for v, c in Counter(values).items() if c > 1]
            raise DomainError(f"phi is not injective: {dup[:5]} hit more than once")
        deficiency = frozenset(deficiency)
        clash = deficiency & image
        if clash:
            raise DomainError(f"deficiency meets the image at {sorted(clash)[:5]}")
        self.bound = len(values)
        self.values = values
        self.deficiency = deficiency

    @classmethod
    def from_callable(cls, bound, fn, deficiency=()):
        return cls([fn(n) for n in range(bound)], deficiency)

    @classmethod
    def identity(cls, bound):
        return cls(range(bound))

    @classmethod
    def block_translation(cls, p, m, bound, shift):
        """n -> n + shift p^(m+1)."""
        step = p ** (m + 1)
        return cls.from_callable(
            bound, lambda n: n + shift * step, deficiency=range(shift * step)
        )

    @classmethod
    def sigma_translation(cls, p, c, bound):
        """n -> sigma(c, n)."""
        return cls.from_callable(bound, lambda n: sigma(p, c, n))

    @classmethod
    def swap(cls, p, m, bound):
        """Exchange 0 and p^(m+1), identity elsewhere."""
        a, b = 0, p ** (m + 1)

        def fn(n):
            if n == a:
                return b
            if n == b:
                return a
            return n

        return cls.from_callable(bound, fn)

    @classmethod
    def block_shuffle(cls, p, m, bound, rng, spread=2):
        """Blocks sent to random distinct blocks, each rotated along its orbit."""
        size = p ** (m + 1)
        count = -(-bound // size)
        targets = rng.permutation(count * spread)[:count]
        turns = rng.integers(0, size, size=count)

        def fn(n):
            l, t = divmod(n, size)
            position = digit_reverse(t, p, m + 1)
            return sigma_iter_closed(p, m, int(targets[l]), int(turns[l]) + position)

        return cls.from_callable(bound, fn)

    def __call__(self, n):
        return self.values[n]

    def __contains__(self, n):
        return 0 <= n < self.bound

    def mutate_swap(self, a, b):
        values = list(self.values)
        values[a], values[b] = values[b], values[a]
        return PhiTable(values, self.deficiency)

    def mutate_redirect(self, a, target):
        """phi(a) := target; target must lie outside the current image."""
        values = list(self.values)
        values[a] = target
        return PhiTable(values, self.deficiency - {target})

    def __repr__(self):
        return f"PhiTable(bound={self.bound})"


def phi_commuting_check(phi, p, m, m0=0):
    """Every n in [m0, N) where phi(sigma(p^m, n)) != sigma(p^m, phi(n))."""
    violations = []
    checked = 0
    for n in range(m0, phi.bound):
        shifted = sigma_pm_closed(p, m, n)
        if shifted not in phi:
            continue
        checked += 1
        if phi(shifted) != sigma_pm_closed(p, m, phi(n)):
            violations.append(n)
    if violations:
        logger.debug(f"Commuting check, m={m}: {len(violations)} violations")
    return CheckReport(not violations, violations, checked)


def phi_block_check(phi, p, m, m0=0):
    """Blocks P_{m,l} inside [m0, N) whose image is spread over several blocks."""
    if not 0 <= m0 <= phi.bound:
        raise PreconditionError(f"m0={m0} outside the domain [0, {phi.bound}]")
    size = p ** (m + 1)
    violations = []
    checked = 0
    for l in range(-(-m0 // size), phi.bound // size):
        members = range(l * size, (l + 1) * size)
        images = {block_of(p, m, phi(k)).l for k in members}
        checked += 1
        if len(images) > 1:
            violations.append(l)
    return CheckReport(not violations, violations, checked)


def split_block_search(phi, p, m, start=0):
    """First block l1 >= start whose image meets two blocks: (l1, l2, l3) or None."""
    size = p ** (m + 1)
    for l1 in range(start, phi.bound // size):
        images = []
        for k in range(l1 * size, (l1 + 1) * size):
            l = block_of(p, m, phi(k)).l
            if l not in images:
                images.append(l)
            if len(images) == 2:
                return l1, images[0], images[1]
    return None


def weighted_shift_defects(phi, lambdas, p, m, m0=0):
    """(n, lower bound on |[D, pi(chi_{p^m})] chi_n|) for each commuting defect n."""
    out = []
    for n in phi_commuting_check(phi, p, m, m0).violations:
        shifted = sigma_pm_closed(p, m, n)
        if shifted >= len(lambdas) or n >= len(lambdas):
            continue
        out.append((n, math.hypot(abs(lambdas[shifted]), abs(lambdas[n]))))
    return out
