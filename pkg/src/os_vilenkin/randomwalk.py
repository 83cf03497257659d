import logging
import math
from collections import Counter, OrderedDict
from fractions import Fraction

from os_vilenkin.exceptions import DomainError
from os_vilenkin.phase import Cyclotomic

logger = logging.getLogger(__name__)


class FiniteRep(object):
    """A finite-dimensional representation of a finite quotient, by constituents."""

    def __init__(self, group, constituents):
        self.group = group
        table = OrderedDict()
        for label, mult in constituents:
            if label not in group.irreducibles:
                raise DomainError(f"{label!r} is not an irreducible of {group!r}")
            if mult < 0:
                raise DomainError(f"negative multiplicity {mult} for {label!r}")
            table[label] = table.get(label, 0) + mult
        self.constituents = OrderedDict((k, v) for k, v in table.items() if v)
        self._traces = None

    @property
    def dimension(self):
        return sum(
            mult * self.group.dimension(label)
            for label, mult in self.constituents.items()
        )

    @property
    def symmetric(self):
        for label, mult in self.constituents.items():
            if self.constituents.get(self.group.conjugate(label), 0) != mult:
                return False
        return True

    def trace(self, g):
        total = Cyclotomic.zero(self.group.p)
        for label, mult in self.constituents.items():
            total = total + self.group.character(label, g) * mult
        return total

    def traces(self):
        if self._traces is None:
            self._traces = [self.trace(g) for g in self.group.elements]
        return self._traces

    def __repr__(self):
        parts = " + ".join(f"{m}*{label!r}" for label, m in self.constituents.items())
        return f"FiniteRep({self.group!r}: {parts})"


def _check_walk(rep, n):
    if not rep.symmetric:
        raise DomainError(f"{rep!r} is not symmetric")
    if n < 1:
        raise DomainError(f"n must be ≥ 1, got {n}")
    if rep.dimension == 0:
        raise DomainError("the zero representation has no random walk")


def _trace_ratios(rep):
    """Counter of Tr(g)/k over the group, exact."""
    k = rep.dimension
    ratios = Counter()
    exotic = []
    for t in rep.traces():
        if t.is_rational():
            ratios[t.rational_value() / k] += 1
        else:
            exotic.append(t * Fraction(1, k))
    return ratios, exotic


def rw_return_prob(rep, n):
    """p_n = (1/|G|) sum_g (Tr chi(g) / k)^(2n), exact."""
    _check_walk(rep, n)
    ratios, exotic = _trace_ratios(rep)
    total = sum(
        (count * ratio ** (2 * n) for ratio, count in ratios.items()), Fraction(0)
    )
    if exotic:
        acc = Cyclotomic.zero(rep.group.p)
        for value in exotic:
            acc = acc + value ** (2 * n)
        # symmetric reps have real traces, so the power sum is rational
        total += acc.rational_value()
    return total / rep.group.order


def rw_return_series(rep, n_max):
    """[p_1, ..., p_{n_max}] with one multiplication per term and ratio."""
    _check_walk(rep, n_max)
    ratios, exotic = _trace_ratios(rep)
    if exotic:
        return [rw_return_prob(rep, n) for n in range(1, n_max + 1)]
    order = rep.group.order
    squares = [(count, ratio * ratio) for ratio, count in ratios.items()]
    powers = [Fraction(1)] * len(squares)
    out = []
    for _ in range(n_max):
        powers = [pw * sq for pw, (_, sq) in zip(powers, squares)]
        total = sum((c * pw for pw, (c, _) in zip(powers, squares)), Fraction(0))
        out.append(total / order)
    return out


def _log(q):
    q = Fraction(q)
    return math.log(q.numerator) - math.log(q.denominator)


def rw_dim_estimate(rep, n, p_n=None):
    """-2 log p_n / log n."""
    if n <= 1:
        raise DomainError(f"n must be ≥ 2, got {n}")
    p_n = rw_return_prob(rep, n) if p_n is None else p_n
    return -2.0 * _log(p_n) / math.log(n)


def rw_return_bound(order, n):
    """Upper bound 2 log|G| / log n, from p_n ≥ 1/|G|."""
    if n <= 1:
        raise DomainError(f"n must be ≥ 2, got {n}")
    return 2.0 * math.log(order) / math.log(n)


def fusion_table(group, rep):
    """{pi: {tau: multiplicity of tau in pi (x) rep}} from exact character sums."""
    traces = rep.traces()
    order = group.order
    table = OrderedDict()
    for pi in group.irreducibles:
        row = OrderedDict()
        for tau in group.irreducibles:
            acc = Cyclotomic.zero(group.p)
            for g, t in zip(group.elements, traces):
                weight = group.character(tau, g).conjugate()
                acc = acc + group.character(pi, g) * t * weight
            mult = acc.rational_value() / order
            if mult.denominator != 1:
                raise DomainError(f"non-integral multiplicity {mult} for {tau!r}")
            if mult:
                row[tau] = int(mult)
        table[pi] = row
    return table


def tensor_power_decomposition(rep, k, table=None):
    """Multiplicities of every irreducible in rep^(tensor k), by repeated fusion."""
    group = rep.group
    table = fusion_table(group, rep) if table is None else table
    current = Counter({group.trivial(): 1})
    for _ in range(k):
        step = Counter()
        for pi, mult in current.items():
            for tau, fused in table[pi].items():
                step[tau] += mult * fused
        current = step
    return OrderedDict(
        (label, current.get(label, 0)) for label in group.irreducibles
    )


def trivial_multiplicity_prob(rep, n):
    """m(chi^(tensor 2n)) / k^(2n): the counting form of the return probability."""
    decomposition = tensor_power_decomposition(rep, 2 * n)
    return Fraction(decomposition[rep.group.trivial()], rep.dimension ** (2 * n))
