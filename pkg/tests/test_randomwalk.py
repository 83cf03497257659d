import math
from fractions import Fraction

import pytest

from os_vilenkin.characters import CharIndexS
from os_vilenkin.exceptions import DomainError
from os_vilenkin.groups import CyclicQuotient, HeisenbergQuotient
from os_vilenkin.heisenberg import HeisDualIndex
from os_vilenkin.randomwalk import (
    FiniteRep,
    fusion_table,
    rw_dim_estimate,
    rw_return_bound,
    rw_return_prob,
    rw_return_series,
    tensor_power_decomposition,
    trivial_multiplicity_prob,
)


def z3_pair():
    group = CyclicQuotient(3, 1)
    return FiniteRep(group, [(CharIndexS(3, 1, 1), 1), (CharIndexS(3, 2, 1), 1)])


def cyclic_pair(p, n, a, b):
    return FiniteRep(CyclicQuotient(p, n), [(a, 1), (b, 1)])


def heis_rep():
    group = HeisenbergQuotient(2, 1, 1)
    label = HeisDualIndex(2, 1, [0], [0], Fraction(1, 2))
    return FiniteRep(group, [(label, 1), (group.trivial(), 2)])


def test_trivial_walk():
    group = CyclicQuotient(2, 2)
    rep = FiniteRep(group, [(group.trivial(), 2)])
    assert rep.dimension == 2
    assert all(rw_return_prob(rep, n) == 1 for n in (1, 2, 5))
    assert rw_dim_estimate(rep, 10) == 0


def test_sign_walk():
    group = CyclicQuotient(2, 1)
    rep = FiniteRep(group, [(group.trivial(), 1), (CharIndexS(2, 1, 1), 1)])
    assert rep.symmetric
    assert rw_return_series(rep, 6) == [Fraction(1, 2)] * 6


def test_z3_walk():
    rep = z3_pair()
    assert rep.symmetric
    assert rw_return_prob(rep, 1) == Fraction(1, 2)
    for n in (1, 2, 7):
        assert rw_return_prob(rep, n) == (1 + 2 * Fraction(1, 4) ** n) / 3


def test_z3_dimension_estimates():
    rep = z3_pair()
    bound = rw_return_bound(3, 10 ** 4)
    assert bound == pytest.approx(2 * math.log(3) / math.log(10 ** 4))
    assert bound == pytest.approx(0.2386, abs=1e-4)
    estimates = [rw_dim_estimate(rep, n) for n in (10 ** 2, 10 ** 3, 10 ** 4)]
    assert estimates[-1] <= bound
    assert estimates[0] > estimates[1] > estimates[2] > 0


def test_series_matches_single_terms():
    rep = z3_pair()
    series = rw_return_series(rep, 8)
    assert series == [rw_return_prob(rep, n) for n in range(1, 9)]
    assert all(b <= a for a, b in zip(series, series[1:]))


def test_irrational_traces():
    group = CyclicQuotient(2, 3)
    rep = FiniteRep(group, [(CharIndexS(2, 1, 3), 1), (CharIndexS(2, 7, 3), 1)])
    assert rep.symmetric
    for n in (1, 2, 3):
        assert rw_return_prob(rep, n) == trivial_multiplicity_prob(rep, n)
    assert rw_return_series(rep, 3) == [rw_return_prob(rep, n) for n in (1, 2, 3)]


def test_domain_errors():
    group = CyclicQuotient(3, 1)
    lone = FiniteRep(group, [(CharIndexS(3, 1, 1), 1)])
    assert not lone.symmetric
    with pytest.raises(DomainError):
        rw_return_prob(lone, 1)
    with pytest.raises(DomainError):
        rw_return_prob(z3_pair(), 0)
    with pytest.raises(DomainError):
        rw_dim_estimate(z3_pair(), 1)
    with pytest.raises(DomainError):
        FiniteRep(group, [(CharIndexS(3, 1, 2), 1)])
    with pytest.raises(DomainError):
        rw_return_prob(FiniteRep(group, []), 1)


@pytest.mark.parametrize(
    "rep",
    [
        z3_pair(),
        cyclic_pair(2, 2, CharIndexS(2, 1, 2), CharIndexS(2, 3, 2)),
        FiniteRep(
            CyclicQuotient(2, 2), [(CharIndexS(2, 1, 1), 3), (CharIndexS(2, 1, 0), 1)]
        ),
        heis_rep(),
    ],
)
def test_return_prob_counts_trivial_constituents(rep):
    for n in (1, 2, 3):
        assert rw_return_prob(rep, n) == trivial_multiplicity_prob(rep, n)


def test_heisenberg_walk():
    group = HeisenbergQuotient(2, 1, 1)
    label = HeisDualIndex(2, 1, [0], [0], Fraction(1, 2))
    rep = FiniteRep(group, [(label, 1)])
    assert rep.symmetric
    assert rep.dimension == 2
    assert rw_return_prob(rep, 1) == Fraction(1, 4)


def test_fusion_table():
    rep = z3_pair()
    table = fusion_table(rep.group, rep)
    trivial = rep.group.trivial()
    assert table[trivial] == {CharIndexS(3, 1, 1): 1, CharIndexS(3, 2, 1): 1}
    decomposition = tensor_power_decomposition(rep, 4, table)
    assert sum(decomposition.values()) == 2 ** 4
    rep = heis_rep()
    decomposition = tensor_power_decomposition(rep, 3)
    dims = sum(rep.group.dimension(label) * m for label, m in decomposition.items())
    assert dims == rep.dimension ** 3


@pytest.mark.parametrize(
    "rep",
    [
        cyclic_pair(2, 1, CharIndexS.trivial(2), CharIndexS(2, 1, 1)),
        z3_pair(),
        cyclic_pair(2, 2, CharIndexS(2, 1, 2), CharIndexS(2, 3, 2)),
        heis_rep(),
    ],
    ids=["Z/2", "Z/3", "Z/4", "H1(Z/2)"],
)
def test_return_prob_floor(rep):
    floor = Fraction(1, rep.group.order)
    series = rw_return_series(rep, 10 ** 4)
    assert len(series) == 10 ** 4
    assert all(p_n >= floor for p_n in series)
