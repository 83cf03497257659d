import math

import numpy as np
import pytest

from os_vilenkin.characters import CharIndexS
from os_vilenkin.exceptions import DomainError
from os_vilenkin.fourier import LevelFunction
from os_vilenkin.growth import gk_growth, gk_ratios, is_eventually_constant
from os_vilenkin.padic import Coset


def character(p, m, n):
    return LevelFunction.character(CharIndexS(p, m, n))


def test_zero_subspace():
    assert gk_growth([], 4) == [0] * 5
    assert gk_growth([LevelFunction.constant(2, 2, 0)], 3) == [0] * 4


def test_single_character():
    assert gk_growth([character(2, 1, 1)], 4) == [1, 2, 2, 2, 2]


def test_cyclic_powers():
    assert gk_growth([character(2, 1, 2)], 6) == [1, 2, 3, 4, 4, 4, 4]


def test_two_generators():
    dims = gk_growth([character(3, 1, 1), character(3, 1, 2)], 6)
    assert dims[0] == 1
    assert dims == sorted(dims)
    assert dims[-1] == 9
    assert is_eventually_constant(dims)


@pytest.mark.parametrize("p, level", [(2, 2), (2, 3), (3, 2)])
def test_bounded_by_quotient(p, level):
    generators = [LevelFunction.indicator(Coset(p, level, 1))]
    dims = gk_growth(generators, p ** level + 1)
    assert all(d <= p ** level for d in dims)
    assert all(a <= b for a, b in zip(dims, dims[1:]))
    assert is_eventually_constant(dims)


def test_mixed_primes():
    with pytest.raises(DomainError):
        gk_growth([character(2, 1, 1), character(3, 1, 1)], 2)


def test_ratios():
    ratios = gk_ratios([1, 2, 2, 2])
    assert ratios == pytest.approx([1.0, math.log(2) / math.log(3)])
    assert gk_ratios([0, 0, 0]) == [0.0]
    assert gk_ratios([1, 2]) == []
    assert not is_eventually_constant([1, 2, 3])


@pytest.mark.parametrize("p, level", [(2, 3), (2, 4), (3, 2)])
def test_random_generator_sets(p, level):
    rng = np.random.default_rng(level)
    size = p ** level
    for _ in range(20):
        generators = []
        for _ in range(int(rng.integers(1, 3))):
            coefs = np.zeros(size, dtype=np.complex128)
            coefs[rng.choice(size, size=2, replace=False)] = rng.standard_normal(2)
            generators.append(LevelFunction.from_array(p, level, np.fft.ifft(coefs)))
        dims = gk_growth(generators, size + 1)
        assert all(a <= b for a, b in zip(dims, dims[1:]))
        assert dims[-1] <= size
        assert is_eventually_constant(dims)
