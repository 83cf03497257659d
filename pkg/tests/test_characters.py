import itertools

import pytest

from os_vilenkin.characters import (
    BlockId,
    CharIndexS,
    block_members,
    block_of,
    char_eval,
    characters_up_to,
    index_convert,
    index_convert_inverse,
    monna_char_eval,
    orbit,
    sigma,
    sigma_inverse,
    sigma_iter_brute,
    sigma_iter_closed,
    sigma_pm_closed,
)
from os_vilenkin.exceptions import DomainError, PrecisionError
from os_vilenkin.padic import PadicTrunc
from os_vilenkin.phase import Phase


def one(p, n=4):
    return PadicTrunc.from_int(p, n, 1)


def test_index_set():
    CharIndexS(2, 1, 0)
    CharIndexS(3, 5, 2)
    for m, n in [(3, 1), (0, 1), (6, 2), (3, 0), (9, 2)]:
        with pytest.raises(DomainError):
            CharIndexS(3, m, n)


def test_char_eval():
    x = PadicTrunc.from_int(2, 3, 5)
    assert char_eval(CharIndexS.trivial(2), x) == Phase.one(2)
    assert complex(char_eval(CharIndexS(2, 1, 1), one(2))) == pytest.approx(-1)
    assert complex(char_eval(CharIndexS(2, 1, 2), PadicTrunc.from_int(2, 3, 2))) == (
        pytest.approx(-1)
    )
    with pytest.raises(PrecisionError):
        char_eval(CharIndexS(2, 1, 4), x)


def test_monna_char_eval():
    assert monna_char_eval(2, 3, one(2)) == Phase(2, 3, 2)
    assert complex(monna_char_eval(2, 3, one(2))) == pytest.approx(-1j)
    assert complex(monna_char_eval(2, 2, one(2))) == pytest.approx(1j)


@pytest.mark.parametrize(
    "k, m, n", [(0, 1, 0), (3, 3, 2), (1, 1, 1), (2, 1, 2), (6, 3, 3)]
)
def test_index_convert(k, m, n):
    idx = index_convert(2, k)
    assert (idx.m, idx.n) == (m, n)
    assert index_convert_inverse(idx) == k


@pytest.mark.parametrize("p", [2, 3, 5])
def test_index_convert_round_trip(p):
    for k in range(p ** 4):
        assert index_convert_inverse(index_convert(p, k)) == k
    assert len(set(characters_up_to(p, 3))) == p ** 3


def test_sigma_examples():
    assert sigma(2, 0, 5) == 5
    assert sigma(2, 1, 1) == 0
    assert sigma(2, 2, 1) == 3
    assert sigma_pm_closed(2, 0, 0) == 1
    assert sigma_pm_closed(2, 0, 1) == 0
    assert sigma_pm_closed(2, 1, 1) == 3


@pytest.mark.parametrize("p", [2, 3])
def test_sigma_group_laws(p):
    small = range(p ** 3)
    for a, b in itertools.product(small, repeat=2):
        assert sigma(p, a, b) == sigma(p, b, a)
        for c in small[: p ** 2]:
            assert sigma(p, sigma(p, a, b), c) == sigma(p, a, sigma(p, b, c))
    for k in range(p ** 5):
        assert sigma(p, 0, k) == k
        assert sigma(p, k, sigma_inverse(p, k)) == 0


@pytest.mark.parametrize("p", [2, 3])
def test_sigma_closed_form(p):
    for m in range(4):
        for n in range(p ** 6):
            assert sigma_pm_closed(p, m, n) == sigma(p, p ** m, n)


def test_sigma_iter_examples():
    assert sigma_iter_closed(2, 1, 3, 0) == 12
    assert sigma_iter_closed(2, 1, 0, 2) == 1
    assert sigma_iter_closed(2, 1, 0, 3) == 3
    assert sigma_iter_closed(2, 1, 0, 4) == 0


@pytest.mark.parametrize("p", [2, 3])
def test_sigma_iter_closed_form(p):
    for m in range(3):
        for l in range(4):
            start = l * p ** (m + 1)
            for i in range(p ** (m + 2)):
                assert sigma_iter_closed(p, m, l, i) == sigma_iter_brute(
                    p, p ** m, start, i
                )


@pytest.mark.parametrize("p", [2, 3])
def test_orbits_are_blocks(p):
    for m in range(3):
        size = p ** (m + 1)
        for l in range(3):
            block = BlockId(p, m, l)
            for c in range(size):
                assert sorted(orbit(p, m, l * size + c)) == block_members(block)


def test_blocks():
    assert block_members(BlockId(2, 1, 0)) == [0, 1, 2, 3]
    assert block_of(2, 1, 5) == BlockId(2, 1, 1)
    assert 5 in BlockId(2, 1, 1)
    seen = []
    for l in range(5):
        seen.extend(block_members(BlockId(3, 1, l)))
    assert seen == list(range(5 * 9))


@pytest.mark.parametrize("p", [2, 3])
def test_characters_multiply(p):
    x = one(p, 5)
    for a, b in itertools.product(range(p ** 3), repeat=2):
        left = monna_char_eval(p, sigma(p, a, b), x)
        right = monna_char_eval(p, a, x) * monna_char_eval(p, b, x)
        assert left == right
