import math
from fractions import Fraction

import numpy as np
import pytest

from os_vilenkin.characters import CharIndexS
from os_vilenkin.dirac import (
    DiracTruncation,
    column_shells,
    commutator_block,
    compressed_qdq,
    dirac_spectrum,
    dirac_trace_power,
    dirac_trace_table,
    lambda_table,
    shell_multiplicity,
)
from os_vilenkin.exceptions import DomainError, PreconditionError
from os_vilenkin.fourier import LevelFunction
from os_vilenkin.groups import HeisenbergGroup, PadicIntegers
from os_vilenkin.padic import Coset


def truncation(p=2, s=1, bound=3):
    return DiracTruncation.build(PadicIntegers(p), s, bound)


def test_shell_multiplicity():
    assert shell_multiplicity(PadicIntegers(2), 0) == 1
    assert shell_multiplicity(PadicIntegers(2), 3) == 4
    assert shell_multiplicity(HeisenbergGroup(2, 1), 1) == 7


def test_spectrum_z2():
    t = truncation()
    assert t.eigenvalues == [1, 4, 18, 64]
    assert t.multiplicities == (1, 1, 2, 4)
    assert dirac_spectrum(t) == [(1, 1), (4, 1), (18, 2), (64, 4)]


def test_eigenvalue_powers():
    assert truncation(s=0.5).eigenvalues == [1, 16, 324, 4096]
    root = truncation(s=2).eigenvalues
    assert root == pytest.approx([1.0, 2.0, math.sqrt(18), 8.0])
    with pytest.raises(PreconditionError):
        truncation().eigenvalue(4)


def test_truncation_errors():
    with pytest.raises(DomainError):
        truncation(s=0)
    with pytest.raises(DomainError):
        truncation(s=-1)
    with pytest.raises(DomainError):
        truncation(bound=-1)


def test_trace_power():
    total, (low, high) = dirac_trace_power(truncation(bound=0))
    assert total == 1
    total, (low, high) = dirac_trace_power(truncation(bound=3))
    assert total == Fraction(205, 144)
    assert (low, high) == (Fraction(1, 5), Fraction(1, 4))
    assert low <= math.pi ** 2 / 6 - total <= high
    heis = DiracTruncation.build(HeisenbergGroup(2, 1), 1, 2)
    assert dirac_trace_power(heis)[0] == Fraction(49, 36)


def test_trace_table():
    table = dirac_trace_table(10)
    assert len(table) == 11
    assert table[3][1] == Fraction(205, 144)


def test_commutator_trivial():
    f = LevelFunction.constant(2, 1, 5)
    matrix = commutator_block(f, truncation(bound=4), 4)
    assert matrix.shape == (16, 16)
    assert not np.any(matrix)


def test_commutator_shell_one():
    f = LevelFunction.character(CharIndexS(2, 1, 1))
    t = truncation(bound=4)
    matrix = commutator_block(f, t, 4)
    shells = column_shells(2, 4)
    assert not np.any(matrix[:, shells >= 2])
    assert matrix[1, 0] == pytest.approx(3)
    assert matrix[0, 1] == pytest.approx(-3)


def test_commutator_higher_shell():
    p = 3
    f = LevelFunction.character(CharIndexS(p, 1, 2))
    matrix = commutator_block(f, truncation(p=p, bound=3), 3)
    shells = column_shells(p, 3)
    assert not np.any(matrix[:, shells >= 3])
    assert np.any(matrix[:, shells == 2])


def test_commutator_errors():
    mixed = LevelFunction.character(CharIndexS(2, 1, 1)) + LevelFunction.character(
        CharIndexS(2, 1, 2)
    )
    with pytest.raises(DomainError):
        commutator_block(mixed, truncation(bound=3), 3)
    f = LevelFunction.character(CharIndexS(2, 1, 2))
    with pytest.raises(PreconditionError):
        commutator_block(f, truncation(bound=3), 1)
    with pytest.raises(PreconditionError):
        commutator_block(f, truncation(bound=3), 4)
    with pytest.raises(DomainError):
        commutator_block(f, truncation(p=3, bound=3), 3)
    with pytest.raises(DomainError):
        commutator_block(f, DiracTruncation.build(HeisenbergGroup(2), 1, 2), 2)


def test_qdq_constant():
    q = Coset(3, 1, 2)
    lam = lambda_table(3, 3, lambda idx: 7)
    report = compressed_qdq(lam, q, 2)
    np.testing.assert_allclose(report.matrix, 7 * np.eye(len(report.basis)), atol=1e-12)
    assert report.is_diagonal
    assert report.invertible
    assert report.kernel_dim == report.cokernel_dim == 0
    assert report.index == 0


def test_qdq_examples():
    q = Coset(2, 1, 0)
    lam = lambda_table(2, 2, lambda idx: idx.n)
    report = compressed_qdq(lam, q, 1)
    assert report.basis == [CharIndexS.trivial(2), CharIndexS(2, 1, 1)]
    assert report.closed_form == [Fraction(1, 2), 2]
    np.testing.assert_allclose(report.diagonal, [0.5, 2.0], atol=1e-12)
    assert report.is_diagonal
    assert report.diagonal_error_max < 1e-12


@pytest.mark.parametrize("p, r, levels", [(2, 2, 2), (3, 1, 2), (5, 1, 1)])
def test_qdq_diagonal_for_any_table(p, r, levels):
    rng = np.random.RandomState(p + r)
    for _ in range(50):
        lam = lambda_table(p, levels + r, lambda idx: float(rng.uniform(0.5, 4.0)))
        for x in range(p ** r):
            report = compressed_qdq(lam, Coset(p, r, x), levels)
            assert report.is_diagonal
            assert report.diagonal_error_max < 1e-9
            assert report.kernel_dim == report.index == 0


def test_qdq_zero_eigenvalue():
    lam = lambda_table(2, 2, lambda idx: idx.n)
    report = compressed_qdq(lam, Coset(2, 0, 0), 1)
    assert report.closed_form[0] == 0
    assert not report.invertible
    assert report.kernel_dim == report.cokernel_dim == 1
    assert report.index == 0


def test_qdq_errors():
    q = Coset(2, 1, 0)
    with pytest.raises(DomainError):
        compressed_qdq(lambda_table(2, 1, lambda idx: 1), q, 1)
    with pytest.raises(PreconditionError):
        compressed_qdq(lambda_table(2, 3, lambda idx: 1), q, 0)


def test_trace_tail_bounds():
    for n, total, low, high in dirac_trace_table(50):
        assert low <= math.pi ** 2 / 6 - total <= high


@pytest.mark.parametrize("p, levels", [(2, 5), (3, 4)])
def test_commutator_vanishes_above_shell(p, levels):
    t = truncation(p=p, bound=levels)
    shells = column_shells(p, levels)
    for k in range(1, p ** 2):
        idx = CharIndexS.from_monna(p, k)
        matrix = commutator_block(LevelFunction.character(idx), t, levels)
        assert not np.any(matrix[:, shells > idx.n])
