"""Compact Vilenkin groups and the finite quotients the dimension checks run on."""
from os_vilenkin.characters import (
    CharIndexS,
    char_eval_int,
    characters_up_to,
    sigma_inverse,
)
from os_vilenkin.heisenberg import (
    HeisDualIndex,
    enumerate_dual,
    heis_transversal,
    irreducible_character,
)
from os_vilenkin.padic import check_prime
from os_vilenkin.phase import Cyclotomic


class FiniteQuotient(object):
    """G / G_n with its irreducible labels and exact characters."""

    def __init__(self, p, n):
        self.p = check_prime(p)
        self.n = n
        self._elements = None
        self._irreducibles = None

    @property
    def elements(self):
        if self._elements is None:
            self._elements = list(self._build_elements())
        return self._elements

    @property
    def irreducibles(self):
        if self._irreducibles is None:
            self._irreducibles = list(self._build_irreducibles())
        return self._irreducibles

    @property
    def order(self):
        return len(self.elements)

    def _build_elements(self):
        raise NotImplementedError

    def _build_irreducibles(self):
        raise NotImplementedError

    def trivial(self):
        raise NotImplementedError

    def dimension(self, label):
        raise NotImplementedError

    def character(self, label, g):
        raise NotImplementedError

    def conjugate(self, label):
        raise NotImplementedError

    def character_table(self):
        """{label: [chi(g) for g in elements]}, exact."""
        return {
            label: [self.character(label, g) for g in self.elements]
            for label in self.irreducibles
        }


class CyclicQuotient(FiniteQuotient):
    """Z / p^n Z with characters chi_{m,k}, k <= n."""

    def _build_elements(self):
        return range(self.p ** self.n)

    def _build_irreducibles(self):
        return characters_up_to(self.p, self.n)

    def trivial(self):
        return CharIndexS.trivial(self.p)

    def dimension(self, label):
        return 1

    def character(self, label, g):
        return Cyclotomic.from_phase(char_eval_int(label, g))

    def conjugate(self, label):
        return CharIndexS.from_monna(self.p, sigma_inverse(self.p, label.monna))

    def __repr__(self):
        return f"Z/{self.p}^{self.n}"


class HeisenbergQuotient(FiniteQuotient):
    """H_d(Z / p^n Z) with the classes of norm at most p^n."""

    def __init__(self, p, d, n):
        super(HeisenbergQuotient, self).__init__(p, n)
        self.d = d

    def _build_elements(self):
        return heis_transversal(self.p, self.d, self.n)

    def _build_irreducibles(self):
        return enumerate_dual(self.p, self.d, self.n)

    def trivial(self):
        return HeisDualIndex.trivial(self.p, self.d)

    def dimension(self, label):
        return label.dim

    def character(self, label, g):
        return irreducible_character(label, g)

    def conjugate(self, label):
        return HeisDualIndex(
            self.p,
            self.d,
            [-a for a in label.alpha],
            [-b for b in label.beta],
            -label.gamma,
        )

    def __repr__(self):
        return f"H_{self.d}(Z/{self.p}^{self.n})"


class VilenkinGroup(object):
    def quotient(self, n):
        raise NotImplementedError

    def shell_multiplicity(self, n):
        raise NotImplementedError


class PadicIntegers(VilenkinGroup):
    def __init__(self, p):
        self.p = check_prime(p)

    def quotient(self, n):
        return CyclicQuotient(self.p, n)

    def shell_multiplicity(self, n):
        if n == 0:
            return 1
        return self.p ** n - self.p ** (n - 1)

    def __repr__(self):
        return f"Z_{self.p}"


class HeisenbergGroup(VilenkinGroup):
    def __init__(self, p, d=1):
        self.p = check_prime(p)
        self.d = d
        self._level_counts = {}

    def quotient(self, n):
        return HeisenbergQuotient(self.p, self.d, n)

    def _level_count(self, n):
        if n < 0:
            return 0
        if n not in self._level_counts:
            self._level_counts[n] = sum(
                zeta.dim ** 2 for zeta in enumerate_dual(self.p, self.d, n)
            )
        return self._level_counts[n]

    def shell_multiplicity(self, n):
        return self._level_count(n) - self._level_count(n - 1)

    def __repr__(self):
        return f"H_{self.d}(Z_{self.p})"
