"""The subcommands shipped with the command line tool."""
import time
from collections import OrderedDict
from fractions import Fraction

import numpy as np

from os_vilenkin.characters import CharIndexS, sigma, sigma_pm_closed
from os_vilenkin.command import Command, Outcome, Status
from os_vilenkin.config import GroupKind, PhiMode
from os_vilenkin.dirac import (
    DiracTruncation,
    column_shells,
    commutator_block,
    compressed_qdq,
    dirac_spectrum,
    dirac_trace_power,
    lambda_table,
)
from os_vilenkin.exceptions import DomainError
from os_vilenkin.fourier import (
    LevelFunction,
    analyze_fast,
    analyze_naive,
    indicator_coefficients,
    synthesize,
)
from os_vilenkin.groups import HeisenbergGroup, PadicIntegers
from os_vilenkin.growth import gk_growth, is_eventually_constant
from os_vilenkin.heisenberg import (
    HeisElement,
    enumerate_dual,
    k0_decomposition,
    k0_reconstruction_error,
)
from os_vilenkin.obstruction import (
    PhiTable,
    phi_block_check,
    phi_commuting_check,
    split_block_search,
)
from os_vilenkin.padic import Coset
from os_vilenkin.randomwalk import (
    FiniteRep,
    rw_dim_estimate,
    rw_return_bound,
    rw_return_series,
    trivial_multiplicity_prob,
)

SIGMA_COLUMNS = ("n", "sigma_closed", "sigma_brute", "equal")
RW_COLUMNS = ("n", "p_n", "estimate", "bound")
SPECTRUM_COLUMNS = ("shell", "eigenvalue", "multiplicity")
QDQ_COLUMNS = (
    "trial",
    "off_diagonal_max",
    "diagonal_error_max",
    "diagonal",
    "kernel_dim",
    "index",
)
GROWTH_COLUMNS = ("trial", "dims", "ok")
DUAL_COLUMNS = ("j", "zeta", "dim", "norm")


def _records(columns, rows):
    return [OrderedDict(zip(columns, row)) for row in rows]


def vilenkin_group(config):
    if config.group == GroupKind.HEIS:
        return HeisenbergGroup(config.p, config.d)
    return PadicIntegers(config.p)


class DecomposeIndicator(Command):
    name = "decompose-indicator"

    async def run(self, config):
        coset = Coset(config.p, config.r, config.x)
        coefs = await self.engine.call(indicator_coefficients, coset)
        rebuilt = await self.engine.call(synthesize, coefs)
        error = rebuilt.max_deviation(LevelFunction.indicator(coset))
        rows = [(idx.monna, idx.m, idx.n, value) for idx, value in coefs.items()]
        result = OrderedDict(
            [
                ("p", config.p),
                ("r", config.r),
                ("x", coset.representative),
                ("coefficients", coefs.coefficients),
                ("reconstruction_error", error),
            ]
        )
        return Outcome.check(
            result,
            error <= config.tolerance,
            (("monna", "m", "n", "coefficient"), rows),
        )


class HeisDecompose(Command):
    name = "heis-decompose"

    async def run(self, config):
        p, d, r = config.p, config.d, config.r
        v = HeisElement(p, d, r, [config.x] * d, [config.y] * d, config.z)
        decomposition = await self.engine.call(k0_decomposition, v, r)
        error = await self.engine.call(k0_reconstruction_error, v, r)
        scale = Fraction(1, p ** (r * (2 * d + 1)))
        magnitudes_ok = all(
            abs(abs(coef) - float(zeta.dim * scale)) <= config.tolerance
            for (zeta, _, _), coef in decomposition.items()
        )
        rows = [
            (zeta, row, col, coef) for (zeta, row, col), coef in decomposition.items()
        ]
        result = OrderedDict(
            [
                ("element", v),
                ("r", r),
                ("terms", len(decomposition)),
                ("magnitudes_match", magnitudes_ok),
                ("reconstruction_error", error),
            ]
        )
        if len(rows) <= 64:
            result["coefficients"] = [
                {"zeta": zeta, "row": row, "col": col, "coefficient": coef}
                for zeta, row, col, coef in rows
            ]
        return Outcome.check(
            result,
            magnitudes_ok and error <= config.tolerance,
            (("zeta", "row", "col", "coefficient"), rows),
        )


class SigmaTable(Command):
    name = "sigma-table"

    async def run(self, config):
        p, m = config.p, config.m
        a = p ** m

        def row(n):
            closed = sigma_pm_closed(p, m, n)
            brute = sigma(p, a, n)
            return n, closed, brute, closed == brute

        rows = await self.engine.map(row, range(config.max_n))
        mismatches = [r[0] for r in rows if not r[3]]
        result = OrderedDict(
            [
                ("p", p),
                ("m", m),
                ("rows", _records(SIGMA_COLUMNS, rows)),
                ("mismatches", mismatches),
            ]
        )
        return Outcome.check(result, not mismatches, (SIGMA_COLUMNS, rows))


class TransformBench(Command):
    name = "transform-bench"

    async def run(self, config):
        p, r = config.p, config.r
        rng = np.random.default_rng(config.seed)
        size = p ** r
        inputs = [
            LevelFunction.from_array(
                p, r, rng.standard_normal(size) + 1j * rng.standard_normal(size)
            )
            for _ in range(config.trials)
        ]

        def compare(f):
            return analyze_fast(f).max_deviation(analyze_naive(f))

        deviations = await self.engine.map(compare, inputs)
        worst = max(deviations)
        agree = worst <= config.tolerance
        result = OrderedDict(
            [("p", p), ("r", r), ("trials", config.trials), ("max_deviation", worst)]
        )
        if agree and config.timing:
            result["naive_ms"] = _timed(analyze_naive, inputs)
            result["fast_ms"] = _timed(analyze_fast, inputs)
        rows = [(i, dev) for i, dev in enumerate(deviations)]
        return Outcome.check(result, agree, (("trial", "max_deviation"), rows))


def _timed(fn, inputs):
    started = time.perf_counter()
    for f in inputs:
        fn(f)
    return (time.perf_counter() - started) * 1000.0 / len(inputs)


class RwDim(Command):
    name = "rw-dim"

    async def run(self, config):
        group = vilenkin_group(config).quotient(config.n)
        labels = group.irreducibles
        if config.c >= len(labels):
            raise DomainError(f"c={config.c} beyond the {len(labels)} irreducibles")
        label = labels[config.c]
        conj = group.conjugate(label)
        constituents = [(label, 1)] if conj == label else [(label, 1), (conj, 1)]
        rep = FiniteRep(group, constituents)
        series = await self.engine.call(rw_return_series, rep, config.max_n)
        floor = Fraction(1, group.order)
        rows = []
        for n, p_n in enumerate(series, 1):
            estimate = rw_dim_estimate(rep, n, p_n) if n >= 2 else None
            bound = rw_return_bound(group.order, n) if n >= 2 else None
            rows.append((n, p_n, estimate, bound))
        cross = []
        for n in range(1, min(3, config.max_n) + 1):
            counted = await self.engine.call(trivial_multiplicity_prob, rep, n)
            cross.append(
                OrderedDict(
                    [
                        ("n", n),
                        ("counted", counted),
                        ("equal", counted == series[n - 1]),
                    ]
                )
            )
        passed = (
            all(p_n >= floor for _, p_n, _, _ in rows)
            and all(e <= b + 1e-12 for _, _, e, b in rows if e is not None)
            and all(c["equal"] for c in cross)
        )
        result = OrderedDict(
            [
                ("group", repr(group)),
                ("order", group.order),
                ("rep", repr(rep)),
                ("dimension", rep.dimension),
                ("series", _records(RW_COLUMNS, rows)),
                ("tensor_cross_check", cross),
            ]
        )
        return Outcome.check(result, passed, (RW_COLUMNS, rows))


class DiracSpectrum(Command):
    name = "dirac-spectrum"

    async def run(self, config):
        group = vilenkin_group(config)
        t = await self.engine.call(DiracTruncation.build, group, config.s, config.bound)
        spectrum = dirac_spectrum(t)
        total, (lower, upper) = dirac_trace_power(t)
        rows = [(n, ev, mult) for n, (ev, mult) in enumerate(spectrum)]
        result = OrderedDict(
            [
                ("group", repr(group)),
                ("s", config.s),
                ("bound", config.bound),
                ("spectrum", _records(SPECTRUM_COLUMNS, rows)),
                ("trace", total),
                ("tail_lower", lower),
                ("tail_upper", upper),
            ]
        )
        return Outcome(result, Status.OK, (SPECTRUM_COLUMNS, rows))


class CommutatorCheck(Command):
    name = "commutator-check"

    async def run(self, config):
        p = config.p
        idx = CharIndexS.from_monna(p, config.c)
        f = LevelFunction.character(idx)
        bound = max(config.bound, config.levels)
        t = DiracTruncation.build(PadicIntegers(p), config.s, bound)
        matrix = await self.engine.call(commutator_block, f, t, config.levels)
        shells = column_shells(p, config.levels)
        outside = np.abs(matrix[:, shells > idx.n])
        inside = np.abs(matrix[:, shells <= idx.n])
        leaks = int(np.count_nonzero(outside))
        result = OrderedDict(
            [
                ("character", idx),
                ("shell", idx.n),
                ("levels", config.levels),
                ("nonzero_outside", leaks),
                ("nonzero_inside", int(np.count_nonzero(inside))),
                ("max_inside", float(inside.max()) if inside.size else 0.0),
            ]
        )
        column_max = np.abs(matrix).max(axis=0)
        rows = [(k, int(shells[k]), float(column_max[k])) for k in range(len(shells))]
        return Outcome.check(result, leaks == 0, (("column", "shell", "max_abs"), rows))


class QdqCheck(Command):
    name = "qdq-check"

    async def run(self, config):
        p, r = config.p, config.r
        coset = Coset(p, r, config.x)
        rng = np.random.default_rng(config.seed)
        tables = [
            lambda_table(p, config.levels + r, lambda idx: float(rng.random()))
            for _ in range(config.trials)
        ]

        def check(table):
            return compressed_qdq(table, coset, config.levels)

        reports = await self.engine.map(check, tables)
        rows = [
            (
                i,
                rep.off_diagonal_max,
                rep.diagonal_error_max,
                rep.is_diagonal,
                rep.kernel_dim,
                rep.index,
            )
            for i, rep in enumerate(reports)
        ]
        passed = all(
            rep.is_diagonal and rep.diagonal_error_max <= config.tolerance
            for rep in reports
        )
        result = OrderedDict(
            [
                ("p", p),
                ("r", r),
                ("x", coset.representative),
                ("levels", config.levels),
                ("trials", _records(QDQ_COLUMNS, rows)),
            ]
        )
        return Outcome.check(
            result,
            passed,
            (QDQ_COLUMNS, rows),
        )


class GkGrowth(Command):
    name = "gk-growth"

    async def run(self, config):
        p, level = config.p, config.levels
        rng = np.random.default_rng(config.seed)
        size = p ** level
        sets = []
        for _ in range(config.trials):
            count = int(rng.integers(1, 4))
            sets.append(
                [
                    LevelFunction.from_array(
                        p, level, _sparse_spectrum(rng, size)
                    )
                    for _ in range(count)
                ]
            )

        # V_k stops growing by k = p^level at the latest
        horizon = max(config.k_max, size + 1)

        def grow(generators):
            return gk_growth(generators, horizon, config.tolerance)

        sequences = await self.engine.map(grow, sets)
        rows = []
        passed = True
        for i, dims in enumerate(sequences):
            ok = (
                all(a <= b for a, b in zip(dims, dims[1:]))
                and dims[-1] <= size
                and is_eventually_constant(dims)
            )
            passed = passed and ok
            rows.append((i, dims, ok))
        result = OrderedDict(
            [
                ("p", p),
                ("level", level),
                ("bound", size),
                ("sequences", _records(GROWTH_COLUMNS, rows)),
            ]
        )
        return Outcome.check(result, passed, (GROWTH_COLUMNS, rows))


def _sparse_spectrum(rng, size):
    """A random function built from a few characters, so growth is visible."""
    coefs = np.zeros(size, dtype=np.complex128)
    picks = rng.choice(size, size=min(size, 2), replace=False)
    count = len(picks)
    coefs[picks] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    return np.fft.ifft(coefs) * size


class PhiCheck(Command):
    name = "phi-check"

    async def run(self, config):
        p, m, bound = config.p, config.m, config.max_n
        if config.mode == PhiMode.SIGMA:
            phi = PhiTable.sigma_translation(p, config.c, bound)
        elif config.mode == PhiMode.SWAP:
            phi = PhiTable.swap(p, m, bound)
        elif config.mode == PhiMode.SHUFFLE:
            rng = np.random.default_rng(config.seed)
            phi = PhiTable.block_shuffle(p, m, bound, rng)
        else:
            phi = PhiTable.block_translation(p, m, bound, config.c)
        commuting = phi_commuting_check(phi, p, m, config.m0)
        blocks = phi_block_check(phi, p, m, config.m0)
        split = split_block_search(phi, p, m)
        implication = blocks.passed or not commuting.passed
        result = OrderedDict(
            [
                ("mode", config.mode),
                ("p", p),
                ("m", m),
                ("range", [config.m0, bound]),
                ("commuting", commuting),
                ("blocks", blocks),
                ("split_block", split),
                ("implication_holds", implication),
                ("note", _phi_note(commuting, blocks, config.m0, bound)),
            ]
        )
        rows = [(n, "commuting") for n in commuting.violations] + [
            (l, "block") for l in blocks.violations
        ]
        return Outcome.check(
            result,
            commuting.passed and blocks.passed and implication,
            (("index", "check"), rows),
        )


def _phi_note(commuting, blocks, m0, bound):
    if commuting.passed and blocks.passed:
        return f"no violation found on range [{m0},{bound})"
    return f"violations found on range [{m0},{bound})"


class DualEnumerate(Command):
    name = "dual-enumerate"

    async def run(self, config):
        p, d, n = config.p, config.d, config.n
        dual = await self.engine.call(enumerate_dual, p, d, n)
        total = sum(zeta.dim ** 2 for zeta in dual)
        expected = p ** (n * (2 * d + 1))
        rows = [(zeta.j, zeta, zeta.dim, zeta.norm) for zeta in dual]
        result = OrderedDict(
            [
                ("p", p),
                ("d", d),
                ("n", n),
                ("classes", len(dual)),
                ("sum_dim_squared", total),
                ("expected", expected),
                ("dual", _records(DUAL_COLUMNS, rows)),
            ]
        )
        return Outcome.check(result, total == expected, (DUAL_COLUMNS, rows))


BUILTIN_COMMANDS = [
    DecomposeIndicator,
    HeisDecompose,
    SigmaTable,
    TransformBench,
    RwDim,
    DiracSpectrum,
    CommutatorCheck,
    QdqCheck,
    GkGrowth,
    PhiCheck,
    DualEnumerate,
]
