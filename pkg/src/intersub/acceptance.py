"""The acceptance suite: one function per criterion, each returning a Result.

Used by ``tests/test_acceptance.py`` and by the ``selftest`` subcommand.
Degree computations re-verify their witnesses internally; criterion 10
additionally re-verifies every report collected while the others run.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable

from . import catalog
from .constructions import Classical, Witness, cis_outcome_bound, many_outcome_witness, three_outcome_witness
from .generators import (
    random_distribution,
    random_ensemble,
    random_measurement,
    random_simplex,
)
from .metrics import (
    DegreeReport,
    cis_degree,
    classical_degree,
    coin_toss_degree,
    intersubjectivity_degree,
    is_elementwise_sharp,
    is_extremal,
    sharpness_degree,
)
from .model import Measurement, coarse_grain, marginals, mix, partitions_of
from .quantum import IDEMPOTENT_TOL, bloch_polygon_model, decision_margins, unbiased_qubit_degree
from .tasks import (
    discriminate,
    is_tomographically_complete,
    perfectly_distinguishing_states,
    sharp_two_outcome_set,
)

MARGIN = 1e-4
NOISE = 1e-12


@dataclass
class Result:
    number: int
    title: str
    passed: bool = True
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            self.passed = False
            self.details.append(message)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        head = f"[{status}] criterion {self.number}: {self.title} ({self.seconds:.1f}s)"
        return head if self.passed else head + "\n    " + "\n    ".join(self.details[:10])


class _Ledger:
    """Every (report, measurement) pair produced while the suite runs."""

    def __init__(self):
        self.items: list[tuple[DegreeReport, Measurement]] = []

    def degree(self, A: Measurement) -> DegreeReport:
        return self._keep(intersubjectivity_degree(A), A)

    def sharpness(self, A: Measurement) -> DegreeReport:
        return self._keep(sharpness_degree(A), A)

    def cis(self, A: Measurement) -> DegreeReport:
        return self._keep(cis_degree(A), A)

    def _keep(self, r: DegreeReport, A: Measurement) -> DegreeReport:
        self.items.append((r, A))
        return r


LEDGER = _Ledger()


def _gpt_entries() -> list[catalog.CatalogEntry]:
    return [catalog.load_example(n) for n in catalog.gpt_names()]


def _timed(number: int, title: str):
    def wrap(fn: Callable[[Result], None]) -> Callable[[], Result]:
        def run() -> Result:
            res = Result(number, title)
            t = time.perf_counter()
            try:
                fn(res)
            except Exception as e:  # a crash is a failed criterion, reported as such
                res.check(False, f"raised {type(e).__name__}: {e}")
            res.seconds = time.perf_counter() - t
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed(1, "coin-toss closed form equals both LP degrees")
def criterion_1(res: Result) -> None:
    S = catalog.square_model()
    rng = random.Random(1)
    for k in range(25):
        w = random_distribution(rng, rng.randint(1, 5))
        A = Measurement.coin_toss(S, w)
        want = coin_toss_degree(w)
        d, c = LEDGER.degree(A).value, LEDGER.cis(A).value
        res.check(d == want and c == want, f"weights {w}: degree {d}, cis {c}, formula {want}")


@_timed(2, "classical closed form equals both LP degrees on simplices")
def criterion_2(res: Result) -> None:
    for k in (2, 3, 4):
        S = random_simplex(100 + k, k)
        for seed in range(25):
            A = random_measurement(S, 1 + seed % 4, seed, mixed=seed % 3 != 0)
            want = classical_degree(S, A)
            d, c = LEDGER.degree(A).value, LEDGER.cis(A).value
            res.check(d == want == c, f"simplex {k}, seed {seed}: {d}, {c}, formula {want}")


@_timed(3, "unbiased qubit formula and polygon convergence")
def criterion_3(res: Result) -> None:
    q = unbiased_qubit_degree((Fraction(3, 5), 0, 0))
    res.check(q == Fraction(9, 25), f"closed form gave {q}")
    gaps = []
    for n in (8, 16, 32, 64):
        _, embed = bloch_polygon_model(n)
        d = LEDGER.degree(embed((Fraction(3, 5), 0))).value
        gaps.append(abs(d - Fraction(9, 25)))
    res.check(gaps[-1] <= Fraction(1, 10), f"n=64 gap {float(gaps[-1])}")
    res.check(
        all(b <= a for a, b in zip(gaps, gaps[1:])),
        f"gaps not non-increasing: {[float(g) for g in gaps]}",
    )


def _bounds_corpus() -> Iterable[Measurement]:
    entries = _gpt_entries()
    for seed in range(104):
        S = entries[seed % len(entries)].model
        yield random_measurement(S, 2 + seed % 3, seed, mixed=seed % 2 == 1)


@_timed(4, "sharpness and intersubjectivity bounds")
def criterion_4(res: Result) -> None:
    count = 0
    for A in _bounds_corpus():
        n = len(A)
        d, s = LEDGER.degree(A).value, LEDGER.sharpness(A).value
        tag = f"{A.space.name}, {n} outcomes: degree {d}, sharpness {s}"
        res.check(d >= 1 - (n * n - n) * (1 - s), "lower bound on degree fails, " + tag)
        res.check(s >= (1 + d) / 2, "lower bound on sharpness fails, " + tag)
        res.check((d == 1) == (s == 1), "exact-case equivalence fails, " + tag)
        if n == 2:
            res.check(s == (1 + d) / 2, "two-outcome identity fails, " + tag)
        count += 1
    res.check(count >= 100, f"only {count} measurements checked")


def _quantum_margins(res: Result, entry: catalog.CatalogEntry) -> None:
    m = decision_margins(entry.measurement)
    for key in ("eigen", "support", "extremal"):
        res.check(m[f"{key}_gap"] > MARGIN, f"{entry.name}: {key} gap {m[key + '_gap']}")
        res.check(m[f"{key}_noise"] < NOISE, f"{entry.name}: {key} noise {m[key + '_noise']}")
    err = m["pvm_error"]
    res.check(err < NOISE or err > IDEMPOTENT_TOL + MARGIN, f"{entry.name}: idempotence error {err}")


@_timed(5, "catalog expectations")
def criterion_5(res: Result) -> None:
    required = {
        "qubit-four-halves": {"intersubjective", "pvm", "extremal"},
        "qubit-trine": {"extremal", "pvm"},
        "square-gbit": {"cis_degree", "extremal"},
        "fivedim-es-ext": {"elementwise_sharp", "extremal", "cis_degree", "cis_witness_partition"},
        "direct-sum-es": {"elementwise_sharp", "extremal", "cis_below_one"},
        "qubit-z-pvm": {"pvm"},
    }
    for name, props in required.items():
        entry = catalog.load_example(name)
        res.check(props <= {e.prop for e in entry.expected}, f"{name}: missing expectations")
        for exp, actual, ok in catalog.check_entry(entry):
            res.check(ok, f"{name}.{exp.prop}: expected {exp.value}, got {actual}")
        if entry.quantum_dim:
            _quantum_margins(res, entry)
    A = catalog.load_example("fivedim-es-ext").measurement
    LEDGER.cis(A)


@_timed(6, "three-outcome and many-outcome witness constructions")
def criterion_6(res: Result) -> None:
    for name in ("square-gbit", "fivedim-es-ext"):
        S = catalog.load_example(name).model
        for build in (three_outcome_witness, many_outcome_witness):
            w = build(S)
            if not isinstance(w, Witness):
                res.check(False, f"{build.__name__} on {name} returned {w}")
                continue
            LEDGER.items += [(w.degree, w.measurement), (w.cis, w.measurement)]
            res.check(w.degree.value == 1, f"{build.__name__} on {name}: degree {w.degree.value}")
            res.check(w.cis.value < 1, f"{build.__name__} on {name}: cis {w.cis.value}")
            if build is many_outcome_witness:
                res.check(
                    len(w.measurement) >= cis_outcome_bound(S) + 1,
                    f"{name}: only {len(w.measurement)} outcomes",
                )
    for k in range(2, 6):
        S = catalog.simplex_model(k)
        for build in (three_outcome_witness, many_outcome_witness):
            res.check(isinstance(build(S), Classical), f"{build.__name__} on simplex {k}")


@_timed(7, "joint measurements and mixtures")
def criterion_7(res: Result) -> None:
    entries = _gpt_entries()
    for seed in range(50):
        S = entries[seed % len(entries)].model
        nx, ny = 2, 2 + seed % 2
        grid = tuple(product([str(i + 1) for i in range(nx)], [str(j + 1) for j in range(ny)]))
        C = random_measurement(S, 0, seed, mixed=seed % 2 == 0, labels=grid)
        A, B = marginals(C)
        dc, da, db = (LEDGER.degree(M).value for M in (C, A, B))
        res.check(dc >= da + db - 1, f"joint seed {seed}: {dc} < {da} + {db} - 1")
    for seed in range(50):
        S = entries[seed % len(entries)].model
        n = 2 + seed % 2
        A = random_measurement(S, n, 1000 + seed, mixed=seed % 2 == 0)
        B = random_measurement(S, n, 2000 + seed, mixed=True)
        lam = Fraction(1 + seed % 7, 8)
        C = mix(A, B, lam)
        for f in (LEDGER.degree, LEDGER.cis):
            a, c = f(A).value, f(C).value
            res.check(a >= 1 - (1 - c) / lam, f"mixture seed {seed} ({f.__name__}): {a} vs {c}")


def _cis_measurements() -> Iterable[Measurement]:
    for entry in _gpt_entries():
        yield from entry.measurements.values()


@_timed(8, "tomography, discrimination and perfect distinguishability")
def criterion_8(res: Result) -> None:
    entries = _gpt_entries()
    for entry in entries:
        S = entry.model
        res.check(
            is_tomographically_complete(S, sharp_two_outcome_set(S)),
            f"{entry.name}: sharp two-outcome set does not separate",
        )
    for seed in range(50):
        S = entries[seed % len(entries)].model
        E = random_ensemble(S, 2 + seed % 3, seed)
        d = discriminate(E)
        res.check(LEDGER.degree(d.measurement).value == 1, f"ensemble {seed}: optimizer not intersubjective")
        res.check(max(E.probs) <= d.success <= 1, f"ensemble {seed}: success {d.success}")
    for A in _cis_measurements():
        if LEDGER.cis(A).value != 1 or any(a.is_zero() for a in A.effects):
            continue
        states = perfectly_distinguishing_states(A)
        if not states:
            res.check(False, f"no distinguishing states for {A.space.name} outcome {states.outcome}")
            continue
        for (x, a), s in zip(A, states):
            for (y, b) in A:
                want = 1 if x == y else 0
                res.check(b(s) == want, f"{A.space.name}: outcome {y} at state for {x} is {b(s)}")


def _small_outcome_corpus() -> Iterable[Measurement]:
    for entry in _gpt_entries():
        for A in entry.measurements.values():
            for P in partitions_of(A.labels):
                yield coarse_grain(A, P)
        S = entry.model
        for build in (three_outcome_witness, many_outcome_witness):
            try:
                w = build(S)
            except ValueError:  # guard exceeded on the largest system
                continue
            if isinstance(w, Witness):
                for P in partitions_of(w.measurement.labels):
                    yield coarse_grain(w.measurement, P)
        for seed in range(6):
            yield random_measurement(S, 2 + seed % 2, 500 + seed, mixed=seed % 3 == 2)


@_timed(9, "no degree-1 gap below three outcomes or for small sharp measurements")
def criterion_9(res: Result) -> None:
    seen = 0
    for A in _small_outcome_corpus():
        if len(A) > 3:
            continue
        seen += 1
        d = LEDGER.degree(A).value
        if d != 1:
            continue
        c = LEDGER.cis(A).value
        if len(A) == 2:
            res.check(c == 1, f"two-outcome measurement on {A.space.name} with cis {c}")
        elif is_elementwise_sharp(A):
            res.check(c == 1, f"sharp three-outcome measurement on {A.space.name} with cis {c}")
    res.check(seen > 0, "empty corpus")


@_timed(10, "every collected witness re-verifies")
def criterion_10(res: Result) -> None:
    if not LEDGER.items:  # run on its own: collect reports for the catalog
        for A in _cis_measurements():
            LEDGER.degree(A), LEDGER.sharpness(A), LEDGER.cis(A)
    for r, A in LEDGER.items:
        res.check(r.verify(A), f"{r.kind} report on {A.space.name} fails to re-verify")
    for A in _cis_measurements():
        if is_extremal(A):
            res.check(LEDGER.degree(A).value == 1, f"extremal measurement on {A.space.name} not intersubjective")


CRITERIA: tuple[Callable[[], Result], ...] = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(echo: Callable[[str], None] | None = None) -> list[Result]:
    results = []
    for crit in CRITERIA:
        r = crit()
        if echo:
            echo(r.line())
        results.append(r)
    return results
