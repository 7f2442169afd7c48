"""Named example systems and measurements with their expected properties.

Each expectation carries a source tag: ``"stated"`` (a claim made for the
published example), ``"derived"`` (computed here by an independent
oracle), or ``"trivial"`` (true by construction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Sequence

import numpy as np

from . import rational as Q
from .cones import is_classical
from .metrics import (
    cis_degree,
    intersubjectivity_degree,
    is_elementwise_sharp,
    is_extremal,
)
from .model import (
    Effect,
    Measurement,
    OutcomePartition,
    StateSpace,
    direct_sum_measurement,
    direct_sum_space,
    mix,
)
from .quantum import Povm, is_extremal_povm, is_intersubjective_povm, is_pvm, ket, projector

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Expectation:
    prop: str
    value: Any
    source: str


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    model: StateSpace | None = None
    quantum_dim: int | None = None
    measurements: dict = field(default_factory=dict)
    expected: tuple = ()

    @property
    def measurement(self):
        """The entry's primary measurement (or POVM)."""
        return self.measurements["A"]


def enumerate_vertices(
    inequalities: Sequence[tuple[Sequence, Any]],
    equalities: Sequence[tuple[Sequence, Any]],
    dim: int,
) -> list[tuple[Fraction, ...]]:
    """Brute-force vertex enumeration of ``{x : row.x >= rhs, row.x == rhs}``.

    Tries every choice of active inequalities that, with the equalities,
    pins down a unique point, and keeps the feasible ones.
    """
    ineqs = [(Q.as_vector(r), Q.as_rational(b)) for r, b in inequalities]
    eqs = [(Q.as_vector(r), Q.as_rational(b)) for r, b in equalities]
    need = dim - Q.rank([r for r, _ in eqs]) if eqs else dim
    found = []
    for active in combinations(range(len(ineqs)), need):
        rows = [r for r, _ in eqs] + [ineqs[i][0] for i in active]
        if Q.rank(rows) < dim:
            continue
        x = Q.solve(rows, [b for _, b in eqs] + [ineqs[i][1] for i in active])
        if x is None:
            continue
        if all(Q.dot(r, x) >= b for r, b in ineqs) and x not in found:
            found.append(x)
    return sorted(found)


# -- GPT systems -------------------------------------------------------------


def square_model() -> StateSpace:
    return StateSpace("square", 2, ((1, 1), (1, -1), (-1, 1), (-1, -1)))


def square_effects(S: StateSpace | None = None) -> dict[str, Effect]:
    S = S or square_model()
    return {
        "b+": Effect(S, (HALF, 0), HALF),
        "b-": Effect(S, (-HALF, 0), HALF),
        "c+": Effect(S, (0, HALF), HALF),
        "c-": Effect(S, (0, -HALF), HALF),
    }


FIVEDIM_INEQUALITIES = (
    ((1, 0, 0, 0, 0), 0),
    ((0, 1, 0, 0, 0), 0),
    ((0, 0, 1, 0, 0), 0),
    ((0, 0, 0, 1, 0), 0),
    ((0, 0, 0, 0, 1), 0),
    ((1, 0, 0, 1, -1), 0),
    ((0, 1, 1, 0, -1), 0),
)
FIVEDIM_EQUALITIES = (((1, 1, 1, 1, 0), 1),)

FIVEDIM_VERTICES = (
    (1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
    (HALF, HALF, 0, 0, HALF),
    (HALF, 0, HALF, 0, HALF),
    (0, HALF, 0, HALF, HALF),
    (0, 0, HALF, HALF, HALF),
)


def fivedim_model() -> StateSpace:
    derived = enumerate_vertices(FIVEDIM_INEQUALITIES, FIVEDIM_EQUALITIES, 5)
    if sorted(Q.as_vector(v) for v in FIVEDIM_VERTICES) != derived:
        raise RuntimeError("stored vertex list disagrees with the inequality description")
    return StateSpace("fivedim", 5, FIVEDIM_VERTICES)


def fivedim_measurement(S: StateSpace | None = None) -> Measurement:
    S = S or fivedim_model()
    effects = tuple(
        Effect(S, tuple(int(k == i) for k in range(5)), 0) for i in range(4)
    )
    return Measurement(S, ("1", "2", "3", "4"), effects)


def simplex_model(k: int) -> StateSpace:
    """Classical system with ``k`` pure states, as the standard simplex in R^(k-1)."""
    if k < 1:
        raise ValueError("need at least one vertex")
    if k == 1:
        return StateSpace("simplex-1", 1, ((0,),))
    verts = [(0,) * (k - 1)] + [tuple(int(i == j) for j in range(k - 1)) for i in range(k - 1)]
    return StateSpace(f"simplex-{k}", k - 1, tuple(verts))


def indicator_measurement(S: StateSpace) -> Measurement:
    n = len(S.vertices)
    table = [[int(i == v) for v in range(n)] for i in range(n)]
    return Measurement.from_values(S, tuple(str(i + 1) for i in range(n)), table)


# -- entries ------------------------------------------------------------------


def _square_entry() -> CatalogEntry:
    S = square_model()
    e = square_effects(S)
    B = Measurement(S, ("+", "-"), (e["b+"], e["b-"]))
    C = Measurement(S, ("+", "-"), (e["c+"], e["c-"]))
    return CatalogEntry(
        "square-gbit",
        "square model; A is the equal mixture of the two edge measurements B and C",
        model=S,
        measurements={"A": mix(B, C, HALF), "B": B, "C": C},
        expected=(
            Expectation("cis_degree", Fraction(1), "stated"),
            Expectation("extremal", False, "stated"),
            Expectation("degree", Fraction(1), "derived"),
            Expectation("classical", False, "derived"),
        ),
    )


def _fivedim_entry() -> CatalogEntry:
    S = fivedim_model()
    A = fivedim_measurement(S)
    a = A.effects
    B = Measurement(S, ("12", "34"), (a[0] + a[1], a[2] + a[3]))
    C = Measurement(S, ("13", "24"), (a[0] + a[2], a[1] + a[3]))
    return CatalogEntry(
        "fivedim-es-ext",
        "five-coordinate polytope whose coordinate measurement is sharp and extremal",
        model=S,
        measurements={"A": A, "B": B, "C": C},
        expected=(
            Expectation("elementwise_sharp", True, "stated"),
            Expectation("extremal", True, "stated"),
            Expectation("cis_degree", Fraction(0), "derived"),
            Expectation(
                "cis_witness_partition", OutcomePartition((("1", "4"), ("2", "3"))), "stated"
            ),
            Expectation("degree", Fraction(1), "derived"),
            Expectation("classical", False, "derived"),
        ),
    )


def _direct_sum_entry() -> CatalogEntry:
    sq, fd = _square_entry(), _fivedim_entry()
    S = direct_sum_space(sq.model, fd.model)
    A = direct_sum_measurement(sq.measurement, fd.measurement, S)
    return CatalogEntry(
        "direct-sum-es",
        "direct sum of the square and five-coordinate systems and their measurements",
        model=S,
        measurements={"A": A},
        expected=(
            Expectation("elementwise_sharp", True, "stated"),
            Expectation("extremal", False, "stated"),
            Expectation("cis_below_one", True, "stated"),
            Expectation("classical", False, "derived"),
        ),
    )


def _simplex_entry(k: int) -> CatalogEntry:
    S = simplex_model(k)
    return CatalogEntry(
        f"classical-{k}",
        f"classical system with {k} pure states and its indicator measurement",
        model=S,
        measurements={"A": indicator_measurement(S)},
        expected=(
            Expectation("classical", True, "trivial"),
            Expectation("degree", Fraction(1), "trivial"),
            Expectation("cis_degree", Fraction(1), "trivial"),
            Expectation("extremal", True, "trivial"),
        ),
    )


def four_halves_povm() -> Povm:
    plus, minus = ket(1, 1), ket(1, -1)
    elems = [projector(ket(1, 0)), projector(ket(0, 1)), projector(plus), projector(minus)]
    return Povm(("0", "1", "+", "-"), tuple(e / 2 for e in elems))


def trine_povm() -> Povm:
    r = math.sqrt(3) / 2
    elems = [projector(ket(1, 0)), projector(ket(0.5, r)), projector(ket(0.5, -r))]
    return Povm(("0", "phi+", "phi-"), tuple(2 * e / 3 for e in elems))


def z_pvm() -> Povm:
    return Povm(("0", "1"), (projector(ket(1, 0)), projector(ket(0, 1))))


def _quantum_entries() -> list[CatalogEntry]:
    return [
        CatalogEntry(
            "qubit-four-halves",
            "halves of the Z and X basis projectors",
            quantum_dim=2,
            measurements={"A": four_halves_povm()},
            expected=(
                Expectation("intersubjective", True, "stated"),
                Expectation("pvm", False, "stated"),
                Expectation("extremal", False, "stated"),
            ),
        ),
        CatalogEntry(
            "qubit-trine",
            "trine POVM with elements 2/3 of three projectors at 120 degrees",
            quantum_dim=2,
            measurements={"A": trine_povm()},
            expected=(
                Expectation("extremal", True, "stated"),
                Expectation("pvm", False, "stated"),
                Expectation("intersubjective", True, "derived"),
            ),
        ),
        CatalogEntry(
            "qubit-z-pvm",
            "computational-basis measurement",
            quantum_dim=2,
            measurements={"A": z_pvm()},
            expected=(
                Expectation("pvm", True, "trivial"),
                Expectation("intersubjective", True, "trivial"),
                Expectation("extremal", True, "trivial"),
            ),
        ),
    ]


_BUILDERS: dict[str, Callable[[], CatalogEntry]] = {
    "square-gbit": _square_entry,
    "fivedim-es-ext": _fivedim_entry,
    "direct-sum-es": _direct_sum_entry,
    "classical-2": lambda: _simplex_entry(2),
    "classical-3": lambda: _simplex_entry(3),
    "classical-4": lambda: _simplex_entry(4),
}
for _entry in _quantum_entries():
    _BUILDERS[_entry.name] = (lambda e: (lambda: e))(_entry)

_CACHE: dict[str, CatalogEntry] = {}


def names() -> list[str]:
    return list(_BUILDERS)


def gpt_names() -> list[str]:
    return [n for n in _BUILDERS if load_example(n).model is not None]


def load_example(name: str) -> CatalogEntry:
    if name not in _BUILDERS:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(_BUILDERS)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def compute_property(entry: CatalogEntry, prop: str):
    """Evaluate ``prop`` for the entry's primary measurement with this library."""
    A = entry.measurement
    if isinstance(A, Povm):
        return {
            "intersubjective": lambda: bool(is_intersubjective_povm(A)),
            "pvm": lambda: is_pvm(A),
            "extremal": lambda: is_extremal_povm(A),
        }[prop]()
    table: dict[str, Callable[[], Any]] = {
        "degree": lambda: intersubjectivity_degree(A).value,
        "cis_degree": lambda: cis_degree(A).value,
        "cis_below_one": lambda: cis_degree(A).value < 1,
        "cis_witness_partition": lambda: cis_degree(A).witness_partition,
        "extremal": lambda: is_extremal(A),
        "elementwise_sharp": lambda: is_elementwise_sharp(A),
        "classical": lambda: is_classical(entry.model),
    }
    return table[prop]()


def check_entry(entry: CatalogEntry) -> list[tuple[Expectation, Any, bool]]:
    """Recompute every expectation; returns (expectation, actual, matches)."""
    out = []
    for exp in entry.expected:
        actual = compute_property(entry, exp.prop)
        if isinstance(exp.value, OutcomePartition):
            ok = isinstance(actual, OutcomePartition) and actual.same_as(exp.value)
        else:
            ok = actual == exp.value
        out.append((exp, actual, ok))
    return out


def povm_as_array(A: Povm) -> np.ndarray:
    return np.stack(A.elements)
