"""Degrees of intersubjectivity, sharpness and complete intersubjectivity.

Every degree is the largest alpha for which the alpha-indexed property
holds, computed exactly as the optimum of small linear programs whose
unknowns are the values of affine functionals at the pure states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Hashable, Sequence

from .cones import is_classical
from .model import (
    Effect,
    GuardError,
    Measurement,
    OutcomePartition,
    StateSpace,
    coarse_grain,
    effect_leq,
    is_joint,
    partitions_of,
)
from .optimizer import MAXIMIZE, MINIMIZE, LinearProgram, solve_many
from .rational import as_vector

MAX_OUTCOMES = 8

INTERSUBJECTIVITY = "intersubjectivity"
SHARPNESS = "sharpness"
COMPLETE_INTERSUBJECTIVITY = "complete-intersubjectivity"


class _ValueLP:
    """LP whose variables are values ``f_k(v)`` of unknown affine functionals.

    Values known to be zero are never materialized as variables.
    """

    def __init__(self, space: StateSpace):
        self.space = space
        self.nv = len(space.vertices)
        self.cols: dict[tuple[Hashable, int], int] = {}
        self.upper: list[Fraction | None] = []
        self.eqs: list[tuple[dict[int, Fraction], Fraction]] = []

    def family(self, key: Hashable, upper: Sequence | None = None) -> None:
        """Register functional ``key``; ``upper`` bounds its values (0 fixes them)."""
        for v in range(self.nv):
            ub = None if upper is None else upper[v]
            if ub is not None and ub <= 0:
                continue
            self.cols[(key, v)] = len(self.upper)
            self.upper.append(ub)
        for k in self.space.dependencies:
            row = {self.cols[(key, v)]: c for v, c in enumerate(k) if c and (key, v) in self.cols}
            if row:
                self.eqs.append((row, Fraction(0)))

    def col(self, key: Hashable, v: int) -> int | None:
        return self.cols.get((key, v))

    def equation(self, terms: Sequence[tuple[Hashable, int]], rhs) -> None:
        row: dict[int, Fraction] = {}
        for key, v in terms:
            c = self.cols.get((key, v))
            if c is not None:
                row[c] = row.get(c, Fraction(0)) + 1
        if row or rhs:
            self.eqs.append((row, Fraction(rhs)))

    def objective(self, terms: Sequence[tuple[Hashable, int]]) -> tuple[Fraction, ...]:
        obj = [Fraction(0)] * len(self.upper)
        for key, v in terms:
            c = self.cols.get((key, v))
            if c is not None:
                obj[c] += 1
        return tuple(obj)

    def program(self, sense: str) -> LinearProgram:
        n = len(self.upper)
        eqs = []
        for row, rhs in self.eqs:
            dense = [Fraction(0)] * n
            for c, a in row.items():
                dense[c] = a
            eqs.append((tuple(dense), rhs))
        return LinearProgram((0,) * n, sense, tuple(eqs), (), None, tuple(self.upper))

    def values(self, key: Hashable, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            point[self.cols[(key, v)]] if (key, v) in self.cols else Fraction(0)
            for v in range(self.nv)
        )


@dataclass(frozen=True)
class DegreeReport:
    """An exact degree with the objects that attain it.

    ``witness_state`` is a vertex index. For intersubjectivity the witness
    is a joint measurement of A with itself whose agreement probability at
    that vertex equals ``value``; for sharpness it is a common lower bound
    ``(effect, (x, x'))`` whose value there equals ``1 - value``; for
    complete intersubjectivity it is a coarse-graining together with the
    report for that coarse-grained measurement.
    """

    kind: str
    value: Fraction
    witness_state: int | None = None
    witness_joint: Measurement | None = None
    witness_effect: tuple[Effect, tuple] | None = None
    witness_partition: OutcomePartition | None = None
    inner: "DegreeReport | None" = None

    def verify(self, A: Measurement) -> bool:
        """Re-derive ``value`` from the witnesses by direct substitution."""
        if not 0 <= self.value <= 1:
            return False
        if self.kind == INTERSUBJECTIVITY:
            if self.witness_joint is None:
                return False
            J = self.witness_joint
            if not is_joint(J, A, A):
                return False
            agree = sum(J[(x, x)].values[self.witness_state] for x in A.labels)
            return agree == self.value
        if self.kind == SHARPNESS:
            if self.witness_effect is None:
                return len(A) == 1 and self.value == 1
            c, (x, y) = self.witness_effect
            if x == y or not (effect_leq(c, A[x]) and effect_leq(c, A[y])):
                return False
            return 1 - c.values[self.witness_state] == self.value
        if self.kind == COMPLETE_INTERSUBJECTIVITY:
            if self.witness_partition is None or self.inner is None:
                return False
            B = coarse_grain(A, self.witness_partition)
            return self.inner.value == self.value and self.inner.verify(B)
        return False


def _checked(report: DegreeReport, A: Measurement) -> DegreeReport:
    if not report.verify(A):
        raise RuntimeError(f"{report.kind} witness failed to re-verify")
    return report


def _guard(A: Measurement) -> None:
    if len(A) > MAX_OUTCOMES:
        raise GuardError(f"{len(A)} outcomes exceed the guard {MAX_OUTCOMES}")


def intersubjectivity_degree(A: Measurement) -> DegreeReport:
    """Largest alpha with sum_x b_xx >= alpha * 1_S for every B in JM(A, A).

    The minimum over joint measurements is attained by a symmetric one
    (the constraint set and objective are invariant under swapping the two
    observers), so only ``b_{x,x'}`` with ``x <= x'`` are variables.
    """
    _guard(A)
    n, S = len(A), A.space
    tab = A.table
    if n == 1:
        x = A.labels[0]
        J = Measurement(S, ((x, x),), (Effect.unit(S),))
        return _checked(DegreeReport(INTERSUBJECTIVITY, Fraction(1), 0, J), A)

    lp = _ValueLP(S)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    for i, j in pairs:
        lp.family((i, j), [min(a, b) for a, b in zip(tab[i], tab[j])])
    for i in range(n):
        for v in range(lp.nv):
            lp.equation([((min(i, j), max(i, j)), v) for j in range(n)], tab[i][v])
    objectives = [lp.objective([((i, i), u) for i in range(n)]) for u in range(lp.nv)]
    sols = solve_many(lp.program(MINIMIZE), objectives)
    if any(not s.optimal for s in sols):
        raise RuntimeError("joint-measurement LP is infeasible; the input is not a measurement")
    best = min(range(lp.nv), key=lambda u: (sols[u].value, u))
    point = sols[best].point

    vals = {p: lp.values(p, point) for p in pairs}
    labels, effects = [], []
    for i, j in product(range(n), repeat=2):
        labels.append((A.labels[i], A.labels[j]))
        effects.append(Effect.from_values(S, vals[(min(i, j), max(i, j))]))
    J = Measurement(S, tuple(labels), tuple(effects))
    return _checked(DegreeReport(INTERSUBJECTIVITY, sols[best].value, best, J), A)


def _max_common_lower_bound(a: Sequence[Fraction], b: Sequence[Fraction], S: StateSpace):
    """Max over vertices u of c(u) for effects c <= a, c <= b; returns (value, u, values)."""
    lp = _ValueLP(S)
    lp.family("c", [min(x, y) for x, y in zip(a, b)])
    live = [u for u in range(lp.nv) if lp.col("c", u) is not None]
    if not live:
        return Fraction(0), 0, (Fraction(0),) * lp.nv
    sols = solve_many(lp.program(MAXIMIZE), [lp.objective([("c", u)]) for u in live])
    k = max(range(len(live)), key=lambda k: (sols[k].value, -k))
    return sols[k].value, live[k], lp.values("c", sols[k].point)


def sharpness_degree(A: Measurement) -> DegreeReport:
    """Largest alpha such that every common lower bound of two outcomes is <= (1-alpha) 1_S."""
    S = A.space
    if len(A) == 1:
        return _checked(DegreeReport(SHARPNESS, Fraction(1)), A)
    best = None
    tab = A.table
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            val, u, c = _max_common_lower_bound(tab[i], tab[j], S)
            if best is None or val > best[0]:
                best = (val, u, c, (A.labels[i], A.labels[j]))
    val, u, c, pair = best
    report = DegreeReport(SHARPNESS, 1 - val, u, witness_effect=(Effect.from_values(S, c), pair))
    return _checked(report, A)


def is_sharp_effect(a: Effect) -> bool:
    A = Measurement(a.space, ("a", "not-a"), (a, a.complement()))
    return sharpness_degree(A).value == 1


def is_elementwise_sharp(A: Measurement) -> bool:
    return all(is_sharp_effect(a) for a in A.effects)


def cis_degree(A: Measurement) -> DegreeReport:
    """Minimum intersubjectivity degree over all coarse-grainings of ``A``.

    Partitions are visited in restricted-growth-string order and the first
    minimizer is reported; the search stops early once a degree of 0 is
    found, since no degree is smaller.
    """
    _guard(A)
    best: tuple[DegreeReport, OutcomePartition] | None = None
    for P in partitions_of(A.labels):
        r = intersubjectivity_degree(coarse_grain(A, P))
        if best is None or r.value < best[0].value:
            best = (r, P)
            if r.value == 0:
                break
    inner, P = best
    report = DegreeReport(
        COMPLETE_INTERSUBJECTIVITY, inner.value, inner.witness_state, witness_partition=P, inner=inner
    )
    return _checked(report, A)


def perturbation(A: Measurement) -> tuple[tuple[Fraction, ...], ...] | None:
    """A nonzero D with A + D and A - D both measurements, or None if A is extremal.

    Substituting ``e = a + d`` turns the symmetric perturbation polytope
    into ``0 <= e_x <= 2 a_x, sum_x e_x = 1_S``; A is extremal iff every
    coordinate maximum equals the corresponding value of A.
    """
    n, S = len(A), A.space
    tab = A.table
    lp = _ValueLP(S)
    for i in range(n):
        lp.family(i, [2 * x for x in tab[i]])
    for v in range(lp.nv):
        lp.equation([(i, v) for i in range(n)], 1)
    coords = [(i, v) for i in range(n) for v in range(lp.nv) if lp.col(i, v) is not None]
    if not coords:
        return None
    sols = solve_many(lp.program(MAXIMIZE), [lp.objective([c]) for c in coords])
    for (i, v), sol in zip(coords, sols):
        if sol.value != tab[i][v]:
            return tuple(
                tuple(e - a for e, a in zip(lp.values(k, sol.point), tab[k])) for k in range(n)
            )
    return None


def is_extremal(A: Measurement) -> bool:
    return perturbation(A) is None


def coin_toss_degree(weights: Sequence) -> Fraction:
    """Degree (and complete degree) of the coin toss ``(w_x 1_S)_x``."""
    w = as_vector(weights)
    if not w or any(x < 0 for x in w) or sum(w) != 1:
        raise ValueError(f"not a probability distribution: {w}")
    return max(2 * max(w) - 1, Fraction(0))


def classical_degree(S: StateSpace, A: Measurement) -> Fraction:
    """Closed-form degree (and complete degree) of A on a classical system."""
    if A.space != S:
        raise ValueError("measurement lives on another state space")
    if not is_classical(S):
        raise ValueError(f"{S.name!r} is not classical")
    tab = A.table
    return min(
        max(2 * max(row[v] for row in tab) - 1, Fraction(0)) for v in range(len(S.vertices))
    )
