"""Exact rational linear programming.

A dense two-phase primal simplex with Bland's rule. Everything is exact:
arithmetic runs on gmpy2 ``mpq`` internally and results come back as
:class:`fractions.Fraction`. Optimal points are basic feasible solutions,
i.e. vertices of the feasible polyhedron.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .rational import as_rational, as_vector

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = mpq(0)


class InfeasibleError(ValueError):
    """Raised by helpers that need a feasible polytope and did not get one."""


def _q(x: Fraction) -> mpq:
    return mpq(x.numerator, x.denominator)


def _f(x: mpq) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` c.x subject to equality rows, ``row.x >= rhs`` rows and bounds.

    ``lower``/``upper`` hold one entry per variable; ``None`` means
    unbounded on that side. When ``lower`` is omitted every variable is
    nonnegative; when ``upper`` is omitted none has an upper bound.
    """

    objective: tuple
    sense: str = MINIMIZE
    equalities: tuple = ()
    inequalities: tuple = ()
    lower: tuple | None = None
    upper: tuple | None = None

    def __post_init__(self):
        n = len(self.objective)
        obj = as_vector(self.objective)
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"unknown sense {self.sense!r}")

        def rows(rs, kind):
            out = []
            for row, rhs in rs:
                row = as_vector(row)
                if len(row) != n:
                    raise ValueError(f"{kind} row has width {len(row)}, expected {n}")
                out.append((row, as_rational(rhs)))
            return tuple(out)

        def bounds(bs, default):
            if bs is None:
                return (default,) * n
            if len(bs) != n:
                raise ValueError(f"bound vector has length {len(bs)}, expected {n}")
            return tuple(None if b is None else as_rational(b) for b in bs)

        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "equalities", rows(self.equalities, "equality"))
        object.__setattr__(self, "inequalities", rows(self.inequalities, "inequality"))
        object.__setattr__(self, "lower", bounds(self.lower, Fraction(0)))
        object.__setattr__(self, "upper", bounds(self.upper, None))

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence) -> bool:
        """Exact check of every constraint at ``x``."""
        x = as_vector(x)
        if len(x) != self.num_vars:
            return False
        for xi, lo, hi in zip(x, self.lower, self.upper):
            if lo is not None and xi < lo:
                return False
            if hi is not None and xi > hi:
                return False
        for row, rhs in self.equalities:
            if sum(a * b for a, b in zip(row, x)) != rhs:
                return False
        for row, rhs in self.inequalities:
            if sum(a * b for a, b in zip(row, x)) < rhs:
                return False
        return True

    def value_at(self, x: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Fraction | None = None
    point: tuple | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Simplex:
    """Standard form ``A y = b, y >= 0`` built from a :class:`LinearProgram`."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.infeasible = False
        ncols = 0
        # x_j = offset_j + sum(coef * y_k)
        self.offset: list[Fraction] = []
        self.transform: list[list[tuple[int, int]]] = []
        bound_rows = []
        for lo, hi in zip(lp.lower, lp.upper):
            if lo is not None:
                self.offset.append(lo)
                self.transform.append([(ncols, 1)])
                if hi is not None:
                    if hi < lo:
                        self.infeasible = True
                    bound_rows.append((ncols, hi - lo))
                ncols += 1
            elif hi is not None:
                self.offset.append(hi)
                self.transform.append([(ncols, -1)])
                ncols += 1
            else:
                self.offset.append(Fraction(0))
                self.transform.append([(ncols, 1), (ncols + 1, -1)])
                ncols += 2

        rows: list[tuple[dict[int, Fraction], Fraction, int | None]] = []

        def substitute(row, rhs):
            coeffs: dict[int, Fraction] = {}
            shift = Fraction(0)
            for j, a in enumerate(row):
                if not a:
                    continue
                shift += a * self.offset[j]
                for k, s in self.transform[j]:
                    coeffs[k] = coeffs.get(k, Fraction(0)) + a * s
            return {k: v for k, v in coeffs.items() if v}, rhs - shift

        for row, rhs in lp.equalities:
            coeffs, b = substitute(row, rhs)
            rows.append((coeffs, b, None))
        for row, rhs in lp.inequalities:
            coeffs, b = substitute(row, rhs)
            coeffs[ncols] = Fraction(-1)
            rows.append((coeffs, b, ncols))
            ncols += 1
        for k, width in bound_rows:
            rows.append(({k: Fraction(1), ncols: Fraction(1)}, width, ncols))
            ncols += 1

        seen = set()
        normalized = []
        for coeffs, b, slack in rows:
            if not coeffs:
                if b != 0:
                    self.infeasible = True
                continue
            if b < 0:
                coeffs = {k: -v for k, v in coeffs.items()}
                b = -b
            key = (tuple(sorted(coeffs.items())), b)
            if key in seen:
                continue
            seen.add(key)
            # a slack with coefficient +1 can start in the basis
            start = slack if slack is not None and coeffs.get(slack) == 1 else None
            normalized.append((coeffs, b, start))

        self.n = ncols
        m = len(normalized)
        self.m = m
        self.num_art = sum(1 for _, _, s in normalized if s is None)
        width = ncols + self.num_art + 1  # last column is the rhs
        self.width = width
        self.T: list[list[mpq]] = []
        self.basis: list[int] = []
        art = ncols
        for coeffs, b, start in normalized:
            row = [_ZERO] * width
            for k, v in coeffs.items():
                row[k] = _q(v)
            row[-1] = _q(b)
            if start is None:
                row[art] = mpq(1)
                self.basis.append(art)
                art += 1
            else:
                self.basis.append(start)
            self.T.append(row)

    # -- core pivoting -------------------------------------------------

    def _pivot(self, r: int, c: int, cost: list[mpq]) -> None:
        T = self.T
        prow = T[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv if v else v for v in prow]
            T[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        f = cost[c]
        if f:
            for j in nz:
                cost[j] -= f * prow[j]
        self.basis[r] = c

    def _iterate(self, cost: list[mpq], allowed: int) -> str:
        """Bland's rule on columns ``< allowed``; ``cost`` holds reduced costs."""
        T = self.T
        while True:
            c = next((j for j in range(allowed) if cost[j] < 0), None)
            if c is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(T):
                a = row[c]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best[0]
                        or (ratio == best[0] and self.basis[i] < self.basis[best[1]])
                    ):
                        best = (ratio, i)
            if best is None:
                return UNBOUNDED
            self._pivot(best[1], c, cost)

    def _reduced_costs(self, c: list[mpq]) -> list[mpq]:
        cost = list(c)
        for i, row in enumerate(self.T):
            cb = c[self.basis[i]]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        cost[j] -= cb * v
        return cost

    def phase_one(self) -> bool:
        if self.infeasible:
            return False
        n = self.n
        c = [_ZERO] * self.width
        for j in range(n, n + self.num_art):
            c[j] = mpq(1)
        cost = self._reduced_costs(c)
        self._iterate(cost, n)
        if -cost[-1] != 0:  # phase-one optimum is -cost[rhs]
            return False
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(self.T):
            if self.basis[i] >= n:
                row = self.T[i]
                j = next((j for j in range(n) if row[j]), None)
                if j is None:
                    del self.T[i]
                    del self.basis[i]
                    continue
                self._pivot(i, j, [_ZERO] * self.width)
            i += 1
        # discard artificial columns
        self.T = [row[:n] + [row[-1]] for row in self.T]
        self.width = n + 1
        return True

    def phase_two(self, objective: Sequence[Fraction], maximize: bool) -> LpSolution:
        n = self.n
        sign = -1 if maximize else 1
        c = [_ZERO] * self.width
        for j, a in enumerate(objective):
            if a:
                for k, s in self.transform[j]:
                    c[k] += _q(a) * s * sign
        cost = self._reduced_costs(c)
        status = self._iterate(cost, n)
        if status == UNBOUNDED:
            return LpSolution(UNBOUNDED)
        y = [Fraction(0)] * n
        for i, row in enumerate(self.T):
            y[self.basis[i]] = _f(row[-1])
        x = tuple(
            off + sum((s * y[k] for k, s in tr), Fraction(0))
            for off, tr in zip(self.offset, self.transform)
        )
        value = sum((a * b for a, b in zip(objective, x)), Fraction(0))
        return LpSolution(OPTIMAL, value, x)


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly. Infeasibility and unboundedness are statuses."""
    return solve_many(lp, [lp.objective])[0]


def solve_many(lp: LinearProgram, objectives: Sequence[Sequence]) -> list[LpSolution]:
    """Optimize several objectives (all in ``lp.sense``) over one feasible region.

    Phase one runs once and each phase two starts from the previous optimal
    basis, so this is much cheaper than separate :func:`solve` calls.
    """
    simplex = _Simplex(lp)
    if not simplex.phase_one():
        return [LpSolution(INFEASIBLE) for _ in objectives]
    maximize = lp.sense == MAXIMIZE
    out = []
    for obj in objectives:
        obj = as_vector(obj)
        if len(obj) != lp.num_vars:
            raise ValueError(f"objective has width {len(obj)}, expected {lp.num_vars}")
        out.append(simplex.phase_two(obj, maximize))
    return out


def seeded_objective(seed: int, n: int) -> tuple[Fraction, ...]:
    """Deterministic generic integer direction for ``n`` variables."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        v = 0
        while v == 0:
            v = rng.randint(-997, 997)
        out.append(Fraction(v))
    return tuple(out)


def vertex_sample(lp: LinearProgram, seed: int) -> tuple[Fraction, ...]:
    """A vertex of ``lp``'s feasible polytope chosen by a seeded objective.

    The objective of ``lp`` is ignored. Same seed, same vertex.
    """
    probe = LinearProgram(
        seeded_objective(seed, lp.num_vars),
        MAXIMIZE,
        lp.equalities,
        lp.inequalities,
        lp.lower,
        lp.upper,
    )
    sol = solve(probe)
    if sol.status == INFEASIBLE:
        raise InfeasibleError("constraints are infeasible")
    if sol.status == UNBOUNDED:
        raise InfeasibleError("constraints do not describe a polytope (unbounded)")
    return sol.point
