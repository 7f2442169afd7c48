"""Operational tasks: discrimination, perfect distinguishability and tomography."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from . import rational as Q
from .cones import extreme_effects
from .metrics import _ValueLP, intersubjectivity_degree, sharpness_degree
from .model import GuardError, Measurement, StateSpace
from .optimizer import MAXIMIZE, MINIMIZE, LinearProgram, solve

MAX_ENSEMBLE = 8


@dataclass(frozen=True)
class Ensemble:
    space: StateSpace
    points: tuple
    probs: tuple

    def __post_init__(self):
        pts = tuple(Q.as_vector(p) for p in self.points)
        probs = Q.as_vector(self.probs)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", probs)
        if not pts or len(pts) != len(probs):
            raise ValueError("need one probability per state and at least one state")
        if any(p < 0 for p in probs) or sum(probs) != 1:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        weights = []
        for p in pts:
            w = self.space.convex_weights(p)
            if w is None:
                raise ValueError(f"{p} is not a state of {self.space.name!r}")
            weights.append(w)
        object.__setattr__(self, "_weights", tuple(weights))

    @property
    def weights(self) -> tuple:
        """Convex weights over the vertices certifying each state."""
        return self._weights

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class Discrimination:
    measurement: Measurement
    success: Fraction


def discriminate(E: Ensemble) -> Discrimination:
    """Best success probability for guessing which state was prepared.

    The optimizer is a vertex of the measurement polytope, hence extremal,
    and is checked to have intersubjectivity degree 1.
    """
    if len(E) > MAX_ENSEMBLE:
        raise GuardError(f"{len(E)} states exceed the guard {MAX_ENSEMBLE}")
    S, n = E.space, len(E)
    lp = _ValueLP(S)
    for x in range(n):
        lp.family(x, [Fraction(1)] * lp.nv)
    for v in range(lp.nv):
        lp.equation([(x, v) for x in range(n)], 1)
    base = lp.program(MAXIMIZE)
    obj = [Fraction(0)] * base.num_vars
    for x in range(n):
        for v, w in enumerate(E.weights[x]):
            obj[lp.col(x, v)] += E.probs[x] * w
    sol = solve(LinearProgram(tuple(obj), MAXIMIZE, base.equalities, (), None, base.upper))
    labels = tuple(str(x + 1) for x in range(n))
    A = Measurement.from_values(S, labels, [lp.values(x, sol.point) for x in range(n)])
    if intersubjectivity_degree(A).value != 1:
        raise RuntimeError("vertex optimizer is not intersubjective")
    return Discrimination(A, sol.value)


@dataclass(frozen=True)
class NotFound:
    outcome: Hashable

    def __bool__(self):
        return False


def perfectly_distinguishing_states(A: Measurement) -> list[tuple[Fraction, ...]] | NotFound:
    """One state per outcome on which that outcome occurs with certainty.

    Ties are broken towards the earliest vertices.
    """
    S = A.space
    nv = len(S.vertices)
    tie = tuple(Fraction(k) for k in range(nv))
    out = []
    for x, a in A:
        eqs = [((1,) * nv, 1), (a.values, 1)]
        sol = solve(LinearProgram(tie, MINIMIZE, eqs))
        if not sol.optimal:
            return NotFound(x)
        out.append(tuple(
            sum((w * v[k] for w, v in zip(sol.point, S.vertices)), Fraction(0)) for k in range(S.dim)
        ))
    return out


def is_tomographically_complete(S: StateSpace, measurements: Sequence[Measurement]) -> bool:
    """Whether the outcome statistics separate every pair of pure states."""
    rows = [tuple(Fraction(1) for _ in S.vertices)]
    for M in measurements:
        if M.space != S:
            raise ValueError("measurement lives on another state space")
        rows.extend(M.table)
    columns = list(zip(*rows))
    return len(set(columns)) == len(columns)


def sharp_two_outcome_set(S: StateSpace) -> list[Measurement]:
    """Sharp measurements ``(a, 1 - a)`` for every vertex ``a`` of the effect polytope."""
    seen, out = set(), []
    for a in extreme_effects(S):
        key = frozenset((a.values, a.complement().values))
        if key in seen:
            continue
        seen.add(key)
        M = Measurement(S, ("yes", "no"), (a, a.complement()))
        if sharpness_degree(M).value == 1:
            out.append(M)
    return out
