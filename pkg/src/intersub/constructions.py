"""Constructive witnesses separating intersubjectivity from complete intersubjectivity.

On any non-classical system two non-proportional indecomposable effects
give a three-outcome intersubjective measurement with a coarse-graining
that is not intersubjective, and more rays than the linear dimension give
a sharp measurement with too many outcomes to be completely
intersubjective.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cones import decompose_into_rays, is_classical, nonneg_cone_rays
from .metrics import DegreeReport, cis_degree, intersubjectivity_degree
from .model import Effect, Measurement, StateSpace
from .optimizer import MAXIMIZE, LinearProgram, solve

HALF = Fraction(1, 2)


class TheoremViolation(RuntimeError):
    """A construction that must succeed on a non-classical system did not."""


@dataclass(frozen=True)
class Classical:
    """Verdict returned instead of a witness when the system is a simplex."""

    space: StateSpace
    reason: str


@dataclass(frozen=True)
class Witness:
    measurement: Measurement
    degree: DegreeReport
    cis: DegreeReport
    rays: tuple


def cis_outcome_bound(S: StateSpace) -> int:
    """Linear dimension of ``S``: no completely intersubjective measurement has more outcomes."""
    return S.linear_dim


def _pair_weights(a: Effect, b: Effect) -> tuple[Fraction, Fraction]:
    """Maximize lam + mu with lam*a + mu*b <= 1, then the smaller of the two."""
    rows = tuple(((-x, -y), Fraction(-1)) for x, y in zip(a.values, b.values))
    top = solve(LinearProgram((1, 1), MAXIMIZE, inequalities=rows))
    if not top.optimal:
        raise TheoremViolation("pair LP is unbounded; rays are not normalized effects")
    # variables lam, mu, t with t <= lam, t <= mu and lam + mu fixed at its optimum
    rows3 = tuple((r + (0,), rhs) for r, rhs in rows)
    rows3 += (((1, 0, -1), 0), ((0, 1, -1), 0))
    sym = solve(LinearProgram((0, 0, 1), MAXIMIZE, (((1, 1, 0), top.value),), rows3))
    lam, mu, _ = sym.point
    if lam == 0 or mu == 0:
        return HALF, HALF
    return lam, mu


def three_outcome_witness(S: StateSpace) -> Witness | Classical:
    """First ray pair giving ``(lam a, mu b, rest)`` with degree 1 and CIS degree below 1."""
    rays = nonneg_cone_rays(S).rays
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            a, b = rays[i], rays[j]
            lam, mu = _pair_weights(a, b)
            x, y = lam * a, mu * b
            rest = Effect.unit(S) - x - y
            A = Measurement(S, ("a", "b", "rest"), (x, y, rest))
            deg = intersubjectivity_degree(A)
            if deg.value != 1:
                continue
            cis = cis_degree(A)
            if cis.value < 1:
                return Witness(A, deg, cis, (i, j))
    if is_classical(S):
        return Classical(S, "unit-norm indecomposable effects are linearly independent")
    raise TheoremViolation(f"no three-outcome witness on non-classical {S.name!r}")


def many_outcome_witness(S: StateSpace) -> Witness | Classical:
    """Sharp measurement built from n+1 rays, n the linear dimension of ``S``."""
    n = cis_outcome_bound(S)
    basis = nonneg_cone_rays(S)
    if len(basis) < n + 1:
        return Classical(S, f"only {len(basis)} indecomposable rays for linear dimension {n}")
    chosen = basis.rays[: n + 1]
    total = [sum(r.values[v] for r in chosen) for v in range(len(S.vertices))]
    eps = 1 / max(total)
    coeff = {k: eps for k in range(n + 1)}
    residual = Effect.from_values(S, tuple(1 - eps * t for t in total))
    for c, ray in decompose_into_rays(residual, basis):
        k = basis.rays.index(ray)
        coeff[k] = coeff.get(k, Fraction(0)) + c
    order = sorted(coeff)
    effects = tuple(coeff[k] * basis.rays[k] for k in order)
    C = Measurement(S, tuple(f"r{k + 1}" for k in order), effects)
    deg = intersubjectivity_degree(C)
    if deg.value != 1 or len(C) < n + 1:
        raise TheoremViolation(f"many-outcome construction failed on {S.name!r}")
    cis = cis_degree(C)
    if cis.value >= 1:
        raise TheoremViolation(f"{len(C)}-outcome measurement on {S.name!r} is completely intersubjective")
    return Witness(C, deg, cis, tuple(order))
