"""The cone of nonnegative affine functionals and the effect polytope.

Both are enumerated in vertex-value space: a functional is identified
with its values on the pure states, restricted to the subspace of
affine-consistent value vectors. Enumeration uses the double-description
method with a combinatorial adjacency test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from . import rational as Q
from .model import Effect, GuardError, StateSpace
from .optimizer import MINIMIZE, LinearProgram, solve

MAX_VERTICES = 16
MAX_AFFINE_DIM = 7


def extreme_rays(H: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Extreme rays of the pointed cone ``{x : H x >= 0}``.

    ``H`` must have full column rank. Rays come back scaled to integer
    coordinates with gcd 1.
    """
    H = [Q.as_vector(h) for h in H]
    r = len(H[0])
    basis_rows: list[int] = []
    for i, h in enumerate(H):
        if Q.rank([H[j] for j in basis_rows] + [h]) > len(basis_rows):
            basis_rows.append(i)
            if len(basis_rows) == r:
                break
    if len(basis_rows) < r:
        raise ValueError("constraint matrix is not of full column rank (cone not pointed)")

    # initial simplicial cone: columns of the inverse of the chosen rows
    rays: list[tuple[tuple[Fraction, ...], frozenset[int]]] = []
    for k in range(r):
        rhs = [Fraction(int(j == k)) for j in range(r)]
        x = Q.solve([H[i] for i in basis_rows], rhs)
        zero = frozenset(basis_rows[j] for j in range(r) if j != k)
        rays.append((x, zero))

    processed = set(basis_rows)
    for i, h in enumerate(H):
        if i in processed:
            continue
        vals = [Q.dot(h, x) for x, _ in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new = [rays[k] for k in pos]
        new += [(rays[k][0], rays[k][1] | {i}) for k in zer]
        for p in pos:
            for n in neg:
                common = rays[p][1] & rays[n][1]
                if len(common) < r - 2:
                    continue
                if any(
                    k != p and k != n and common <= rays[k][1] for k in range(len(rays))
                ):
                    continue
                x = tuple(vals[p] * a - vals[n] * b for a, b in zip(rays[n][0], rays[p][0]))
                new.append((x, common | {i}))
        rays = new
        processed.add(i)
    return [_primitive(x) for x, _ in rays]


def _primitive(x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    den = lcm(*(v.denominator for v in x))
    ints = [int(v * den) for v in x]
    g = gcd(*ints) or 1
    return tuple(Fraction(v // g) for v in ints)


def _guard(S: StateSpace) -> None:
    if len(S.vertices) > MAX_VERTICES:
        raise GuardError(f"{len(S.vertices)} vertices exceed the guard {MAX_VERTICES}")
    if S.affine_dim > MAX_AFFINE_DIM:
        raise GuardError(f"affine dimension {S.affine_dim} exceeds the guard {MAX_AFFINE_DIM}")


def _values(S: StateSpace, t: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(Q.dot(row, t) for row in S.value_basis)


@dataclass(frozen=True)
class RayBasis:
    """Unit-norm indecomposable effects of a system, one per extremal ray."""

    space: StateSpace
    rays: tuple

    def __len__(self):
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    def index_of(self, a: Effect) -> int | None:
        """Index of the ray proportional to ``a``, if any."""
        if a.is_zero():
            return None
        scaled = tuple(v / a.norm for v in a.values)
        for k, ray in enumerate(self.rays):
            if ray.values == scaled:
                return k
        return None


@lru_cache(maxsize=64)
def nonneg_cone_rays(S: StateSpace) -> RayBasis:
    """Extremal rays of the cone of nonnegative affine functionals on ``S``."""
    _guard(S)
    rays = []
    for t in extreme_rays(S.value_basis):
        w = _values(S, t)
        top = max(w)
        rays.append(Effect.from_values(S, tuple(v / top for v in w)))
    rays.sort(key=lambda e: e.values, reverse=True)
    return RayBasis(S, tuple(rays))


def is_indecomposable(a: Effect) -> bool:
    if a.is_zero():
        raise ValueError("the zero effect is excluded from indecomposability")
    return nonneg_cone_rays(a.space).index_of(a) is not None


def is_classical(S: StateSpace) -> bool:
    """Simplex test: unit-norm indecomposable effects are linearly independent."""
    rays = nonneg_cone_rays(S)
    return Q.rank([r.values for r in rays]) == len(rays)


def is_simplex(S: StateSpace) -> bool:
    """Direct geometric test (affinely independent vertices), independent of rays."""
    return S.linear_dim == len(S.vertices)


def decompose_into_rays(a: Effect, basis: RayBasis | None = None) -> list[tuple[Fraction, Effect]]:
    """Nonnegative coefficients ``c_j`` with ``sum c_j ray_j == a`` (basic solution)."""
    if basis is None:
        basis = nonneg_cone_rays(a.space)
    if basis.space != a.space:
        raise ValueError("ray basis belongs to another state space")
    if any(v < 0 for v in a.values):
        raise ValueError("functional is negative somewhere")
    if a.is_zero():
        return []
    k = len(basis.rays)
    eqs = [
        (tuple(ray.values[v] for ray in basis.rays), a.values[v])
        for v in range(len(a.values))
    ]
    sol = solve(LinearProgram((1,) * k, MINIMIZE, eqs))
    if not sol.optimal:
        raise RuntimeError("conic decomposition failed; the ray basis is incomplete")
    return [(c, ray) for c, ray in zip(sol.point, basis.rays) if c]


@lru_cache(maxsize=64)
def extreme_effects(S: StateSpace) -> tuple[Effect, ...]:
    """Vertices of the effect polytope ``{0 <= a <= 1_S}``."""
    _guard(S)
    H = []
    for row in S.value_basis:
        H.append(tuple(row) + (Fraction(0),))
        H.append(tuple(-x for x in row) + (Fraction(1),))
    out = []
    for ray in extreme_rays(H):
        *t, s = ray
        if s <= 0:
            raise RuntimeError("effect polytope is unbounded")
        out.append(Effect.from_values(S, tuple(v / s for v in _values(S, t))))
    out.sort(key=lambda e: e.values)
    return tuple(out)
