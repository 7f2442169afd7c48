"""Seeded random models, measurements and ensembles for property testing.

Everything here is a pure function of its integer seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Hashable, Sequence

from .metrics import _ValueLP
from .model import GuardError, Measurement, StateSpace, mix
from .optimizer import MAXIMIZE, vertex_sample

MAX_RANDOM_DIM = 4
MAX_RANDOM_VERTICES = 8
MAX_RANDOM_OUTCOMES = 5
RESAMPLE_LIMIT = 50


def random_rational(rng: random.Random, lo=-1, hi=1, max_den: int = 4) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * q, hi * q), q)


def random_distribution(rng: random.Random, n: int, max_den: int = 12) -> tuple[Fraction, ...]:
    """A rational probability vector with ``n`` entries (zeros allowed)."""
    cuts = sorted(Fraction(rng.randint(0, max_den), max_den) for _ in range(n - 1))
    edges = [Fraction(0)] + cuts + [Fraction(1)]
    return tuple(b - a for a, b in zip(edges, edges[1:]))


def random_model(seed: int, dim: int = 2, vertices: int = 6) -> StateSpace:
    """Convex hull of ``vertices`` random rational points, keeping only extreme ones."""
    if not 1 <= dim <= MAX_RANDOM_DIM:
        raise GuardError(f"dimension must lie in [1, {MAX_RANDOM_DIM}]")
    if not 2 <= vertices <= MAX_RANDOM_VERTICES:
        raise GuardError(f"vertex count must lie in [2, {MAX_RANDOM_VERTICES}]")
    rng = random.Random(seed)
    for _ in range(RESAMPLE_LIMIT):
        pts = list(dict.fromkeys(
            tuple(random_rational(rng) for _ in range(dim)) for _ in range(vertices)
        ))
        kept = list(pts)
        for p in pts:
            others = [q for q in kept if q != p]
            if others and StateSpace("probe", dim, tuple(others), validate=False).contains(p):
                kept = others
        if len(kept) >= 2:
            return StateSpace(f"random-{seed}", dim, tuple(kept))
    raise ValueError(f"seed {seed} produced only degenerate samples")


def random_simplex(seed: int, k: int) -> StateSpace:
    """A classical system with ``k`` pure states at random affine position."""
    if not 1 <= k <= MAX_RANDOM_DIM + 1:
        raise GuardError(f"simplex size must lie in [1, {MAX_RANDOM_DIM + 1}]")
    rng = random.Random(seed)
    dim = max(k - 1, 1)
    while True:
        verts = [tuple(random_rational(rng, -2, 2) for _ in range(dim)) for _ in range(k)]
        if len(set(verts)) < k:
            continue
        S = StateSpace(f"simplex-{k}-{seed}", dim, tuple(verts), validate=False)
        if S.linear_dim == k:
            return StateSpace(S.name, dim, S.vertices)


def measurement_polytope_vertex(S: StateSpace, labels: Sequence[Hashable], seed: int) -> Measurement:
    """A vertex of the polytope of measurements with the given outcomes."""
    lp = _ValueLP(S)
    for i in range(len(labels)):
        lp.family(i, [Fraction(1)] * lp.nv)
    for v in range(lp.nv):
        lp.equation([(i, v) for i in range(len(labels))], 1)
    point = vertex_sample(lp.program(MAXIMIZE), seed)
    return Measurement.from_values(S, labels, [lp.values(i, point) for i in range(len(labels))])


def random_measurement(
    S: StateSpace,
    outcomes: int,
    seed: int,
    mixed: bool = False,
    labels: Sequence[Hashable] | None = None,
) -> Measurement:
    """Seeded vertex of the measurement polytope, optionally mixed with a coin toss.

    With ``mixed`` the vertex is combined with a seeded coin toss at a seeded
    weight in (0, 1), which usually yields a non-extremal measurement.
    """
    if not 1 <= outcomes <= MAX_RANDOM_OUTCOMES and labels is None:
        raise GuardError(f"outcome count must lie in [1, {MAX_RANDOM_OUTCOMES}]")
    if labels is None:
        labels = tuple(str(i + 1) for i in range(outcomes))
    A = measurement_polytope_vertex(S, labels, seed)
    if not mixed:
        return A
    rng = random.Random(seed ^ 0x5EED)
    coin = Measurement.coin_toss(S, random_distribution(rng, len(labels)), labels)
    lam = Fraction(rng.randint(1, 7), 8)
    return mix(A, coin, lam)


def random_state(S: StateSpace, rng: random.Random) -> tuple[Fraction, ...]:
    """A random rational convex combination of the vertices."""
    w = random_distribution(rng, len(S.vertices))
    return tuple(sum((c * v[k] for c, v in zip(w, S.vertices)), Fraction(0)) for k in range(S.dim))


def random_ensemble(S: StateSpace, size: int, seed: int):
    from .tasks import Ensemble

    rng = random.Random(seed)
    points = [random_state(S, rng) for _ in range(size)]
    probs = random_distribution(rng, size)
    return Ensemble(S, tuple(points), probs)
