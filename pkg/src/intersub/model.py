"""State spaces, effects and measurements of polytopic GPT systems.

A system is stored as the list of its pure states (polytope vertices) in
plain ambient coordinates. Effects are affine functionals
``p -> linear . p + constant``; because the vertices need not span the
ambient space, the coefficient pair is only a representative and two
effects are equal exactly when they agree on every vertex.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from . import rational as Q
from .optimizer import MINIMIZE, LinearProgram, solve
from .rational import Vector, as_rational, as_vector

ONE = Fraction(1)
ZERO = Fraction(0)
MAX_PARTITION_SIZE = 10


class GuardError(ValueError):
    """An input exceeds a size guard of an exact algorithm."""


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Convex hull of finitely many rational points, all of them extreme."""

    name: str
    dim: int
    vertices: tuple
    summands: tuple = field(default=(), repr=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        verts = tuple(as_vector(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if not verts:
            raise ValueError("a state space needs at least one vertex")
        for v in verts:
            if len(v) != self.dim:
                raise ValueError(f"vertex {v} does not have {self.dim} coordinates")
        if len(set(verts)) != len(verts):
            raise ValueError("vertices must be distinct")
        if validate:
            for i in range(len(verts)):
                if self._in_hull_of_others(i):
                    raise ValueError(f"vertex {i} lies in the convex hull of the others")

    def _in_hull_of_others(self, i: int) -> bool:
        others = [v for j, v in enumerate(self.vertices) if j != i]
        if not others:
            return False
        target = self.vertices[i]
        eqs = [((Fraction(1),) * len(others), ONE)]
        for k in range(self.dim):
            eqs.append((tuple(v[k] for v in others), target[k]))
        return solve(LinearProgram((0,) * len(others), MINIMIZE, eqs)).optimal

    def __eq__(self, other):
        if not isinstance(other, StateSpace):
            return NotImplemented
        return self is other or (self.dim == other.dim and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.dim, self.vertices))

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def affine_matrix(self) -> list[list[Fraction]]:
        """Rows ``(v, 1)``; effect value vectors are exactly its column space."""
        return [list(v) + [ONE] for v in self.vertices]

    @cached_property
    def linear_dim(self) -> int:
        """Dimension of the span of the homogenized state space."""
        return Q.rank(self.affine_matrix)

    @property
    def affine_dim(self) -> int:
        return self.linear_dim - 1

    @cached_property
    def dependencies(self) -> tuple[Vector, ...]:
        """Affine dependencies ``k`` among vertices (``sum k_v v = 0``, ``sum k_v = 0``).

        A value vector ``w`` comes from an affine functional iff ``k . w = 0``
        for every returned ``k``.
        """
        return tuple(Q.nullspace(Q.transpose(self.affine_matrix), len(self.vertices)))

    @cached_property
    def value_basis(self) -> tuple[Vector, ...]:
        """Columns of :attr:`affine_matrix` forming a basis of the value space."""
        _, pivots = Q.rref(self.affine_matrix)
        return tuple(tuple(row[c] for c in pivots) for row in self.affine_matrix)

    def is_affine(self, values: Sequence) -> bool:
        return all(Q.dot(k, values) == 0 for k in self.dependencies)

    def convex_weights(self, p: Sequence, objective: Sequence | None = None) -> Vector | None:
        """Convex weights over the vertices reproducing ``p``, or None if ``p`` is outside."""
        p = as_vector(p)
        if len(p) != self.dim:
            raise ValueError(f"point has {len(p)} coordinates, space has {self.dim}")
        nv = len(self.vertices)
        eqs = [((ONE,) * nv, ONE)]
        for k in range(self.dim):
            eqs.append((tuple(v[k] for v in self.vertices), p[k]))
        obj = objective if objective is not None else (0,) * nv
        sol = solve(LinearProgram(obj, MINIMIZE, eqs))
        return sol.point if sol.optimal else None

    def contains(self, p: Sequence) -> bool:
        return self.convex_weights(p) is not None

    def index(self, vertex: Sequence) -> int:
        return self.vertices.index(as_vector(vertex))


class Effect:
    """Affine functional on a :class:`StateSpace` with values in [0, 1] on all states."""

    __slots__ = ("space", "linear", "constant", "values")

    def __init__(self, space: StateSpace, linear: Sequence, constant, *, check: bool = True):
        linear = as_vector(linear)
        if len(linear) != space.dim:
            raise ValueError(f"linear part has length {len(linear)}, space has dim {space.dim}")
        constant = as_rational(constant)
        self.space = space
        self.linear = linear
        self.constant = constant
        self.values = tuple(Q.dot(linear, v) + constant for v in space.vertices)
        if check:
            bad = [i for i, x in enumerate(self.values) if x < 0 or x > 1]
            if bad:
                raise ValueError(f"effect leaves [0, 1] at vertices {bad}: {self.values}")

    @classmethod
    def from_values(cls, space: StateSpace, values: Sequence, *, check: bool = True) -> Effect:
        """The effect taking ``values`` on the vertices (must be affine-consistent)."""
        values = as_vector(values)
        if len(values) != len(space.vertices):
            raise ValueError("need one value per vertex")
        coef = Q.solve(space.affine_matrix, values)
        if coef is None:
            raise ValueError(f"values {values} are not those of an affine functional")
        return cls(space, coef[:-1], coef[-1], check=check)

    @classmethod
    def zero(cls, space: StateSpace) -> Effect:
        return cls(space, (0,) * space.dim, 0)

    @classmethod
    def unit(cls, space: StateSpace) -> Effect:
        return cls(space, (0,) * space.dim, 1)

    def __call__(self, p: Sequence) -> Fraction:
        return evaluate(self, p)

    @property
    def norm(self) -> Fraction:
        return max(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def complement(self) -> Effect:
        return Effect(self.space, tuple(-x for x in self.linear), 1 - self.constant)

    def scaled(self, t) -> Effect:
        t = as_rational(t)
        return Effect(self.space, tuple(t * x for x in self.linear), t * self.constant)

    def __add__(self, other: Effect) -> Effect:
        _same_space(self.space, other.space)
        return Effect(
            self.space,
            tuple(a + b for a, b in zip(self.linear, other.linear)),
            self.constant + other.constant,
        )

    def __sub__(self, other: Effect) -> Effect:
        _same_space(self.space, other.space)
        return Effect(
            self.space,
            tuple(a - b for a, b in zip(self.linear, other.linear)),
            self.constant - other.constant,
        )

    def __rmul__(self, t) -> Effect:
        return self.scaled(t)

    def __eq__(self, other):
        if not isinstance(other, Effect):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Effect(values=({', '.join(Q.fmt(v) for v in self.values)}))"


def _same_space(s1: StateSpace, s2: StateSpace) -> None:
    if s1 != s2:
        raise ValueError(f"state space mismatch: {s1.name!r} vs {s2.name!r}")


def sum_effects(effects: Iterable[Effect], space: StateSpace) -> Effect:
    lin = [ZERO] * space.dim
    const = ZERO
    for e in effects:
        _same_space(space, e.space)
        lin = [a + b for a, b in zip(lin, e.linear)]
        const += e.constant
    return Effect(space, lin, const)


@dataclass(frozen=True, eq=False)
class Measurement:
    """Labelled finite family of effects summing to the unit effect."""

    space: StateSpace
    labels: tuple
    effects: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        effects = tuple(self.effects)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "effects", effects)
        if not effects:
            raise ValueError("a measurement needs at least one outcome")
        if len(labels) != len(effects):
            raise ValueError("labels and effects differ in length")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate outcome labels")
        for e in effects:
            _same_space(self.space, e.space)
        for i in range(len(self.space.vertices)):
            total = sum((e.values[i] for e in effects), ZERO)
            if total != 1:
                raise ValueError(f"effects sum to {total} at vertex {i}, not 1")

    @classmethod
    def from_values(cls, space: StateSpace, labels: Sequence, table: Sequence[Sequence]):
        return cls(space, tuple(labels), tuple(Effect.from_values(space, row) for row in table))

    @classmethod
    def trivial(cls, space: StateSpace, label: Hashable = "1") -> Measurement:
        return cls(space, (label,), (Effect.unit(space),))

    @classmethod
    def coin_toss(cls, space: StateSpace, weights: Sequence, labels: Sequence | None = None):
        weights = as_vector(weights)
        if labels is None:
            labels = tuple(str(i + 1) for i in range(len(weights)))
        return cls(space, tuple(labels), tuple(Effect(space, (0,) * space.dim, w) for w in weights))

    def __len__(self):
        return len(self.effects)

    def __iter__(self) -> Iterator[tuple[Hashable, Effect]]:
        return iter(zip(self.labels, self.effects))

    def __getitem__(self, label) -> Effect:
        return self.effects[self.labels.index(label)]

    @property
    def table(self) -> tuple[Vector, ...]:
        """Value vectors, one per outcome."""
        return tuple(e.values for e in self.effects)

    def relabel(self, labels: Sequence | Mapping) -> Measurement:
        if isinstance(labels, Mapping):
            labels = tuple(labels[x] for x in self.labels)
        return Measurement(self.space, tuple(labels), self.effects)

    def __eq__(self, other):
        if not isinstance(other, Measurement):
            return NotImplemented
        return (
            self.space == other.space
            and self.labels == other.labels
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.labels, self.table))

    def __repr__(self):
        return f"Measurement(labels={self.labels!r}, space={self.space.name!r})"


@dataclass(frozen=True)
class OutcomePartition:
    """Set partition of an outcome set, blocks kept in the given order."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for b in blocks:
            if not b:
                raise ValueError("empty block")
            for x in b:
                if x in seen:
                    raise ValueError(f"label {x!r} appears in two blocks")
                seen.add(x)

    @property
    def labels(self) -> frozenset:
        return frozenset(x for b in self.blocks for x in b)

    def __len__(self):
        return len(self.blocks)

    def same_as(self, other: OutcomePartition) -> bool:
        """Equality as set partitions, ignoring block and member order."""
        return {frozenset(b) for b in self.blocks} == {frozenset(b) for b in other.blocks}


def evaluate(a: Effect, p: Sequence, check: bool = False) -> Fraction:
    """Probability ``a(p)``; with ``check`` the point is certified to be a state."""
    p = as_vector(p)
    if len(p) != a.space.dim:
        raise ValueError(f"point has {len(p)} coordinates, space has dim {a.space.dim}")
    if check and not a.space.contains(p):
        raise ValueError(f"{p} is not a state of {a.space.name!r}")
    return Q.dot(a.linear, p) + a.constant


def effect_leq(a: Effect, b: Effect) -> bool:
    _same_space(a.space, b.space)
    return all(x <= y for x, y in zip(a.values, b.values))


def mix(A: Measurement, B: Measurement, lam) -> Measurement:
    """Outcome-wise convex combination ``lam*A + (1-lam)*B``."""
    lam = as_rational(lam)
    if not 0 <= lam <= 1:
        raise ValueError(f"mixing weight {lam} outside [0, 1]")
    _same_space(A.space, B.space)
    if A.labels != B.labels:
        raise ValueError("measurements have different outcome labels")
    effects = tuple(
        Effect(
            A.space,
            tuple(lam * x + (1 - lam) * y for x, y in zip(a.linear, b.linear)),
            lam * a.constant + (1 - lam) * b.constant,
        )
        for a, b in zip(A.effects, B.effects)
    )
    return Measurement(A.space, A.labels, effects)


def coarse_grain(A: Measurement, P: OutcomePartition) -> Measurement:
    """Merge outcomes along ``P``; each block is labelled by its members in A's order."""
    if P.labels != frozenset(A.labels) or sum(len(b) for b in P.blocks) != len(A):
        raise ValueError("partition does not cover the outcome set exactly")
    pos = {x: i for i, x in enumerate(A.labels)}
    labels, effects = [], []
    for block in P.blocks:
        members = tuple(sorted(block, key=pos.__getitem__))
        labels.append(members)
        effects.append(sum_effects((A.effects[pos[x]] for x in members), A.space))
    return Measurement(A.space, tuple(labels), tuple(effects))


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def partitions_of(labels: Sequence, limit: int = MAX_PARTITION_SIZE) -> Iterator[OutcomePartition]:
    labels = tuple(labels)
    if len(labels) > limit:
        raise GuardError(f"{len(labels)} outcomes exceed the partition guard {limit}")
    for rgs in restricted_growth_strings(len(labels)):
        blocks: list[list] = [[] for _ in range(max(rgs) + 1)]
        for x, b in zip(labels, rgs):
            blocks[b].append(x)
        yield OutcomePartition(tuple(tuple(b) for b in blocks))


def enumerate_partitions(n: int) -> list[OutcomePartition]:
    """All set partitions of {1..n}, in restricted-growth-string order."""
    if n < 1:
        raise ValueError("n must be positive")
    return list(partitions_of(range(1, n + 1)))


def direct_sum_space(S1: StateSpace, S2: StateSpace) -> StateSpace:
    """Join of two systems: states ``lam*s1 (+) (1-lam)*s2``.

    Ambient coordinates are ``(x1, x2, lam)``; a vertex ``v`` of S1 maps to
    ``(v, 0, 1)`` and a vertex ``w`` of S2 to ``(0, w, 0)``.
    """
    z1, z2 = (ZERO,) * S1.dim, (ZERO,) * S2.dim
    verts = [tuple(v) + z2 + (ONE,) for v in S1.vertices]
    verts += [z1 + tuple(w) + (ZERO,) for w in S2.vertices]
    return StateSpace(
        f"{S1.name}+{S2.name}", S1.dim + S2.dim + 1, tuple(verts), summands=(S1, S2), validate=False
    )


def direct_sum_measurement(A: Measurement, B: Measurement, space: StateSpace | None = None):
    """``A (+) B`` on the direct sum of their spaces.

    Labels are kept when the two label sets are disjoint and tagged as
    ``(0, x)`` / ``(1, y)`` otherwise.
    """
    S1, S2 = A.space, B.space
    if space is None:
        space = direct_sum_space(S1, S2)
    if len(space.summands) != 2 or space.summands[0] != S1 or space.summands[1] != S2:
        raise ValueError("target space is not the direct sum of the measurements' spaces")
    z1, z2 = (ZERO,) * S1.dim, (ZERO,) * S2.dim
    effects = [Effect(space, tuple(a.linear) + z2 + (a.constant,), 0) for a in A.effects]
    effects += [Effect(space, z1 + tuple(b.linear) + (-b.constant,), b.constant) for b in B.effects]
    if set(A.labels).isdisjoint(B.labels):
        labels = A.labels + B.labels
    else:
        labels = tuple((0, x) for x in A.labels) + tuple((1, y) for y in B.labels)
    return Measurement(space, labels, tuple(effects))


def _grid(labels: Sequence) -> tuple[tuple, tuple]:
    try:
        xs = tuple(dict.fromkeys(lab[0] for lab in labels))
        ys = tuple(dict.fromkeys(lab[1] for lab in labels))
        ok = all(len(lab) == 2 for lab in labels)
    except (TypeError, IndexError):
        ok = False
    if not ok or set(labels) != set(product(xs, ys)) or len(labels) != len(xs) * len(ys):
        raise ValueError("labels do not form a full product grid X x Y")
    return xs, ys


def marginals(C: Measurement) -> tuple[Measurement, Measurement]:
    """Both marginals of a measurement labelled by pairs ``(x, y)``."""
    xs, ys = _grid(C.labels)
    S = C.space
    A = Measurement(S, xs, tuple(sum_effects((C[(x, y)] for y in ys), S) for x in xs))
    B = Measurement(S, ys, tuple(sum_effects((C[(x, y)] for x in xs), S) for y in ys))
    return A, B


def is_joint(C: Measurement, A: Measurement, B: Measurement) -> bool:
    """Whether ``C`` is a joint measurement of ``A`` and ``B``."""
    try:
        mA, mB = marginals(C)
    except ValueError:
        return False
    return _same_up_to_order(mA, A) and _same_up_to_order(mB, B)


def _same_up_to_order(M: Measurement, N: Measurement) -> bool:
    if M.space != N.space or set(M.labels) != set(N.labels):
        return False
    return all(M[x].values == N[x].values for x in N.labels)
