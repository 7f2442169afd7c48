"""Finite-dimensional quantum checks and the Bloch-polygon bridge to the GPT side.

Quantum objects are complex matrices in double precision. Every predicate
here reduces to a rank decision with a fixed threshold, and the
``*_margin`` helpers report how far the deciding quantities sit from those
thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .model import Effect, GuardError, Measurement, StateSpace
from .rational import as_rational

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
SUM_TOL = 1e-9
RANK_TOL = 1e-8
IDEMPOTENT_TOL = 1e-8

MAX_DIM_INTERSUBJECTIVE = 16
MAX_DIM_EXTREMAL = 8
MAX_OUTCOMES_EXTREMAL = 8
MAX_POLYGON = 128


class QuantumInputError(ValueError):
    pass


def hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and return ``m`` as a complex Hermitian matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise QuantumInputError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > tol:
        raise QuantumInputError("matrix is not Hermitian")
    return a


@dataclass(frozen=True, eq=False)
class Povm:
    labels: tuple
    elements: tuple

    def __post_init__(self):
        elems = tuple(hermitian(e) for e in self.elements)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "labels", tuple(self.labels))
        if not elems:
            raise QuantumInputError("a POVM needs at least one element")
        if len(self.labels) != len(elems) or len(set(self.labels)) != len(elems):
            raise QuantumInputError("labels must be distinct, one per element")
        d = elems[0].shape[0]
        if any(e.shape != (d, d) for e in elems):
            raise QuantumInputError("elements have different sizes")
        for x, e in zip(self.labels, elems):
            if np.linalg.eigvalsh(e).min() < -PSD_TOL:
                raise QuantumInputError(f"element {x!r} is not positive semidefinite")
        if np.max(np.abs(sum(elems) - np.eye(d))) > SUM_TOL:
            raise QuantumInputError("elements do not sum to the identity")

    @classmethod
    def from_elements(cls, elements: Sequence) -> Povm:
        return cls(tuple(str(i + 1) for i in range(len(elements))), tuple(elements))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def conjugated(self, U) -> Povm:
        U = np.asarray(U, dtype=complex)
        return Povm(self.labels, tuple(U @ e @ U.conj().T for e in self.elements))


def ket(*amps) -> np.ndarray:
    return np.asarray(amps, dtype=complex)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def support_basis(a, tol: float = PSD_TOL) -> np.ndarray:
    """Orthonormal columns spanning the support (range) of a PSD operator.

    Eigenvalues count as nonzero above ``tol * max(1, largest eigenvalue)``.
    """
    a = hermitian(a)
    w, V = np.linalg.eigh(a)
    if w.size and w.min() < -PSD_TOL:
        raise QuantumInputError("operator is not positive semidefinite")
    cut = tol * max(1.0, float(w.max(initial=0.0)))
    return V[:, w > cut]


def _spectrum_split(s: np.ndarray, cut: float) -> tuple[int, float, float]:
    """Count of values above ``cut``, smallest such value minus ``cut``, largest value at or below."""
    kept, dropped = s[s > cut], s[s <= cut]
    gap = float(kept.min() - cut) if kept.size else math.inf
    noise = float(np.abs(dropped).max()) if dropped.size else 0.0
    return int(kept.size), gap, noise


def _rank(m: np.ndarray, tol: float = RANK_TOL) -> tuple[int, float, float]:
    """Rank by singular values above ``tol``, with the gap and noise on either side."""
    if m.size == 0:
        return 0, math.inf, 0.0
    return _spectrum_split(np.linalg.svd(m, compute_uv=False), tol)


def support_overlaps(A: Povm, tol: float = RANK_TOL) -> list[tuple[tuple, int]]:
    """Pairs of outcomes with nonzero support intersection and its dimension."""
    bases = [support_basis(e) for e in A.elements]
    out = []
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            r = bases[i].shape[1] + bases[j].shape[1] - _rank(np.hstack([bases[i], bases[j]]), tol)[0]
            if r > 0:
                out.append(((A.labels[i], A.labels[j]), r))
    return out


@dataclass(frozen=True)
class SupportCheck:
    intersubjective: bool
    overlapping: tuple

    def __bool__(self):
        return self.intersubjective


def is_intersubjective_povm(A: Povm, tol: float = RANK_TOL) -> SupportCheck:
    """Pairwise trivial support intersections; ``overlapping`` lists offending pairs."""
    if A.dim > MAX_DIM_INTERSUBJECTIVE:
        raise GuardError(f"dimension {A.dim} exceeds {MAX_DIM_INTERSUBJECTIVE}")
    bad = tuple(pair for pair, _ in support_overlaps(A, tol))
    return SupportCheck(not bad, bad)


def idempotence_error(A: Povm) -> float:
    return max(float(np.max(np.abs(e @ e - e))) for e in A.elements)


def is_pvm(A: Povm, tol: float = IDEMPOTENT_TOL) -> bool:
    return idempotence_error(A) <= tol


def _hermitian_basis(r: int) -> list[np.ndarray]:
    basis = []
    for k in range(r):
        m = np.zeros((r, r), dtype=complex)
        m[k, k] = 1
        basis.append(m)
    for k in range(r):
        for l in range(k + 1, r):
            m = np.zeros((r, r), dtype=complex)
            m[k, l] = m[l, k] = 1
            basis.append(m)
            m = np.zeros((r, r), dtype=complex)
            m[k, l], m[l, k] = 1j, -1j
            basis.append(m)
    return basis


def _perturbation_matrix(A: Povm) -> np.ndarray:
    """Columns: realified ``B_x H B_x^dagger`` for Hermitian H on each support."""
    cols = []
    for e in A.elements:
        B = support_basis(e)
        for H in _hermitian_basis(B.shape[1]):
            m = B @ H @ B.conj().T
            cols.append(np.concatenate([m.real.ravel(), m.imag.ravel()]))
    if not cols:
        return np.zeros((2 * A.dim**2, 0))
    return np.column_stack(cols)


def is_extremal_povm(A: Povm, tol: float = RANK_TOL) -> bool:
    """Extremal iff no nonzero Hermitian family supported in the elements sums to 0."""
    if A.dim > MAX_DIM_EXTREMAL or len(A) > MAX_OUTCOMES_EXTREMAL:
        raise GuardError("POVM too large for the extremality check")
    M = _perturbation_matrix(A)
    return _rank(M, tol)[0] == M.shape[1]


def decision_margins(A: Povm) -> dict[str, float]:
    """How clearly each threshold decision for ``A`` is made.

    ``*_gap`` is the smallest value counted as nonzero minus its threshold
    and ``*_noise`` the largest value counted as zero, for the eigenvalue
    cut defining supports, the pairwise support ranks and the extremality
    rank. ``pvm_error`` is the idempotence error compared with its own
    threshold.
    """
    eig_gap, eig_noise = math.inf, 0.0
    for e in A.elements:
        w = np.linalg.eigvalsh(e)
        _, g, z = _spectrum_split(w, PSD_TOL * max(1.0, float(w.max(initial=0.0))))
        eig_gap, eig_noise = min(eig_gap, g), max(eig_noise, z)
    bases = [support_basis(e) for e in A.elements]
    sup_gap, sup_noise = math.inf, 0.0
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            _, g, z = _rank(np.hstack([bases[i], bases[j]]))
            sup_gap, sup_noise = min(sup_gap, g), max(sup_noise, z)
    _, ext_gap, ext_noise = _rank(_perturbation_matrix(A))
    return {
        "eigen_gap": eig_gap,
        "eigen_noise": eig_noise,
        "support_gap": sup_gap,
        "support_noise": sup_noise,
        "extremal_gap": ext_gap,
        "extremal_noise": ext_noise,
        "pvm_error": idempotence_error(A),
    }


PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def unbiased_qubit_povm(lam: Sequence[float]) -> Povm:
    lam = [float(x) for x in lam]
    L = sum(l * s for l, s in zip(lam, PAULI))
    I = np.eye(2, dtype=complex)
    return Povm(("+", "-"), ((I + L) / 2, (I - L) / 2))


def unbiased_qubit_degree(lam: Sequence):
    """Degree of ``(1/2 (I + lam.sigma), 1/2 (I - lam.sigma))``: ``|lam|^2``.

    Exact (a Fraction) when every component is an exact rational.
    """
    if len(lam) != 3:
        raise ValueError("expected a 3-vector")
    try:
        exact = [as_rational(x) for x in lam]
    except TypeError:
        exact = None
    if exact is not None:
        sq = sum(x * x for x in exact)
    else:
        sq = float(sum(float(x) ** 2 for x in lam))
    if sq > 1:
        raise ValueError(f"|lambda|^2 = {sq} exceeds 1")
    return sq


def _circle_point(theta: float, max_den: int) -> tuple[Fraction, Fraction]:
    """Rational point exactly on the unit circle near angle ``theta``."""
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-12:
        return Fraction(-1), Fraction(0)
    t = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def bloch_polygon_model(n: int) -> tuple[StateSpace, Callable[[Sequence], Measurement]]:
    """Regular n-gon inscribed in the Bloch disc, with rational vertices on the circle.

    Returns the state space and ``embed``, which maps an in-plane Bloch
    vector ``(l1, l2)`` to the two-outcome measurement
    ``(1/2 (1 + l.x), 1/2 (1 - l.x))``.
    """
    if not 3 <= n <= MAX_POLYGON:
        raise GuardError(f"polygon size must lie in [3, {MAX_POLYGON}]")
    verts = tuple(_circle_point(2 * math.pi * k / n, 10**6) for k in range(n))
    S = StateSpace(f"bloch-polygon-{n}", 2, verts)

    def embed(lam: Sequence) -> Measurement:
        l1, l2 = (as_rational(x) for x in lam)
        if l1 * l1 + l2 * l2 > 1:
            raise ValueError("Bloch vector outside the unit disc")
        half = Fraction(1, 2)
        plus = Effect(S, (half * l1, half * l2), half)
        minus = Effect(S, (-half * l1, -half * l2), half)
        return Measurement(S, ("+", "-"), (plus, minus))

    return S, embed
