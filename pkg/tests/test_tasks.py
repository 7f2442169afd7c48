from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from intersub import catalog
from intersub.generators import random_ensemble
from intersub.metrics import cis_degree, intersubjectivity_degree
from intersub.model import Measurement
from intersub.tasks import (
    Ensemble,
    NotFound,
    discriminate,
    is_tomographically_complete,
    perfectly_distinguishing_states,
    sharp_two_outcome_set,
)

from conftest import HALF

GPT = ["square-gbit", "fivedim-es-ext", "direct-sum-es", "classical-2", "classical-3", "classical-4"]


def test_ensemble_validation(square):
    S = square.model
    with pytest.raises(ValueError):
        Ensemble(S, ((2, 0),), (1,))
    with pytest.raises(ValueError):
        Ensemble(S, ((0, 0), (1, 1)), (HALF, HALF / 2))
    E = Ensemble(S, ((0, 0),), (1,))
    assert sum(E.weights[0]) == 1


def test_discriminate_opposite_corners(square):
    d = discriminate(Ensemble(square.model, ((1, 1), (-1, -1)), (HALF, HALF)))
    assert d.success == 1
    assert d.measurement.effects[0]((1, 1)) == 1


def test_discriminate_adjacent_corners(square, sq_effects):
    d = discriminate(Ensemble(square.model, ((1, 1), (1, -1)), (HALF, HALF)))
    assert d.success == 1
    assert sq_effects["c+"]((1, 1)) == 1 and sq_effects["c-"]((1, -1)) == 1


def test_discriminate_simplex_vertices():
    S = catalog.simplex_model(3)
    third = Fraction(1, 3)
    d = discriminate(Ensemble(S, S.vertices, (third,) * 3))
    assert d.success == 1


def test_discriminate_identical_states_guesses_prior(square):
    d = discriminate(Ensemble(square.model, ((0, 0), (0, 0)), (Fraction(1, 3), Fraction(2, 3))))
    assert d.success == Fraction(2, 3)


def test_distinguishing_states(square):
    assert perfectly_distinguishing_states(square.measurements["B"]) == [(1, 1), (-1, 1)]
    assert perfectly_distinguishing_states(square.measurement) == [(1, 1), (-1, -1)]
    res = perfectly_distinguishing_states(Measurement.coin_toss(square.model, (HALF, HALF)))
    assert isinstance(res, NotFound) and res.outcome == "1" and not res


def test_tomographic_completeness(square):
    S = square.model
    B, C = square.measurements["B"], square.measurements["C"]
    assert is_tomographically_complete(S, [B, C])
    assert not is_tomographically_complete(S, [B])
    assert not is_tomographically_complete(S, [Measurement.trivial(S)])
    point = catalog.simplex_model(1)
    assert is_tomographically_complete(point, [Measurement.trivial(point)])


def test_square_sharp_set(square):
    S = square.model
    tables = {frozenset(M.table) for M in sharp_two_outcome_set(S)}
    assert frozenset(square.measurements["B"].table) in tables
    assert frozenset(square.measurements["C"].table) in tables


@pytest.mark.parametrize("name", GPT)
def test_sharp_sets_are_complete(name):
    S = catalog.load_example(name).model
    assert is_tomographically_complete(S, sharp_two_outcome_set(S))


models = st.sampled_from(GPT).map(lambda n: catalog.load_example(n).model)


@given(models, st.integers(1, 4), st.integers(0, 10**6))
def test_discrimination_bounds(S, size, seed):
    E = random_ensemble(S, size, seed)
    d = discriminate(E)
    assert max(E.probs) <= d.success <= 1
    assert intersubjectivity_degree(d.measurement).value == 1
    achieved = sum(p * a(s) for p, a, s in zip(E.probs, d.measurement.effects, E.points))
    assert achieved == d.success


@pytest.mark.parametrize("name", ["square-gbit", "fivedim-es-ext", "direct-sum-es", "classical-3"])
def test_cis_measurements_distinguish_perfectly(name):
    for A in catalog.load_example(name).measurements.values():
        if cis_degree(A).value != 1 or any(a.is_zero() for a in A.effects):
            continue
        states = perfectly_distinguishing_states(A)
        assert states
        for (x, a), s in zip(A, states):
            assert a(s) == 1
            assert all(b(s) == 0 for y, b in A if y != x)
