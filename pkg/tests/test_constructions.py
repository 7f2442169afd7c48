import pytest

from intersub import catalog
from intersub.constructions import (
    Classical,
    Witness,
    cis_outcome_bound,
    many_outcome_witness,
    three_outcome_witness,
)
from intersub.generators import random_measurement, random_simplex
from intersub.metrics import cis_degree, classical_degree, intersubjectivity_degree
from intersub.model import Effect, Measurement, coarse_grain

from conftest import HALF


def test_square_three_outcome(square, sq_effects):
    w = three_outcome_witness(square.model)
    assert isinstance(w, Witness)
    expected = (HALF * sq_effects["b+"], HALF * sq_effects["c+"])
    assert w.measurement.effects[:2] == expected
    assert w.degree.value == 1 and w.cis.value == 0
    B = coarse_grain(w.measurement, w.cis.witness_partition)
    assert len(B) == 2
    # the merged pair is (1 - e, e) with e one of the two halved rays
    halves = {e.values for e in expected}
    small = [a for a in B.effects if a.values in halves]
    assert len(small) == 1 and small[0].complement() in B.effects


def test_square_many_outcome(square, sq_effects):
    w = many_outcome_witness(square.model)
    assert isinstance(w, Witness)
    assert {a.values for a in w.measurement.effects} == {(HALF * e).values for e in sq_effects.values()}
    assert w.degree.value == 1 and w.cis.value < 1
    assert len(w.measurement) > cis_outcome_bound(square.model)


def test_fivedim_constructions(fivedim):
    S = fivedim.model
    w3 = three_outcome_witness(S)
    assert w3.degree.value == 1 and w3.cis.value < 1
    wn = many_outcome_witness(S)
    assert len(wn.measurement) >= 6 and wn.degree.value == 1 and wn.cis.value < 1


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_simplices_are_classical(k):
    S = catalog.simplex_model(k)
    assert isinstance(three_outcome_witness(S), Classical)
    assert isinstance(many_outcome_witness(S), Classical)


def test_outcome_bound(square, fivedim):
    assert cis_outcome_bound(square.model) == 3
    assert cis_outcome_bound(catalog.simplex_model(3)) == 3
    assert cis_outcome_bound(fivedim.model) == 5


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_no_gap_on_simplices(k):
    """On classical systems degree 1 always comes with complete intersubjectivity."""
    S = random_simplex(k, k)
    candidates = []
    for seed in range(100 // 4):
        candidates.append(random_measurement(S, 3, seed, mixed=seed % 2 == 1))
    for i in range(k):
        for j in range(i + 1, k):
            # the three-outcome construction pattern applied to indicator pairs
            ind = catalog.indicator_measurement(S).effects
            rest = Effect.unit(S) - HALF * ind[i] - HALF * ind[j]
            candidates.append(Measurement(S, ("a", "b", "r"), (HALF * ind[i], HALF * ind[j], rest)))
    for A in candidates:
        d = classical_degree(S, A)
        assert d == intersubjectivity_degree(A).value
        if d == 1:
            assert cis_degree(A).value == 1
