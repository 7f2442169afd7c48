from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from intersub import catalog
from intersub.generators import random_measurement, random_simplex
from intersub.metrics import (
    DegreeReport,
    cis_degree,
    classical_degree,
    coin_toss_degree,
    intersubjectivity_degree,
    is_elementwise_sharp,
    is_extremal,
    is_sharp_effect,
    perturbation,
    sharpness_degree,
)
from intersub.model import (
    Effect,
    GuardError,
    Measurement,
    OutcomePartition,
    coarse_grain,
    partitions_of,
)

from conftest import HALF
from oracles import degree_oracle, extremal_oracle, sharpness_oracle


def test_trivial_measurement(square):
    T = Measurement.trivial(square.model)
    for f in (intersubjectivity_degree, sharpness_degree, cis_degree):
        r = f(T)
        assert r.value == 1 and r.verify(T)


def test_fair_coin(square):
    A = Measurement.coin_toss(square.model, (HALF, HALF))
    assert intersubjectivity_degree(A).value == 0
    s = sharpness_degree(A)
    assert s.value == HALF
    c, pair = s.witness_effect
    assert c.norm == HALF and set(pair) == {"1", "2"}


def test_example_three(square):
    A = square.measurement
    assert intersubjectivity_degree(A).value == 1
    assert cis_degree(A).value == 1
    assert not is_extremal(A)


def test_example_four(fivedim):
    A = fivedim.measurement
    assert intersubjectivity_degree(A).value == 1
    r = cis_degree(A)
    assert r.value == 0
    assert r.witness_partition.same_as(OutcomePartition((("1", "4"), ("2", "3"))))
    assert is_extremal(A)
    assert all(is_sharp_effect(a) for a in A.effects)


def test_coarse_graining_preserves_sharpness(square, sq_effects):
    S = square.model
    half_b = HALF * sq_effects["b+"]
    A = Measurement(S, ("x", "y"), (half_b, Effect.unit(S) - half_b))
    assert sharpness_degree(A).value == HALF
    assert intersubjectivity_degree(A).value == 0


def test_indicator_sharpness_on_simplex():
    A = catalog.indicator_measurement(catalog.simplex_model(4))
    assert sharpness_degree(A).value == 1


def test_sharp_effects(square, sq_effects):
    assert is_sharp_effect(sq_effects["b+"])
    assert not is_sharp_effect(HALF * Effect.unit(square.model))


def test_extremal_examples(square):
    assert is_extremal(square.measurements["B"])
    D = perturbation(square.measurement)
    assert D is not None and any(any(v for v in row) for row in D)
    A = square.measurement
    for sign in (1, -1):
        rows = [tuple(a + sign * d for a, d in zip(ra, rd)) for ra, rd in zip(A.table, D)]
        Measurement.from_values(A.space, A.labels, rows)


@pytest.mark.parametrize(
    "weights, expected",
    [((1,), 1), ((HALF, HALF), 0), ((Fraction(3, 4), Fraction(1, 8), Fraction(1, 8)), HALF)],
)
def test_coin_toss_formula(square, weights, expected):
    assert coin_toss_degree(weights) == expected
    A = Measurement.coin_toss(square.model, weights)
    assert intersubjectivity_degree(A).value == expected


def test_coin_toss_rejects_bad_distribution():
    with pytest.raises(ValueError):
        coin_toss_degree((HALF, HALF, HALF))


def test_classical_degree_examples():
    S = catalog.simplex_model(3)
    assert classical_degree(S, catalog.indicator_measurement(S)) == 1
    third = Fraction(1, 3)
    assert classical_degree(S, Measurement.coin_toss(S, (third,) * 3)) == 0


def test_classical_degree_needs_a_simplex(square):
    with pytest.raises(ValueError):
        classical_degree(square.model, square.measurement)


def test_outcome_guard(square):
    A = Measurement.coin_toss(square.model, (Fraction(1, 9),) * 9)
    with pytest.raises(GuardError):
        intersubjectivity_degree(A)


def test_tampered_report_fails_verification(square):
    A = square.measurement
    r = intersubjectivity_degree(A)
    bad = DegreeReport(r.kind, Fraction(1, 2), r.witness_state, r.witness_joint)
    assert not bad.verify(A)


# -- oracles -------------------------------------------------------------------------

SMALL = ["square-gbit", "fivedim-es-ext", "classical-3"]
small_models = st.sampled_from(SMALL).map(lambda n: catalog.load_example(n).model)


@given(small_models, st.integers(1, 3), st.integers(0, 10**6), st.booleans())
def test_degree_matches_full_joint_lp(S, n, seed, mixed):
    A = random_measurement(S, n, seed, mixed=mixed)
    assert intersubjectivity_degree(A).value == degree_oracle(A)


@given(small_models, st.integers(1, 4), st.integers(0, 10**6), st.booleans())
def test_sharpness_matches_coefficient_lp(S, n, seed, mixed):
    A = random_measurement(S, n, seed, mixed=mixed)
    assert sharpness_degree(A).value == sharpness_oracle(A)


@given(small_models, st.integers(1, 4), st.integers(0, 10**6), st.booleans())
def test_extremality_matches_rank_test(S, n, seed, mixed):
    A = random_measurement(S, n, seed, mixed=mixed)
    assert is_extremal(A) == extremal_oracle(A)
    if not mixed:
        assert is_extremal(A)


@pytest.mark.parametrize("name", ["square-gbit", "fivedim-es-ext", "direct-sum-es"])
def test_catalog_extremality_matches_rank_test(name):
    for A in catalog.load_example(name).measurements.values():
        assert is_extremal(A) == extremal_oracle(A)


def test_cis_matches_exhaustive_minimum(fivedim):
    A = fivedim.measurement
    values = [degree_oracle(coarse_grain(A, P)) for P in partitions_of(A.labels)]
    assert cis_degree(A).value == min(values)


# -- invariants ----------------------------------------------------------------------

MODELS = ["square-gbit", "fivedim-es-ext", "direct-sum-es", "classical-2", "classical-4"]
models = st.sampled_from(MODELS).map(lambda n: catalog.load_example(n).model)


@given(models, st.integers(1, 4), st.integers(0, 10**6), st.booleans())
def test_sharpness_degree_bounds(S, n, seed, mixed):
    A = random_measurement(S, n, seed, mixed=mixed)
    d, s = intersubjectivity_degree(A).value, sharpness_degree(A).value
    assert d >= 1 - (n * n - n) * (1 - s)
    assert s >= (1 + d) / 2
    assert (d == 1) == (s == 1)
    if n == 2:
        assert s == (1 + d) / 2


@given(models, st.integers(1, 4), st.integers(0, 10**6), st.booleans())
def test_extremal_implies_intersubjective(S, n, seed, mixed):
    A = random_measurement(S, n, seed, mixed=mixed)
    if is_extremal(A):
        assert intersubjectivity_degree(A).value == 1


@given(models, st.integers(1, 4), st.integers(0, 10**6))
def test_cis_never_exceeds_degree(S, n, seed):
    A = random_measurement(S, n, seed, mixed=True)
    c, d = cis_degree(A), intersubjectivity_degree(A)
    assert c.value <= d.value
    assert c.verify(A) and d.verify(A)


@given(st.integers(2, 4), st.integers(1, 4), st.integers(0, 10**6), st.data())
def test_closed_forms_never_decrease_under_coarse_graining(k, n, seed, data):
    S = random_simplex(seed, k)
    A = random_measurement(S, n, seed, mixed=True)
    P = data.draw(st.sampled_from(list(partitions_of(A.labels))))
    assert classical_degree(S, coarse_grain(A, P)) >= classical_degree(S, A)
    w = [a.values[0] for a in A.effects]
    coarse = [sum(w[A.labels.index(x)] for x in block) for block in P.blocks]
    assert coin_toss_degree(coarse) >= coin_toss_degree(w)


def test_elementwise_sharp_catalog(fivedim, direct_sum, square):
    assert is_elementwise_sharp(fivedim.measurement)
    assert is_elementwise_sharp(direct_sum.measurement)
    # two outcomes and degree 1, hence sharp
    assert is_elementwise_sharp(square.measurement)
    assert not is_elementwise_sharp(Measurement.coin_toss(square.model, (HALF, HALF)))
