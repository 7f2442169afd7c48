import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from intersub import catalog
from intersub import rational as Q
from intersub.cones import (
    decompose_into_rays,
    extreme_effects,
    extreme_rays,
    is_classical,
    is_indecomposable,
    is_simplex,
    nonneg_cone_rays,
)
from intersub.generators import random_model, random_simplex
from intersub.model import Effect, GuardError, StateSpace

GPT = ["square-gbit", "fivedim-es-ext", "direct-sum-es", "classical-2", "classical-3", "classical-4"]


def test_extreme_rays_of_orthant():
    rays = extreme_rays([(1, 0), (0, 1)])
    assert sorted(rays) == [(0, 1), (1, 0)]


def test_square_rays(square, sq_effects):
    rays = nonneg_cone_rays(square.model)
    assert {r.values for r in rays} == {e.values for e in sq_effects.values()}
    assert not is_classical(square.model)


def test_simplex_rays_are_indicators():
    S = catalog.simplex_model(3)
    rays = nonneg_cone_rays(S)
    assert sorted(r.values for r in rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert is_classical(S)


def test_fivedim_rays_include_coordinates(fivedim):
    S = fivedim.model
    vals = {r.values for r in nonneg_cone_rays(S)}
    for i in range(5):
        coord = Effect(S, tuple(int(k == i) for k in range(5)), 0)
        assert tuple(v / coord.norm for v in coord.values) in vals
    assert not is_classical(S)


def test_indecomposable(square, sq_effects):
    assert is_indecomposable(sq_effects["b+"])
    assert not is_indecomposable(Effect.unit(square.model))
    with pytest.raises(ValueError):
        is_indecomposable(Effect.zero(square.model))


def test_decompose_unit_on_square(square):
    S = square.model
    parts = decompose_into_rays(Effect.unit(S))
    total = [sum(c * r.values[v] for c, r in parts) for v in range(4)]
    assert total == [1, 1, 1, 1]
    assert len(parts) <= S.affine_dim + 1
    assert decompose_into_rays(Effect.zero(S)) == []
    ray = nonneg_cone_rays(S).rays[2]
    assert decompose_into_rays(ray) == [(1, ray)]


def test_square_extreme_effects(square, sq_effects):
    S = square.model
    vals = {e.values for e in extreme_effects(S)}
    expected = {e.values for e in sq_effects.values()}
    expected |= {Effect.zero(S).values, Effect.unit(S).values}
    assert vals == expected


def test_simplex_extreme_effects_form_a_cube():
    S = catalog.simplex_model(3)
    vals = {e.values for e in extreme_effects(S)}
    assert len(vals) == 8 and all(set(v) <= {0, 1} for v in vals)


def test_guard():
    verts = tuple(tuple(int(i == k) for k in range(9)) for i in range(9))
    S = StateSpace("big", 9, verts)
    with pytest.raises(GuardError):
        nonneg_cone_rays(S)


def _brute_effect_vertices(S):
    """Vertices of {0 <= B t <= 1} by active-constraint enumeration."""
    B = S.value_basis
    r = len(B[0])
    ineqs = [(row, 0) for row in B] + [(tuple(-x for x in row), -1) for row in B]
    pts = catalog.enumerate_vertices(ineqs, [], r)
    return {tuple(Q.dot(row, t) for row in B) for t in pts}


@pytest.mark.parametrize("name", ["square-gbit", "fivedim-es-ext", "classical-3", "classical-4"])
def test_extreme_effects_match_brute_force(name):
    S = catalog.load_example(name).model
    assert {e.values for e in extreme_effects(S)} == _brute_effect_vertices(S)


@pytest.mark.parametrize("name", GPT)
def test_rays_are_indecomposable_unit_effects(name):
    S = catalog.load_example(name).model
    rays = nonneg_cone_rays(S)
    for r in rays:
        assert r.norm == 1
        assert is_indecomposable(r)
    vals = [r.values for r in rays]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            assert Q.rank([vals[i], vals[j]]) == 2


@pytest.mark.parametrize("name", GPT)
def test_classical_matches_simplex_on_catalog(name):
    S = catalog.load_example(name).model
    assert is_classical(S) == is_simplex(S)


@given(st.integers(1, 5), st.integers(0, 10**6))
def test_random_simplices_are_classical(k, seed):
    S = random_simplex(seed, k)
    assert len(nonneg_cone_rays(S)) == k
    assert is_classical(S) and is_simplex(S)


@given(st.integers(1, 3), st.integers(2, 7), st.integers(0, 10**6))
def test_classical_matches_simplex_on_random_models(dim, n, seed):
    S = random_model(seed, dim, n)
    assert is_classical(S) == is_simplex(S)


def _random_nonneg(S, rng):
    lin = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(S.dim)]
    vals = [Q.dot(lin, v) for v in S.vertices]
    shift = -min(vals) + Fraction(rng.randint(0, 3), 4)
    return [x + shift for x in vals]


@pytest.mark.parametrize("name", GPT)
def test_decompose_round_trip(name):
    S = catalog.load_example(name).model
    basis = nonneg_cone_rays(S)
    rng = random.Random(name)
    for _ in range(100):
        vals = _random_nonneg(S, rng)
        top = max(vals) or 1
        a = Effect.from_values(S, [x / top for x in vals])
        parts = decompose_into_rays(a, basis)
        assert all(c > 0 for c, _ in parts)
        resum = tuple(sum((c * r.values[v] for c, r in parts), Fraction(0)) for v in range(len(vals)))
        assert resum == a.values
