import pytest
from hypothesis import given, strategies as st

from intersub.optimizer import (
    INFEASIBLE,
    MAXIMIZE,
    MINIMIZE,
    UNBOUNDED,
    InfeasibleError,
    LinearProgram,
    solve,
    solve_many,
    vertex_sample,
)


def test_box_maximum():
    sol = solve(LinearProgram((1,), MAXIMIZE, upper=(1,)))
    assert sol.optimal and sol.value == 1 and sol.point == (1,)


def test_square_pair_problem():
    # lam*b+ + mu*c+ <= 1 on the square vertices; the corner (1,1) binds
    rows = [((-1, -1), -1), ((-1, 0), -1), ((0, -1), -1), ((0, 0), -1)]
    sol = solve(LinearProgram((1, 1), MAXIMIZE, inequalities=rows))
    assert sol.value == 1


def test_infeasible_and_unbounded_are_statuses():
    assert solve(LinearProgram((0,), MINIMIZE, inequalities=[((1,), 1)], upper=(0,))).status == INFEASIBLE
    assert solve(LinearProgram((1,), MAXIMIZE)).status == UNBOUNDED


def test_free_variable():
    lp = LinearProgram((1,), MINIMIZE, inequalities=[((1,), -7)], lower=(None,))
    assert solve(lp).value == -7


def test_malformed_rows_rejected():
    with pytest.raises(ValueError):
        LinearProgram((1, 2), MINIMIZE, equalities=[((1,), 0)])


def test_solve_many_matches_individual_solves():
    eqs = [((1, 1, 1), 1)]
    objs = [(1, 0, 0), (0, 1, 0), (3, -1, 2)]
    lp = LinearProgram((0, 0, 0), MAXIMIZE, eqs)
    many = solve_many(lp, objs)
    for obj, sol in zip(objs, many):
        assert sol.value == solve(LinearProgram(obj, MAXIMIZE, eqs)).value


def test_vertex_sample_deterministic_and_feasible():
    lp = LinearProgram((0, 0), MAXIMIZE, upper=(1, 1))
    a, b = vertex_sample(lp, 5), vertex_sample(lp, 5)
    assert a == b and lp.is_feasible_point(a)
    assert all(c in (0, 1) for c in a)
    for seed in range(10):
        assert lp.is_feasible_point(vertex_sample(lp, seed))


def test_vertex_sample_infeasible():
    with pytest.raises(InfeasibleError):
        vertex_sample(LinearProgram((0,), MINIMIZE, inequalities=[((1,), 2)], upper=(1,)), 0)


small = st.integers(-4, 4)


@given(
    st.integers(1, 3).flatmap(
        lambda m: st.integers(1, 3).flatmap(
            lambda n: st.tuples(
                st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m),
                st.lists(st.integers(0, 5), min_size=m, max_size=m),
                st.lists(small, min_size=n, max_size=n),
            )
        )
    )
)
def test_strong_duality(data):
    # primal: max c.x, A x <= b, 0 <= x <= 3;  dual: min b.y + 3 sum z, A^T y + z >= c, y, z >= 0
    A, b, c = data
    m, n = len(A), len(c)
    primal = LinearProgram(
        tuple(c), MAXIMIZE, inequalities=[(tuple(-v for v in row), -bi) for row, bi in zip(A, b)],
        upper=(3,) * n,
    )
    dual_rows = []
    for j in range(n):
        row = tuple(A[i][j] for i in range(m)) + tuple(int(k == j) for k in range(n))
        dual_rows.append((row, c[j]))
    dual = LinearProgram(tuple(b) + (3,) * n, MINIMIZE, inequalities=dual_rows)
    p, d = solve(primal), solve(dual)
    assert p.optimal and d.optimal  # x = 0 is primal feasible and the box bounds it
    assert p.value == d.value
    assert primal.is_feasible_point(p.point) and primal.value_at(p.point) == p.value
    assert dual.is_feasible_point(d.point)
    assert solve(primal).point == p.point
