import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwocp.coefficients import (InfeasibleError, LPProblem, UnboundedError,
                                solve_lp)
from lwocp.coefficients.lp import MAX_VARIABLES


def vertex_enumeration(c, A, b, tol=1e-9):
    """Best basic feasible solution by trying every column basis; None if infeasible."""
    m, n = A.shape
    rank = np.linalg.matrix_rank(A)
    rows = list(range(m))
    if rank < m:  # keep an independent row subset
        rows = []
        for r in range(m):
            if np.linalg.matrix_rank(A[rows + [r]]) > len(rows):
                rows.append(r)
        if np.linalg.matrix_rank(np.column_stack([A, b])) > rank:
            return None
    A, b = A[rows], b[rows]
    if not rows:
        return 0.0 if (c >= 0).all() else None
    best = None
    for cols in itertools.combinations(range(n), len(rows)):
        B = A[:, cols]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        if (xb < -tol).any():
            continue
        x = np.zeros(n)
        x[list(cols)] = xb
        if np.abs(A @ x - b).max() > 1e-7:
            continue
        v = c @ x
        best = v if best is None else min(best, v)
    return best


class TestSmall:
    def test_single_equality(self):
        value, x = solve_lp(LPProblem([1.0], [[1.0]], [1.0]))
        assert value == 1.0 and x[0] == 1.0

    def test_flat_objective(self):
        value, x = solve_lp(LPProblem([1.0, 1.0], [[1.0, 1.0]], [1.0]))
        assert value == pytest.approx(1.0)
        assert sorted(x) == pytest.approx([0.0, 1.0])  # a vertex

    def test_negative_rhs(self):
        value, x = solve_lp(LPProblem([2.0, 1.0], [[-1.0, -1.0]], [-3.0]))
        assert value == pytest.approx(3.0)

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            solve_lp(LPProblem([1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]], [1.0, 2.0]))

    def test_infeasible_sign(self):
        with pytest.raises(InfeasibleError):
            solve_lp(LPProblem([1.0], [[1.0]], [-1.0]))

    def test_unbounded(self):
        with pytest.raises(UnboundedError):
            solve_lp(LPProblem([-1.0, 0.0], [[1.0, -1.0]], [0.0]))

    def test_redundant_rows(self):
        A = [[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 1.0, 1.0]]
        value, _ = solve_lp(LPProblem([1.0, 2.0, 3.0], A, [1.0, 2.0, 1.0]))
        assert value == pytest.approx(vertex_enumeration(
            np.array([1.0, 2.0, 3.0]), np.array(A), np.array([1.0, 2.0, 1.0])))

    def test_dimension_check(self):
        with pytest.raises(ValueError, match="inconsistent"):
            LPProblem([1.0, 2.0], [[1.0]], [1.0])

    def test_size_guard(self):
        with pytest.raises(ValueError, match="limit"):
            solve_lp(LPProblem(np.zeros(MAX_VARIABLES + 1), np.ones((1, MAX_VARIABLES + 1)), [1.0]))

    def test_bad_rule(self):
        with pytest.raises(ValueError):
            solve_lp(LPProblem([1.0], [[1.0]], [1.0]), rule="steepest")

    def test_lower_bound_stop_is_still_optimal(self):
        value, _ = solve_lp(LPProblem([1.0, 0.0], [[1.0, 1.0]], [1.0]), lower_bound=0.0)
        assert value == 0.0


class TestTransportation:
    supply = np.array([20.0, 30.0, 25.0])
    demand = np.array([10.0, 35.0, 30.0])
    cost = np.array([[8.0, 6.0, 10.0], [9.0, 12.0, 13.0], [14.0, 9.0, 16.0]])

    def problem(self):
        A = np.zeros((6, 9))
        for i in range(3):
            A[i, 3 * i: 3 * i + 3] = 1.0
            A[3 + i, i::3] = 1.0
        return self.cost.ravel(), A, np.concatenate([self.supply, self.demand])

    def test_matches_vertex_enumeration(self):
        c, A, b = self.problem()
        oracle = vertex_enumeration(c, A, b)
        value, x = solve_lp(LPProblem(c, A, b))
        assert value == pytest.approx(oracle, abs=1e-9)
        assert oracle == 735.0  # frozen; HiGHS agrees
        np.testing.assert_allclose(A @ x, b, atol=1e-9)
        assert (x >= -1e-12).all()

    @pytest.mark.parametrize("rule", ["bland", "hybrid"])
    def test_rules_agree(self, rule):
        c, A, b = self.problem()
        assert solve_lp(LPProblem(c, A, b), rule=rule)[0] == pytest.approx(735.0)


@st.composite
def random_lp(draw):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    r = np.random.default_rng(seed)
    n = draw(st.integers(2, 8))
    m = draw(st.integers(1, min(6, n)))
    A = r.integers(-3, 4, size=(m, n)).astype(float)
    x0 = r.integers(0, 3, size=n).astype(float) * (r.random(n) < 0.6)
    feasible = draw(st.booleans())
    b = A @ x0 if feasible else r.integers(-5, 6, size=m).astype(float)
    c = r.integers(0, 6, size=n).astype(float)  # c >= 0 keeps the LP bounded
    return c, A, b


class TestRandomSuite:
    @settings(max_examples=100, deadline=None)
    @given(random_lp())
    def test_matches_vertex_enumeration(self, lp):
        c, A, b = lp
        oracle = vertex_enumeration(c, A, b)
        if oracle is None:
            with pytest.raises(InfeasibleError):
                solve_lp(LPProblem(c, A, b))
            return
        for rule in ("hybrid", "bland"):
            value, x = solve_lp(LPProblem(c, A, b), rule=rule)
            assert value == pytest.approx(oracle, abs=1e-7)
            np.testing.assert_allclose(A @ x, b, atol=1e-7)
            assert (x >= -1e-9).all()
