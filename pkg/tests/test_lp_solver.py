import itertools
from fractions import Fraction

import numpy as np
import pytest

from chainmap.core.errors import InvalidInputError
from chainmap.core.models import ConstraintSense, LPStatus
from chainmap.services.algebra import QQ, Matrix
from chainmap.services.lp_solver import LinearProgram, solve_lp

LE, EQ, GE = ConstraintSense.LE, ConstraintSense.EQ, ConstraintSense.GE


def make_lp(objective, rows, senses, rhs, bounds=None):
    return LinearProgram(
        objective=tuple(objective),
        constraints=Matrix.from_dense(rows, QQ, cols=len(objective)),
        senses=tuple(senses),
        rhs=tuple(rhs),
        bounds=tuple(bounds or [(0, None)] * len(objective)),
    )


def brute_force_minimum(c, a, b):
    """min c·x su {a x <= b, x >= 0} enumerando le intersezioni di n vincoli attivi"""
    c, a, b = np.asarray(c, float), np.asarray(a, float), np.asarray(b, float)
    n = len(c)
    rows = np.vstack([a, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    best = None
    for active in itertools.combinations(range(len(rows)), n):
        sub = rows[list(active)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, rhs[list(active)])
        if np.all(rows @ x <= rhs + 1e-9):
            value = float(c @ x)
            best = value if best is None else min(best, value)
    return best


def test_textbook_program_exact():
    lp = make_lp([-1, -1], [[1, 2], [3, 1]], [LE, LE], [4, 6])
    result = solve_lp(lp, exact=True)
    assert result.status == LPStatus.OPTIMAL
    assert result.value == Fraction(-14, 5)
    assert result.x == [Fraction(8, 5), Fraction(6, 5)]
    assert result.is_vertex
    assert result.backend == "simplex"


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_textbook_program_float(backend):
    lp = make_lp([-1, -1], [[1, 2], [3, 1]], [LE, LE], [4, 6])
    result = solve_lp(lp, backend=backend)
    assert result.status == LPStatus.OPTIMAL
    assert result.value == pytest.approx(-2.8)
    assert result.x == pytest.approx([1.6, 1.2])


@pytest.mark.parametrize("backend,exact", [("simplex", True), ("simplex", False), ("highs", False)])
def test_infeasible(backend, exact):
    lp = make_lp([1, 1], [[1, 1], [1, 1]], [LE, GE], [1, 2])
    result = solve_lp(lp, exact=exact, backend=backend)
    assert result.status == LPStatus.INFEASIBLE
    assert result.x is None


@pytest.mark.parametrize("backend,exact", [("simplex", True), ("simplex", False), ("highs", False)])
def test_unbounded(backend, exact):
    lp = make_lp([-1, 0], [[1, -1]], [LE], [1])
    result = solve_lp(lp, exact=exact, backend=backend)
    assert result.status == LPStatus.UNBOUNDED


def test_equality_and_free_variables():
    # min |x − 3| tramite x − p + q = 3 con x libero
    lp = make_lp(
        [0, 1, 1],
        [[1, -1, 1]],
        [EQ],
        [3],
        bounds=[(None, None), (0, None), (0, None)],
    )
    result = solve_lp(lp, exact=True)
    assert result.value == 0
    assert result.x[0] == 3


def test_upper_bounds():
    lp = make_lp([-1, -2], [[1, 1]], [LE], [10], bounds=[(0, 4), (1, 3)])
    result = solve_lp(lp, exact=True)
    assert result.x == [4, 3]
    assert result.value == -10


def test_with_constraint_and_objective():
    lp = make_lp([-1, -1], [[1, 2], [3, 1]], [LE, LE], [4, 6])
    tighter = lp.with_constraint({0: 1}, LE, 1).with_objective([-1, 0])
    result = solve_lp(tighter, exact=True)
    assert result.value == -1
    assert tighter.n_constraints == 3


@pytest.mark.parametrize("seed", range(12))
def test_random_programs_match_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(2, 4)), int(rng.integers(2, 5))
    a = rng.integers(1, 6, size=(m, n))
    b = rng.integers(3, 15, size=m)
    c = rng.integers(-5, 3, size=n)
    lp = make_lp(c.tolist(), a.tolist(), [LE] * m, b.tolist())
    expected = brute_force_minimum(c, a, b)

    exact = solve_lp(lp, exact=True)
    floating = solve_lp(lp, backend="simplex")
    highs = solve_lp(lp, backend="highs")
    assert float(exact.value) == pytest.approx(expected)
    assert floating.value == pytest.approx(expected)
    assert highs.value == pytest.approx(expected)


def test_exact_needs_simplex():
    lp = make_lp([1], [[1]], [LE], [1])
    with pytest.raises(InvalidInputError):
        solve_lp(lp, exact=True, backend="highs")
    with pytest.raises(InvalidInputError):
        solve_lp(lp, backend="interior-point")


def test_invalid_programs_rejected():
    with pytest.raises(InvalidInputError):
        make_lp([1, 1], [[1]], [LE], [1])
    with pytest.raises(InvalidInputError):
        make_lp([1], [[1]], [LE], [1], bounds=[(2, 1)])
