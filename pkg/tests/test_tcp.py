import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_tensor
from svtcp.tcp import (
    NonpositiveDiagonal,
    NotDiagonal,
    OrderNotTwo,
    SolverConfig,
    SolverKind,
    TcpInstance,
    candidate_solutions,
    default_starts,
    is_feasible,
    is_solution,
    lcp_support_solutions,
    natural_residual,
    solve_diagonal,
    solve_lcp_enum,
    solve_tcp,
)
from svtcp.tensor import DenseTensor, DimensionError, make_diagonal, unit_tensor


def test_unit_tensor_closed_form():
    inst = TcpInstance(unit_tensor(2, 3), [-4.0, 1.0])
    rep = solve_diagonal(inst)
    assert rep.solved and rep.solver is SolverKind.DIAGONAL
    np.testing.assert_allclose(rep.v, [2.0, 0.0], atol=1e-12)
    assert is_solution(inst, rep.v)


def test_diagonal_rejections():
    with pytest.raises(NotDiagonal):
        solve_diagonal(TcpInstance(DenseTensor(np.ones((2, 2, 2))), [1, 1]))
    with pytest.raises(NonpositiveDiagonal):
        solve_diagonal(TcpInstance(make_diagonal(2, 3, [1, 0]), [1, 1]))


def test_lcp_hand_solved():
    # support {1, 2}: 2a + b = 5, a + 2b = 6
    inst = TcpInstance(DenseTensor([[2.0, 1.0], [1.0, 2.0]]), [-5.0, -6.0])
    rep = solve_lcp_enum(inst)
    np.testing.assert_allclose(rep.v, [4 / 3, 7 / 3], atol=1e-12)
    assert rep.solver is SolverKind.SUPPORT_ENUM
    with pytest.raises(OrderNotTwo):
        solve_lcp_enum(TcpInstance(unit_tensor(2, 3), [1, 1]))


def test_lcp_enumeration_order_picks_zero_first():
    inst = TcpInstance(DenseTensor([[-1.0, 0.0], [0.0, -1.0]]), [1.0, 1.0])
    found, _ = lcp_support_solutions(inst)
    np.testing.assert_array_equal(found[0], [0, 0])
    # supports {1}, {2}, {1,2} give (1,0), (0,1), (1,1)
    assert len(found) == 4


def test_singular_support_skipped():
    inst = TcpInstance(DenseTensor([[0.0, 0.0], [0.0, 1.0]]), [-1.0, -1.0])
    found, count = lcp_support_solutions(inst)
    assert count == 4 and found == []


def test_residual_and_predicates():
    inst = TcpInstance(unit_tensor(2, 3), [-4.0, 1.0])
    np.testing.assert_array_equal(natural_residual(inst, [2.0, 0.0]), [0, 0])
    np.testing.assert_array_equal(natural_residual(inst, [1.0, 0.0]), [-3, 0])
    assert not is_feasible(inst, [1.0, 0.0])
    assert is_feasible(inst, [3.0, 0.0]) and not is_solution(inst, [3.0, 0.0])
    with pytest.raises(ValueError):
        is_feasible(inst, [1.0, 0.0], tol=-1)
    with pytest.raises(DimensionError):
        natural_residual(inst, [1.0])
    with pytest.raises(ValueError):
        natural_residual(inst, [np.inf, 0.0])


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(starts=0)
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)
    with pytest.raises(ValueError):
        SolverConfig(tol=-1.0)


def test_default_starts_are_seeded():
    a, b = default_starts(3, 6, 7), default_starts(3, 6, 7)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    np.testing.assert_array_equal(a[0], 0)
    np.testing.assert_array_equal(a[1], 1)
    assert all(x.min() >= 0 for x in a)


def test_solve_tcp_is_deterministic(rng):
    inst = TcpInstance(random_tensor(rng, 3, 3), rng.uniform(-5, 5, 3))
    assert solve_tcp(inst, SolverConfig(seed=3)) == solve_tcp(inst, SolverConfig(seed=3))


def test_no_solution_reported_honestly():
    # scalar -v + (-1) with v >= 0 has no solution
    inst = TcpInstance(DenseTensor([[-1.0]]), [-1.0])
    rep = solve_tcp(inst, SolverConfig(starts=4))
    assert not rep.solved and rep.v is None


def test_candidate_solutions_all_verify(rng):
    inst = TcpInstance(DenseTensor([[-1.0, 0.0], [0.0, -1.0]]), [1.0, 1.0])
    cands = candidate_solutions(inst)
    assert len(cands) == 4
    assert all(is_solution(inst, v) for v in cands)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.sampled_from([3, 4]), st.integers(0, 2**31))
def test_multistart_matches_diagonal_oracle(n, m, seed):
    rng = np.random.default_rng(seed)
    inst = TcpInstance(make_diagonal(n, m, rng.uniform(0.5, 3, n)), rng.uniform(-5, 5, n))
    exact = solve_diagonal(inst)
    rep = solve_tcp(inst, SolverConfig(seed=seed % 1000))
    assert rep.solved and rep.residual <= 1e-8
    assert np.abs(rep.v - exact.v).max() <= 1e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_multistart_agrees_with_lcp_on_solvability(n, seed):
    rng = np.random.default_rng(seed)
    inst = TcpInstance(DenseTensor(rng.standard_normal((n, n))), rng.uniform(-5, 5, n))
    if solve_lcp_enum(inst).solved:
        rep = solve_tcp(inst, SolverConfig(seed=seed % 1000))
        assert rep.solved and is_solution(inst, rep.v)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(2, 4), st.integers(0, 2**31))
def test_solver_output_is_a_solution(n, m, seed):
    rng = np.random.default_rng(seed)
    inst = TcpInstance(random_tensor(rng, n, m), rng.uniform(-5, 5, n))
    rep = solve_tcp(inst, SolverConfig(starts=6))
    if rep.solved:
        assert is_solution(inst, rep.v)
        assert np.linalg.norm(natural_residual(inst, rep.v)) <= 1e-8


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(2, 4), st.integers(0, 2**31))
def test_zero_residual_means_solution(n, m, seed):
    rng = np.random.default_rng(seed)
    vt = np.abs(rng.standard_normal(n)) * (rng.random(n) < 0.6)
    B = random_tensor(rng, n, m)
    # choose p so vt is an exact solution: F = 0 on the support, positive off it
    Bv = B.data
    for _ in range(m - 1):
        Bv = Bv @ vt
    p = np.where(vt > 0, -Bv, np.abs(rng.standard_normal(n)) - Bv)
    inst = TcpInstance(B, p)
    res = natural_residual(inst, vt)
    if np.linalg.norm(res) == 0:
        assert is_solution(inst, vt, 1e-12)


def test_homogeneous_solution_cone():
    B = DenseTensor(np.array([[[1.0, 0.0], [0.0, 1.0]], [[-1.0, 0.0], [0.0, 0.0]]]))
    inst = TcpInstance(B, [0.0, 0.0])
    v = np.array([0.0, 1.0])
    assert is_solution(inst, v, 1e-8)
    for t in (0.0, 0.5, 2.0, 10.0):
        assert is_solution(inst, t * v, 1e-8 * max(t, 1.0) ** B.order)
