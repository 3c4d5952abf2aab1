"""Acceptance criteria 1-9.  Each test prints one ``criterion N: PASS|FAIL`` line."""
import json
import time

import numpy as np
import pytest

from svtcp import instances
from svtcp.classes import (
    check_p_tensor,
    check_r0,
    check_s_tensor,
    check_semipositive,
    p_violation,
    r0_violation,
    semipositive_violation,
)
from svtcp.cli import DISCREPANCY_NOTE, main
from svtcp.setvalued import (
    ConeMatch,
    NonnegOrthant,
    OmegaMap,
    Piece,
    PointMatch,
    SvtcpInstance,
    TensorFamily,
    VectorFamily,
    check_limit_r0,
    check_strongly_semipositive_set,
    check_weakly_semipositive_set,
    check_zero_unique_solution,
    is_svtcp_solution,
    log_grid,
    membership_Cprime,
    omega_of,
    probe_level_boundedness,
    recurrent_omega_set,
    sample_directions,
    solve_svtcp,
    svtcp_residual,
)
from svtcp.tcp import SolverConfig, TcpInstance, is_solution, natural_residual, solve_diagonal, solve_lcp_enum, solve_tcp
from svtcp.tensor import DenseTensor, contract_to_scalar, contract_to_vector, make_diagonal, shao_product, unit_tensor


@pytest.fixture
def criterion(capsys):
    lines = []

    def record(num, ok, detail):
        lines.append(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    yield record
    with capsys.disabled():
        for line in lines:
            print("\n" + line)


def test_1_diagonal_oracle(criterion):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst_dv, worst_res, failures = 0.0, 0.0, 0
    for k in range(100):
        n, m = int(rng.integers(1, 5)), int(rng.choice([3, 4]))
        inst = TcpInstance(make_diagonal(n, m, rng.uniform(0.5, 3.0, n)), rng.uniform(-5, 5, n))
        exact = solve_diagonal(inst)
        rep = solve_tcp(inst, SolverConfig(seed=k))
        if not rep.solved:
            failures += 1
            continue
        worst_dv = max(worst_dv, float(np.abs(rep.v - exact.v).max()))
        worst_res = max(worst_res, float(np.linalg.norm(natural_residual(inst, rep.v))))
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and worst_dv <= 1e-6 and worst_res <= 1e-8 and elapsed <= 10
    assert criterion(1, ok, f"unsolved={failures} max|dv|={worst_dv:.2e} max res={worst_res:.2e} {elapsed:.1f}s")


def test_2_lcp_oracle(criterion):
    rng = np.random.default_rng(4048)
    t0 = time.perf_counter()
    solvable = misses = 0
    for k in range(50):
        n = int(rng.integers(1, 5))
        inst = TcpInstance(DenseTensor(rng.standard_normal((n, n))), rng.uniform(-5, 5, n))
        ref = solve_lcp_enum(inst)
        if not ref.solved:
            continue
        solvable += 1
        assert is_solution(inst, ref.v)
        rep = solve_tcp(inst, SolverConfig(seed=k))
        if not (rep.solved and rep.residual <= 1e-8 and is_solution(inst, rep.v)):
            misses += 1
    elapsed = time.perf_counter() - t0
    ok = misses == 0 and elapsed <= 10
    assert criterion(2, ok, f"{solvable} solvable, {misses} missed, {elapsed:.1f}s")


def test_3_canonical_class_table(criterion):
    bad = []
    for n in range(1, 5):
        for m in range(2, 6):
            U, Z = unit_tensor(n, m), DenseTensor.zeros(n, m)
            if not check_s_tensor(U).verified:
                bad.append(f"S unit {n},{m}")
            if not check_semipositive(U, strict=True).verified:
                bad.append(f"strict unit {n},{m}")
            if not check_r0(U).verified:
                bad.append(f"R0 unit {n},{m}")
            p = check_p_tensor(U)
            if m % 2 == 0 and not p.verified:
                bad.append(f"P unit {n},{m}")
            if m % 2 == 1 and not (p.refuted and p.certificate.max() < 0 and p_violation(U, p.certificate)):
                bad.append(f"P refute unit {n},{m}")
            r0 = check_r0(Z)
            if not (r0.refuted and r0_violation(Z, r0.certificate)):
                bad.append(f"R0 zero {n},{m}")
            s = check_semipositive(Z, strict=True)
            if not (s.refuted and semipositive_violation(Z, s.certificate, strict=True)):
                bad.append(f"strict zero {n},{m}")
            if not check_semipositive(Z).verified:
                bad.append(f"semi zero {n},{m}")
            neg = check_semipositive(-U)
            if not (neg.refuted and semipositive_violation(-U, neg.certificate, strict=False)):
                bad.append(f"semi -unit {n},{m}")
    assert criterion(3, not bad, "n=1..4, m=2..5" + (f"; failed: {bad}" if bad else ""))


def test_4_example_demo(criterion, capsys):
    ex = instances.example_3_1()
    lim = check_limit_r0(ex)
    checks = {
        "Omega(1,0)": omega_of(ex, [1, 0]) == ((0.0,), (1.0,)),
        "Omega(2,0)": omega_of(ex, [2, 0]) == ((0.0,),),
        "recurrent": recurrent_omega_set(ex, [1, 0]) == ((0.0,),),
        "auto limit": ex.omega.auto_limit_set() == ((0.0,),),
        "limit-R0": lim.refuted and lim.omega == (0.0,) and r0_violation(ex.family.at((0.0,)), lim.certificate),
        "C'": membership_Cprime(ex, [1, 0])[0] is False,
    }
    code = main(["demo", "example-3-1", "--json"])
    out = json.loads(capsys.readouterr().out)["result"]
    checks["demo exit"] = code == 0
    checks["demo note"] = out["discrepancy_note"] == DISCREPANCY_NOTE and out["C_prime((1,0))"] is False
    failed = [k for k, v in checks.items() if not v]
    assert criterion(4, not failed, "all demo facts hold" if not failed else f"failed: {failed}")


def test_5_semipositive_set_theorems(criterion):
    sw = instances.sign_switch()
    weak, strong = check_weakly_semipositive_set(sw), check_strongly_semipositive_set(sw)
    diag = instances.constant_instance(unit_tensor(2, 3), [1.0, 1.0])
    diag_strong = check_strongly_semipositive_set(diag)
    diag_zero = check_zero_unique_solution(diag)
    scalar = instances.constant_instance(DenseTensor([[-1.0]]), [1.0])
    scalar_zero = check_zero_unique_solution(scalar)
    checks = {
        "weak Verified": weak.verified,
        "strong Refuted": strong.refuted,
        "strong => zero-unique": diag_strong.verified and diag_zero.verified,
        "scalar Refuted v=1": scalar_zero.refuted and abs(scalar_zero.certificate[0] - 1) <= 1e-8
        and is_svtcp_solution(scalar, scalar_zero.certificate)[0],
    }
    failed = [k for k, v in checks.items() if not v]
    assert criterion(5, not failed, "; ".join(f"{k}={v}" for k, v in checks.items()))


def test_6_level_boundedness_dichotomy(criterion):
    t0 = time.perf_counter()
    diag = instances.constant_instance(unit_tensor(2, 3), [1.0, 1.0])
    lim = check_limit_r0(diag)
    rep = probe_level_boundedness(diag, sample_directions(2, 50, seed=0), log_grid(1e3), alphas=(10.0,))
    exceeded = sum(1 for d in rep.directions if d.first_exceed[10.0] is not None and d.first_exceed[10.0] <= 1e3)
    scalar = instances.scalar_not_level_bounded()
    srep = probe_level_boundedness(scalar, [[1.0]], log_grid(1e6), alphas=(2.0,))
    elapsed = time.perf_counter() - t0
    ok = lim.verified and exceeded == 50 and srep.bounded_directions(2.0) == [0] and elapsed <= 30
    assert criterion(6, ok, f"limit-R0 {lim.status.value}, {exceeded}/50 exceed alpha=10, "
                            f"scalar bounded={srep.bounded_directions(2.0)}, {elapsed:.1f}s")


def _random_svtcp(rng):
    n, m = int(rng.integers(1, 4)), int(rng.integers(2, 4))
    family = TensorFamily(DenseTensor(rng.standard_normal((n,) * m)), (DenseTensor(rng.standard_normal((n,) * m)),))
    rhs = VectorFamily(rng.uniform(-3, 3, n), rng.uniform(-1, 1, (n, 1)))
    pieces = (
        Piece(ConeMatch(tuple(np.abs(rng.standard_normal(n)) + 0.1), 0.5), ((1.0,),)),
        Piece(NonnegOrthant(), ((0.5,),)),
        Piece(PointMatch(tuple(np.ones(n))), ((2.0,),)),
    )
    return SvtcpInstance(family, rhs, OmegaMap(1, pieces, ((0.0,),)))


def test_7_residual_iff_solution(criterion):
    rng = np.random.default_rng(77)
    tol = 1e-8
    pairs = solver_pairs = 0
    counter = []
    for k in range(1000):
        inst = _random_svtcp(rng)
        kind = k % 4
        if kind == 0:
            v = rng.standard_normal(inst.dim)
        elif kind == 1:
            v = np.abs(rng.standard_normal(inst.dim)) * (rng.random(inst.dim) < 0.7)
        elif kind == 2:
            v = np.zeros(inst.dim)
        else:
            v = np.ones(inst.dim)
        pairs += 1
        if (svtcp_residual(inst, v)[0] <= tol) != is_svtcp_solution(inst, v, tol)[0]:
            counter.append(("random", k))
        if k % 10 == 0:
            for sol, _ in solve_svtcp(inst, SolverConfig(starts=6)).pairs:
                solver_pairs += 1
                if not (svtcp_residual(inst, sol)[0] <= tol and is_svtcp_solution(inst, sol, tol)[0]):
                    counter.append(("solver", k))
    assert criterion(7, not counter, f"{pairs} random pairs + {solver_pairs} solver outputs, "
                                     f"{len(counter)} counterexamples")


def test_8_algebraic_invariants(criterion):
    rng = np.random.default_rng(88)
    t0 = time.perf_counter()
    fails = []
    for k in range(1000):
        n, m = int(rng.integers(1, 5)), int(rng.integers(2, 5))
        B = DenseTensor(rng.standard_normal((n,) * m))
        v, t = rng.standard_normal(n), float(rng.uniform(0, 5))
        lhs, rhs = contract_to_vector(B, t * v), t ** (m - 1) * contract_to_vector(B, v)
        if not np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * (1 + np.abs(rhs).max())):
            fails.append(("homogeneity", k))
        s = contract_to_scalar(B, v)
        if abs(s - v @ contract_to_vector(B, v)) > 1e-10 * (1 + abs(s)):
            fails.append(("consistency", k))
        Bint = DenseTensor(rng.integers(-9, 10, (n,) * m).astype(float))
        if shao_product(Bint, DenseTensor(np.eye(n))) != Bint:
            fails.append(("identity", k))
        A, C = rng.standard_normal((n, n)), rng.standard_normal((n, n))
        if not np.allclose(shao_product(DenseTensor(A), DenseTensor(C)).data, A @ C, rtol=1e-12, atol=1e-12):
            fails.append(("matrix product", k))
    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed <= 10
    assert criterion(8, ok, f"1000 tensors, {len(fails)} failures, {elapsed:.1f}s")


RUNS = [
    ["check", "fixture:unit_tensor", "--class", "p"],
    ["check", "fixture:example_3_1", "--class", "limit-r0"],
    ["check", "fixture:sign_switch", "--class", "strong-sp"],
    ["check", "fixture:unit_tensor", "--class", "s", "--seed", "5"],
    ["solve", "fixture:lcp_2x2", "--seed", "3"],
    ["solve", "fixture:example_3_1"],
    ["eval", "fixture:example_3_1", "--v", "1,0"],
    ["probe", "fixture:diag_unit_svtcp", "--seed", "1"],
    ["probe", "fixture:unit_tcp", "--kind", "sol"],
    ["demo", "example-3-1"],
]


def test_9_determinism(criterion, capsys):
    differing = []
    for argv in RUNS:
        outs = []
        for _ in range(2):
            code = main(argv + ["--json"])
            outs.append((code, capsys.readouterr().out.encode()))
        if outs[0] != outs[1]:
            differing.append(" ".join(argv))
    assert criterion(9, not differing, f"{len(RUNS)} CLI runs repeated" + (f"; differ: {differing}" if differing else ""))
