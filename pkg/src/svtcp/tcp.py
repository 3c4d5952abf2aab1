"""Classical tensor complementarity problems TCP(B, p).

Find ``v >= 0`` with ``B v^{m-1} + p >= 0`` and ``v . (B v^{m-1} + p) = 0``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .tensor import DenseTensor, DimensionError, as_vec, contract_jacobian, contract_to_vector

DEFAULT_TOL = 1e-8


class SolveStatus(enum.Enum):
    SOLVED = "Solved"
    NO_SOLUTION_FOUND = "NoSolutionFound"


class SolverKind(enum.Enum):
    DIAGONAL = "Diagonal"
    SUPPORT_ENUM = "SupportEnum"
    MULTI_START = "MultiStart"


class NotDiagonal(ValueError):
    pass


class NonpositiveDiagonal(ValueError):
    pass


class OrderNotTwo(ValueError):
    pass


@dataclass(frozen=True)
class TcpInstance:
    B: DenseTensor
    p: np.ndarray

    def __post_init__(self):
        p = as_vec(self.p)
        if p.shape[0] != self.B.dim:
            raise DimensionError(f"p has dimension {p.shape[0]}, tensor has {self.B.dim}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return self.B.dim

    @property
    def order(self) -> int:
        return self.B.order

    def F(self, v) -> np.ndarray:
        return contract_to_vector(self.B, v) + self.p


@dataclass(frozen=True)
class SolveReport:
    status: SolveStatus
    v: np.ndarray | None
    residual: float
    solver: SolverKind
    iterations: int

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED

    def __eq__(self, other) -> bool:
        if not isinstance(other, SolveReport):
            return NotImplemented
        same_v = (self.v is None and other.v is None) or (
            self.v is not None and other.v is not None and np.array_equal(self.v, other.v)
        )
        return (
            same_v
            and self.status == other.status
            and self.residual == other.residual
            and self.solver == other.solver
            and self.iterations == other.iterations
        )


@dataclass(frozen=True)
class SolverConfig:
    starts: int = 16
    max_iters: int = 200
    tol: float = DEFAULT_TOL
    seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")


def _vec_for(inst: TcpInstance, v) -> np.ndarray:
    return as_vec(v, inst.dim)


def natural_residual(inst: TcpInstance, v) -> np.ndarray:
    """Componentwise ``min(v, B v^{m-1} + p)``."""
    v = _vec_for(inst, v)
    return np.minimum(v, inst.F(v))


def is_feasible(inst: TcpInstance, v, tol: float = DEFAULT_TOL) -> bool:
    v = _vec_for(inst, v)
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return bool(v.min() >= -tol and inst.F(v).min() >= -tol)


def is_solution(inst: TcpInstance, v, tol: float = DEFAULT_TOL) -> bool:
    v = _vec_for(inst, v)
    if not is_feasible(inst, v, tol):
        return False
    w = inst.F(v)
    scale = (1.0 + np.linalg.norm(v)) * (1.0 + np.linalg.norm(w))
    return bool(abs(float(v @ w)) <= tol * scale)


def _report(inst, v, solver, iterations, tol) -> SolveReport:
    res = float(np.linalg.norm(natural_residual(inst, v)))
    if res <= tol:
        return SolveReport(SolveStatus.SOLVED, v, res, solver, iterations)
    return SolveReport(SolveStatus.NO_SOLUTION_FOUND, None, res, solver, iterations)


def solve_diagonal(inst: TcpInstance) -> SolveReport:
    """Closed form for diagonal ``B`` with positive diagonal ``d``: ``v_i = (max(0, -p_i)/d_i)^{1/(m-1)}``."""
    if not inst.B.is_diagonal():
        raise NotDiagonal("tensor has nonzero off-diagonal entries")
    d = inst.B.diagonal()
    if np.any(d <= 0):
        raise NonpositiveDiagonal(f"diagonal has nonpositive entries: {d}")
    v = (np.maximum(0.0, -inst.p) / d) ** (1.0 / (inst.order - 1))
    return _report(inst, v, SolverKind.DIAGONAL, 0, 1e-12 * (1.0 + np.abs(inst.p).max()))


def _supports(n: int):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def lcp_support_solutions(inst: TcpInstance, tol: float = DEFAULT_TOL, first_only: bool = False):
    """All complementary-support solutions of an ``m == 2`` problem.

    Supports are visited by increasing cardinality, then lexicographically.
    Singular support systems are skipped.
    """
    if inst.order != 2:
        raise OrderNotTwo(f"support enumeration needs m == 2, got m == {inst.order}")
    M, p, n = inst.B.data, inst.p, inst.dim
    if n > 12:
        raise ValueError("support enumeration is limited to n <= 12")
    found = []
    count = 0
    for S in _supports(n):
        count += 1
        v = np.zeros(n)
        if S:
            idx = list(S)
            sub = M[np.ix_(idx, idx)]
            try:
                if np.linalg.cond(sub) > 1e12:
                    continue
                v[idx] = np.linalg.solve(sub, -p[idx])
            except np.linalg.LinAlgError:
                continue
        w = M @ v + p
        if v.min() >= -tol and w.min() >= -tol:
            found.append(np.maximum(v, 0.0))
            if first_only:
                break
    return found, count


def solve_lcp_enum(inst: TcpInstance, tol: float = DEFAULT_TOL) -> SolveReport:
    found, count = lcp_support_solutions(inst, tol, first_only=True)
    if not found:
        return SolveReport(SolveStatus.NO_SOLUTION_FOUND, None, float("inf"), SolverKind.SUPPORT_ENUM, count)
    v = found[0]
    res = float(np.linalg.norm(natural_residual(inst, v)))
    return SolveReport(SolveStatus.SOLVED, v, res, SolverKind.SUPPORT_ENUM, count)


def merit(inst: TcpInstance, x) -> float:
    """Squared natural residual at the projection ``max(x, 0)``."""
    r = natural_residual(inst, np.maximum(x, 0.0))
    return float(r @ r)


def default_starts(n: int, count: int, seed: int) -> list[np.ndarray]:
    """Zero, the all-ones vector, then ``|N(0, 1)|`` samples at log-uniform scales in [0.1, 100]."""
    rng = np.random.default_rng(seed)
    starts = [np.zeros(n), np.ones(n)]
    while len(starts) < count:
        scale = 10.0 ** rng.uniform(-1.0, 2.0)
        starts.append(scale * np.abs(rng.standard_normal(n)))
    return starts[:count]


def _newton(inst: TcpInstance, v: np.ndarray, max_iters: int) -> tuple[np.ndarray, int]:
    """Projected semismooth Newton on ``min(v, F(v)) = 0`` with backtracking on the merit."""
    n = inst.dim
    eye = np.eye(n)
    phi = merit(inst, v)
    it = 0
    for it in range(1, max_iters + 1):
        if phi == 0.0:
            break
        w = inst.F(v)
        H = np.minimum(v, w)
        J = contract_jacobian(inst.B, v)
        J = np.where((v <= w)[:, None], eye, J)
        mu = min(1e-2, np.sqrt(phi))
        try:
            d = np.linalg.solve(J.T @ J + mu * eye, -J.T @ H)
        except np.linalg.LinAlgError:
            break
        step, improved = 1.0, False
        while step > 1e-12:
            trial = np.maximum(v + step * d, 0.0)
            tphi = merit(inst, trial)
            if tphi < phi:
                v, phi, improved = trial, tphi, True
                break
            step *= 0.5
        if not improved:
            break
    return v, it


def _polytope(inst: TcpInstance, v: np.ndarray, max_iters: int) -> tuple[np.ndarray, int]:
    res = minimize(
        lambda x: merit(inst, x),
        v,
        method="Nelder-Mead",
        options={"maxiter": max_iters * inst.dim, "xatol": 1e-12, "fatol": 1e-30},
    )
    return np.maximum(res.x, 0.0), int(res.nit)


def local_solve(inst: TcpInstance, start, cfg: SolverConfig) -> tuple[np.ndarray, float, int]:
    """One start: Newton, then polytope descent if Newton stalls, then Newton again."""
    v = np.maximum(_vec_for(inst, start), 0.0)
    v, iters = _newton(inst, v, cfg.max_iters)
    if merit(inst, v) > cfg.tol**2:
        v, k = _polytope(inst, v, cfg.max_iters)
        iters += k
        v, k = _newton(inst, v, cfg.max_iters)
        iters += k
    return v, merit(inst, v), iters


def solve_tcp(inst: TcpInstance, cfg: SolverConfig = SolverConfig(), starts=None) -> SolveReport:
    """Seeded multi-start descent on the squared natural residual.

    Returns the first start (in start order) that reaches ``merit <= tol**2``.
    Never claims that no solution exists.
    """
    if starts is None:
        starts = default_starts(inst.dim, cfg.starts, cfg.seed)
    total = 0
    best_res = float("inf")
    for x0 in starts:
        v, phi, iters = local_solve(inst, x0, cfg)
        total += iters
        best_res = min(best_res, float(np.sqrt(phi)))
        if phi <= cfg.tol**2 and is_solution(inst, v, cfg.tol):
            return SolveReport(SolveStatus.SOLVED, v, float(np.sqrt(phi)), SolverKind.MULTI_START, total)
    return SolveReport(SolveStatus.NO_SOLUTION_FOUND, None, best_res, SolverKind.MULTI_START, total)


def solve_tcp_all(inst: TcpInstance, cfg: SolverConfig = SolverConfig(), starts=None, dedup_tol: float = 1e-7):
    """Every distinct solution reached from the start set, in start order."""
    if starts is None:
        starts = default_starts(inst.dim, cfg.starts, cfg.seed)
    found: list[np.ndarray] = []
    for x0 in starts:
        v, phi, _ = local_solve(inst, x0, cfg)
        if phi <= cfg.tol**2 and is_solution(inst, v, cfg.tol):
            if not any(np.max(np.abs(v - u)) <= dedup_tol for u in found):
                found.append(v)
    return found


def candidate_solutions(inst: TcpInstance, cfg: SolverConfig = SolverConfig(), starts=None) -> list[np.ndarray]:
    """Solutions from the exact oracles that apply, plus multi-start hits."""
    found: list[np.ndarray] = []
    B = inst.B
    if B.is_diagonal() and np.all(B.diagonal() > 0):
        rep = solve_diagonal(inst)
        if rep.solved:
            found.append(rep.v)
    if inst.order == 2 and inst.dim <= 12:
        found.extend(lcp_support_solutions(inst, cfg.tol)[0])
    for v in solve_tcp_all(inst, cfg, starts):
        if not any(np.max(np.abs(v - u)) <= 1e-7 for u in found):
            found.append(v)
    return found

