"""Semi-decision checkers for structured tensor classes.

Each checker returns a :class:`ClassVerdict`:

* ``Refuted`` carries a certificate vector that violates the class definition
  and can be re-checked with the matching ``*_violation`` function.
* ``Verified`` means every cell of an interval branch-and-bound cover was
  certified; ``detail`` records the cover size, depth reached and the smallest
  certified margin.
* ``Unknown`` means the search budget ran out without either outcome.

P-tensors are taken in the usual sense: ``max_k v_k (B v^{m-1})_k > 0`` for
every ``v != 0``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import search
from .tcp import SolverConfig, TcpInstance, solve_tcp
from .tensor import DenseTensor, as_vec, contract_to_scalar, contract_to_vector, interval_contract

R0_TOL = 1e-9
SEMI_TOL = 1e-12


class Status(enum.Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ClassVerdict:
    status: Status
    certificate: np.ndarray | None = None
    detail: str = ""
    omega: tuple[float, ...] | None = None

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED


def _verdict(res: search.SearchResult, what: str, extra: str = "") -> ClassVerdict:
    detail = f"{what}: {res.describe()}" + (f"; {extra}" if extra else "")
    if res.status == "refuted":
        return ClassVerdict(Status.REFUTED, res.certificate, detail)
    if res.status == "verified":
        return ClassVerdict(Status.VERIFIED, None, detail)
    return ClassVerdict(Status.UNKNOWN, None, detail)


# -- re-checkable violation predicates ---------------------------------------


def semipositive_margin(B: DenseTensor, v) -> float:
    """``max (B v^{m-1})_k`` over the positive support of ``v``; ``-inf`` if ``v`` has none."""
    v = as_vec(v, B.dim)
    pos = v > 0
    if not pos.any():
        return float("-inf")
    return float(contract_to_vector(B, v)[pos].max())


def semipositive_violation(B: DenseTensor, v, strict: bool, tol: float = SEMI_TOL) -> bool:
    v = as_vec(v, B.dim)
    if v.min() < 0 or not v.any():
        return False
    margin = semipositive_margin(B, v)
    return margin <= 0 if strict else margin < -tol


def r0_violation(B: DenseTensor, v, tol: float = R0_TOL) -> bool:
    """True if ``v / ||v||_1`` is a nonzero solution of TCP(B, 0) within ``tol``."""
    v = as_vec(v, B.dim)
    if v.min() < 0 or not v.any():
        return False
    u = v / v.sum()
    w = contract_to_vector(B, u)
    return bool(w.min() >= -tol and abs(contract_to_scalar(B, u)) <= tol)


def p_margin(B: DenseTensor, v) -> float:
    v = as_vec(v, B.dim)
    return float((v * contract_to_vector(B, v)).max())


def p_violation(B: DenseTensor, v) -> bool:
    v = as_vec(v, B.dim)
    return bool(v.any()) and p_margin(B, v) <= 0


# -- checkers -----------------------------------------------------------------


def check_s_tensor(B: DenseTensor, budget: int = 32, seed: int = 0) -> ClassVerdict:
    """Look for ``v > 0`` with ``B v^{m-1} > 0``.

    Maximizes ``min_i (B v^{m-1})_i`` over the open simplex (softmax
    parametrization) from ``budget`` seeded starts, the barycenter first.
    Absence of such ``v`` has no finite certificate, so this never refutes.
    """
    n = B.dim
    rng = np.random.default_rng(seed)

    def to_simplex(x):
        z = np.exp(x - x.max())
        return z / z.sum()

    def neg_margin(x):
        return -float(contract_to_vector(B, to_simplex(x)).min())

    best, best_v = float("-inf"), None
    for k in range(max(1, budget)):
        x0 = np.zeros(n) if k == 0 else rng.standard_normal(n) * 2.0
        if -neg_margin(x0) > 0:
            x = x0
        else:
            x = minimize(neg_margin, x0, method="Nelder-Mead", options={"maxiter": 200 * n}).x
        v = to_simplex(x)
        margin = float(contract_to_vector(B, v).min())
        if margin > best:
            best, best_v = margin, v
        if margin > 0 and v.min() > 0:
            return ClassVerdict(Status.VERIFIED, v, f"S-tensor: margin={margin:.6g} after {k + 1} starts")
    return ClassVerdict(
        Status.UNKNOWN,
        None,
        f"S-tensor: best margin {best:.6g} < 0 after {max(1, budget)} starts" if best < 0
        else f"S-tensor: best margin {best:.6g} not strictly positive after {max(1, budget)} starts",
    )


def check_semipositive(
    B: DenseTensor, strict: bool = False, grid_depth: int = 10, max_cells: int = 20000
) -> ClassVerdict:
    """Search every support face of the orthant for a violator of (strict) semipositivity.

    A cell with support ``S`` is certified when some ``k`` in ``S`` has an
    interval lower bound on ``(B v^{m-1})_k`` that is ``>= 0`` (``> 0`` if strict).
    """
    if grid_depth < 1:
        raise ValueError("grid_depth must be >= 1")
    data = B.data

    def certify(facet, vlo, vhi):
        lo, _ = interval_contract(data, vlo, vhi)
        margin = float(lo[list(facet.support)].max())
        ok = margin > 0 if strict else margin >= 0
        return margin if ok else None

    def violation(v):
        return v / np.abs(v).max() if semipositive_violation(B, v, strict) else None

    def objective(v):
        return semipositive_margin(B, v)

    res = search.branch_and_bound(
        search.orthant_facets(B.dim), certify, violation, objective,
        canonical=search.orthant_canonical(B.dim), max_depth=grid_depth, max_cells=max_cells,
    )
    return _verdict(res, "strictly semipositive" if strict else "semipositive")


def r0_search(B: DenseTensor, grid_depth: int = 10, max_cells: int = 20000, tol: float = R0_TOL) -> search.SearchResult:
    """Search the orthant faces for a nonzero solution of TCP(B, 0).

    A cell with support ``S`` cannot contain one if some ``k`` in ``S`` has
    ``(B v^{m-1})_k`` bounded away from zero, or some ``k`` outside ``S`` has it
    bounded above by a negative number.
    """
    data = B.data

    def certify(facet, vlo, vhi):
        lo, hi = interval_contract(data, vlo, vhi)
        S = list(facet.support)
        rest = [i for i in range(B.dim) if i not in facet.support]
        margin = float(np.maximum(lo[S], -hi[S]).max())
        if rest:
            margin = max(margin, float((-hi[rest]).max()))
        return margin if margin > 0 else None

    def violation(v):
        return v / v.sum() if r0_violation(B, v, tol) else None

    def objective(v):
        u = v / v.sum()
        return float(np.linalg.norm(np.minimum(u, contract_to_vector(B, u))))

    return search.branch_and_bound(
        search.orthant_facets(B.dim), certify, violation, objective,
        canonical=search.orthant_canonical(B.dim), max_depth=grid_depth, max_cells=max_cells,
    )


def check_r0(B: DenseTensor, grid_depth: int = 10, max_cells: int = 20000, tol: float = R0_TOL) -> ClassVerdict:
    """Decide whether TCP(B, 0) has only the zero solution.

    Solutions form a cone, so only ``||v||_1 = 1`` is searched; certificates
    are reported on that simplex.
    """
    if grid_depth < 1:
        raise ValueError("grid_depth must be >= 1")
    return _verdict(r0_search(B, grid_depth, max_cells, tol), "R0")


def check_p_tensor(B: DenseTensor, grid_depth: int = 10, max_cells: int = 20000) -> ClassVerdict:
    """Search the whole sphere (both signs) for ``v != 0`` with ``max_k v_k (B v^{m-1})_k <= 0``."""
    if grid_depth < 1:
        raise ValueError("grid_depth must be >= 1")
    data = B.data

    def certify(facet, vlo, vhi):
        blo, bhi = interval_contract(data, vlo, vhi)
        prods = np.stack([vlo * blo, vlo * bhi, vhi * blo, vhi * bhi])
        margin = float(prods.min(axis=0).max())
        return margin if margin > 0 else None

    def violation(v):
        return v / np.abs(v).max() if p_violation(B, v) else None

    def objective(v):
        return p_margin(B, v)

    res = search.branch_and_bound(
        search.sphere_facets(B.dim), certify, violation, objective,
        canonical=search.sphere_canonical(B.dim), max_depth=grid_depth, max_cells=max_cells,
    )
    return _verdict(res, "P", "P-tensor taken as: max_k v_k (Bv^{m-1})_k > 0 for all v != 0")


@dataclass
class SolBoundednessReport:
    r0: ClassVerdict
    scales: list[float]
    solutions: list[np.ndarray | None] = field(default_factory=list)

    @property
    def norms(self) -> list[float | None]:
        return [None if v is None else float(np.linalg.norm(v)) for v in self.solutions]

    @property
    def max_norm(self) -> float | None:
        vals = [x for x in self.norms if x is not None]
        return max(vals) if vals else None


def probe_sol_boundedness(inst: TcpInstance, scales=(1.0, 10.0, 100.0), cfg: SolverConfig = SolverConfig()) -> SolBoundednessReport:
    """Solve from the start ``t e`` for each scale ``t`` and record where the solver lands.

    When ``B`` is R0 the solution set is bounded, so the landing points should
    stay in a bounded set however far out the starts are.
    """
    report = SolBoundednessReport(check_r0(inst.B), [float(t) for t in scales])
    e = np.ones(inst.dim)
    for t in report.scales:
        rep = solve_tcp(inst, cfg, starts=[t * e])
        report.solutions.append(rep.v if rep.solved else None)
    return report
