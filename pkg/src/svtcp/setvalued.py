"""Set-valued tensor complementarity problems.

Find ``v >= 0`` and ``w in Omega(v)`` with ``F = B(w) v^{m-1} + p(w) >= 0`` and
``v . F = 0``.  Here ``Omega`` maps vectors to finite sets of parameters
``w in R^k`` (``k`` is the parameter dimension, kept apart from the tensor
order ``m``), and both ``B`` and ``p`` depend affinely on ``w``.

``Omega`` is piecewise: an ordered list of pieces, each a predicate on ``v``
with a finite parameter set, plus a default set that always applies.  The
predicates are a tolerance ball around a point, a cone around a direction,
the nonnegative orthant, and everything.  With that representation the
parameters hit along a ray and the limit set at infinity are both computable
exactly.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from . import search, tcp
from .classes import ClassVerdict, Status, r0_search
from .tcp import SolverConfig, TcpInstance
from .tensor import DenseTensor, DimensionError, as_vec, contract_to_vector, interval_contract

STRICT_TOL = 1e-9
POINT_TOL = 1e-9

Omega = tuple  # a parameter value, stored as a tuple of floats


class EmptyOmega(ValueError):
    pass


class EmptyLimitSet(ValueError):
    pass


class NonpositiveP(ValueError):
    pass


class PreconditionError(ValueError):
    """A hypothesis of the requested construction does not hold."""

    def __init__(self, hypothesis: str, message: str):
        super().__init__(f"{hypothesis}: {message}")
        self.hypothesis = hypothesis


def _omega(w) -> Omega:
    return tuple(float(x) for x in np.atleast_1d(np.asarray(w, dtype=float)))


def _unique(items: Iterable[Omega]) -> tuple[Omega, ...]:
    seen, out = set(), []
    for w in items:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return tuple(out)


# -- predicates ---------------------------------------------------------------


@dataclass(frozen=True)
class PointMatch:
    point: tuple[float, ...]
    tol: float = POINT_TOL

    kind = "point"

    def matches(self, v: np.ndarray) -> bool:
        return bool(np.linalg.norm(v - np.asarray(self.point)) <= self.tol)


@dataclass(frozen=True)
class ConeMatch:
    direction: tuple[float, ...]
    angular_tol: float

    kind = "cone"

    def angle(self, v: np.ndarray) -> float:
        d = np.asarray(self.direction)
        nv = np.linalg.norm(v)
        if nv == 0:
            return math.inf
        c = float(v @ d) / (nv * np.linalg.norm(d))
        return math.acos(max(-1.0, min(1.0, c)))

    def matches(self, v: np.ndarray) -> bool:
        return self.angle(v) <= self.angular_tol


@dataclass(frozen=True)
class NonnegOrthant:
    kind = "orthant"

    def matches(self, v: np.ndarray) -> bool:
        return bool(v.min() >= 0)


@dataclass(frozen=True)
class All:
    kind = "all"

    def matches(self, v: np.ndarray) -> bool:
        return True


Predicate = Union[PointMatch, ConeMatch, NonnegOrthant, All]


@dataclass(frozen=True)
class Piece:
    predicate: Predicate
    omegas: tuple[Omega, ...]

    def __post_init__(self):
        object.__setattr__(self, "omegas", _unique(_omega(w) for w in self.omegas))


@dataclass(frozen=True)
class OmegaMap:
    omega_dim: int
    pieces: tuple[Piece, ...] = ()
    default: tuple[Omega, ...] = ()
    limit_set: tuple[Omega, ...] | None = None  # None means derive it from the pieces

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "default", _unique(_omega(w) for w in self.default))
        if self.limit_set is not None:
            object.__setattr__(self, "limit_set", _unique(_omega(w) for w in self.limit_set))
        for w in self.all_omegas() + (self.limit_set or ()):
            if len(w) != self.omega_dim:
                raise DimensionError(f"parameter {w} does not have dimension {self.omega_dim}")

    @classmethod
    def constant(cls, omegas: Sequence, omega_dim: int | None = None) -> OmegaMap:
        omegas = [_omega(w) for w in omegas]
        return cls(omega_dim or len(omegas[0]), (), tuple(omegas))

    def __call__(self, v) -> tuple[Omega, ...]:
        v = as_vec(v)
        hits = [w for piece in self.pieces if piece.predicate.matches(v) for w in piece.omegas]
        out = _unique(hits + list(self.default))
        if not out:
            raise EmptyOmega(f"Omega({v.tolist()}) is empty")
        return out

    def all_omegas(self) -> tuple[Omega, ...]:
        """Every parameter the map can return, in piece order then default order."""
        return _unique([w for piece in self.pieces for w in piece.omegas] + list(self.default))

    def auto_limit_set(self) -> tuple[Omega, ...]:
        """Parameters reachable as ``||v|| -> inf``: unbounded pieces plus the default set."""
        unbounded = [w for piece in self.pieces if not isinstance(piece.predicate, PointMatch) for w in piece.omegas]
        return _unique(unbounded + list(self.default))

    def limit_values(self) -> tuple[Omega, ...]:
        return self.limit_set if self.limit_set is not None else self.auto_limit_set()

    def recurrent_set(self, v0) -> tuple[Omega, ...]:
        """Parameters in ``Omega(n v0)`` for infinitely many integers ``n``.

        Cones, the orthant and the everything-predicate are scale invariant, so
        they match all ``n`` or none; a tolerance ball matches finitely many.
        """
        v0 = as_vec(v0)
        if not v0.any():
            raise PreconditionError("nonzero direction", "the ray direction must be nonzero")
        hits = [
            w for piece in self.pieces
            if not isinstance(piece.predicate, PointMatch) and piece.predicate.matches(v0)
            for w in piece.omegas
        ]
        return _unique(hits + list(self.default))


# -- affine families ------------------------------------------------------------


@dataclass(frozen=True)
class TensorFamily:
    """``B(w) = base + sum_j w_j coeffs[j]``."""

    base: DenseTensor
    coeffs: tuple[DenseTensor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        for c in self.coeffs:
            if c.data.shape != self.base.data.shape:
                raise DimensionError("family tensors must share order and dimension")

    @classmethod
    def constant(cls, B: DenseTensor, omega_dim: int = 1) -> TensorFamily:
        return cls(B, tuple(DenseTensor.zeros(B.dim, B.order) for _ in range(omega_dim)))

    def at(self, w) -> DenseTensor:
        w = _omega(w)
        if len(w) != len(self.coeffs):
            raise DimensionError(f"parameter has dimension {len(w)}, family has {len(self.coeffs)}")
        data = self.base.data.copy()
        for wj, c in zip(w, self.coeffs):
            data += wj * c.data
        return DenseTensor(data)


@dataclass(frozen=True)
class VectorFamily:
    """``p(w) = base + coeffs @ w`` with ``coeffs`` of shape ``(n, k)``."""

    base: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        base = as_vec(self.base)
        coeffs = np.array(self.coeffs, dtype=float).reshape(base.shape[0], -1)
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("non-finite coefficients")
        base.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, p, omega_dim: int = 1) -> VectorFamily:
        p = as_vec(p)
        return cls(p, np.zeros((p.shape[0], omega_dim)))

    def at(self, w) -> np.ndarray:
        w = np.asarray(_omega(w))
        if w.shape[0] != self.coeffs.shape[1]:
            raise DimensionError(f"parameter has dimension {w.shape[0]}, family has {self.coeffs.shape[1]}")
        return self.base + self.coeffs @ w


@dataclass(frozen=True)
class SvtcpInstance:
    family: TensorFamily
    rhs: VectorFamily
    omega: OmegaMap

    def __post_init__(self):
        k = self.omega.omega_dim
        if len(self.family.coeffs) != k or self.rhs.coeffs.shape[1] != k:
            raise DimensionError(f"parameter dimension mismatch: map has {k}")
        if self.rhs.base.shape[0] != self.family.base.dim:
            raise DimensionError("p and B dimensions disagree")

    @property
    def dim(self) -> int:
        return self.family.base.dim

    @property
    def order(self) -> int:
        return self.family.base.order

    def tcp_at(self, w) -> TcpInstance:
        return TcpInstance(self.family.at(w), self.rhs.at(w))


# -- evaluation -------------------------------------------------------------------


def omega_of(inst: SvtcpInstance, v) -> tuple[Omega, ...]:
    return inst.omega(as_vec(v, inst.dim))


def svtcp_residual(inst: SvtcpInstance, v) -> tuple[float, Omega]:
    """Merit ``r(v) = min over w in Omega(v) of ||min(v, B(w) v^{m-1} + p(w))||``.

    Ties go to the earliest parameter in map order.
    """
    v = as_vec(v, inst.dim)
    best, arg = math.inf, None
    for w in inst.omega(v):
        r = float(np.linalg.norm(tcp.natural_residual(inst.tcp_at(w), v)))
        if r < best:
            best, arg = r, w
    return best, arg


def is_svtcp_solution(inst: SvtcpInstance, v, tol: float = tcp.DEFAULT_TOL) -> tuple[bool, Omega | None]:
    v = as_vec(v, inst.dim)
    for w in inst.omega(v):
        if tcp.is_solution(inst.tcp_at(w), v, tol):
            return True, w
    return False, None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SVTCP_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    workers = _threads()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class SvtcpSolutions:
    pairs: list[tuple[np.ndarray, Omega]] = field(default_factory=list)
    complete: bool = True
    omegas_tried: int = 0


def solve_svtcp(inst: SvtcpInstance, cfg: SolverConfig = SolverConfig(), budget: int = 64) -> SvtcpSolutions:
    """Solve through ``SOL = union over w of [SOL(B(w), p(w)) intersected with Omega^{-1}(w)]``.

    Each parameter the map can produce gets its own TCP; candidate solutions
    come from the applicable exact oracles, the multi-start solver, and the
    centres of tolerance-ball pieces carrying ``w``.  A candidate is kept only
    if ``w`` is in ``Omega(v)``.  Parameters beyond ``budget`` are skipped and
    the result is flagged incomplete.
    """
    omegas = inst.omega.all_omegas()
    out = SvtcpSolutions(complete=len(omegas) <= budget)
    omegas = omegas[:budget]
    out.omegas_tried = len(omegas)

    def per_omega(w):
        sub = inst.tcp_at(w)
        cands = tcp.candidate_solutions(sub, cfg)
        for piece in inst.omega.pieces:
            if isinstance(piece.predicate, PointMatch) and w in piece.omegas:
                cands.append(np.asarray(piece.predicate.point, dtype=float))
        kept = []
        for v in cands:
            if tcp.is_solution(sub, v, cfg.tol) and w in inst.omega(v):
                kept.append(v)
        return kept

    for w, sols in zip(omegas, _map(per_omega, omegas)):
        for v in sols:
            if not any(w == u and np.max(np.abs(v - x)) <= 1e-7 for x, u in out.pairs):
                out.pairs.append((v, w))
    return out


# -- the C and C' cones ------------------------------------------------------------


def _positive_witness(inst: SvtcpInstance, v: np.ndarray, tol: float) -> Omega | None:
    for w in inst.omega(v):
        if contract_to_vector(inst.family.at(w), v).min() > tol:
            return w
    return None


def membership_C(inst: SvtcpInstance, v, tol: float = STRICT_TOL) -> tuple[bool, Omega | None]:
    """``v > 0`` and ``B(w) v^{m-1} > 0`` for some ``w in Omega(v)``, strict by margin ``tol``."""
    v = as_vec(v, inst.dim)
    if v.min() <= tol:
        return False, None
    w = _positive_witness(inst, v, tol)
    return w is not None, w


def membership_Cprime(inst: SvtcpInstance, v, tol: float = STRICT_TOL) -> tuple[bool, Omega | None]:
    """``v >= 0``, ``v != 0`` and ``B(w) v^{m-1} > 0`` for some ``w in Omega(v)``."""
    v = as_vec(v, inst.dim)
    if v.min() < 0 or not v.any():
        return False, None
    w = _positive_witness(inst, v, tol)
    return w is not None, w


@dataclass(frozen=True)
class Promotion:
    v: np.ndarray
    t: float
    omega: Omega


DEFAULT_T_SCHEDULE = tuple(10.0**-k for k in range(1, 9))


def promote_cprime_to_c(
    inst: SvtcpInstance, vbar, wbar, t_schedule: Sequence[float] = DEFAULT_T_SCHEDULE, tol: float = STRICT_TOL
) -> Promotion | None:
    """Push a point of C' into C along ``vbar + t e``.

    Returns the first ``t`` in the (decreasing) schedule that lands in C, or
    ``None``.  Under an inner semicontinuous map and continuous ``B`` small
    ``t`` always works; without that, the shifted points can lose the
    parameter that made ``vbar`` work.
    """
    vbar = as_vec(vbar, inst.dim)
    wbar = _omega(wbar)
    if vbar.min() < 0 or not vbar.any():
        raise PreconditionError("vbar in C'", "vbar must be nonnegative and nonzero")
    if wbar not in inst.omega(vbar):
        raise PreconditionError("wbar in Omega(vbar)", f"{wbar} is not in Omega({vbar.tolist()})")
    if contract_to_vector(inst.family.at(wbar), vbar).min() <= tol:
        raise PreconditionError("B(wbar) vbar^{m-1} > 0", "the witness does not give a strictly positive contraction")
    ok, w = membership_C(inst, vbar, tol)
    if ok:
        return Promotion(vbar, 0.0, w)
    e = np.ones(inst.dim)
    for t in t_schedule:
        v = vbar + t * e
        ok, w = membership_C(inst, v, tol)
        if ok:
            return Promotion(v, float(t), w)
    return None


# -- feasibility along a ray ---------------------------------------------------------


def recurrent_omega_set(inst: SvtcpInstance, v0) -> tuple[Omega, ...]:
    return inst.omega.recurrent_set(as_vec(v0, inst.dim))


@dataclass(frozen=True)
class RayFeasible:
    scale: int
    point: np.ndarray
    omega: Omega


def feasibility_ray_search(
    inst: SvtcpInstance, v0, w0, n_max: int = 10**6, tol: float = STRICT_TOL
) -> RayFeasible | None:
    """Smallest integer ``n <= n_max`` with ``B(w0)(n v0)^{m-1} + p(w0) > 0`` and ``w0 in Omega(n v0)``.

    ``n v0`` is then a feasible point of the SVTCP.  Returns ``None`` when
    ``n_max`` is reached first.
    """
    v0 = as_vec(v0, inst.dim)
    w0 = _omega(w0)
    if v0.min() < 0:
        raise PreconditionError("v0 >= 0", "the ray direction has a negative component")
    if w0 not in recurrent_omega_set(inst, v0):
        raise PreconditionError("w0 recurrent", f"{w0} is not hit infinitely often along n*v0")
    base = contract_to_vector(inst.family.at(w0), v0)
    if base.min() <= tol:
        raise PreconditionError("B(w0) v0^{m-1} > 0", f"contraction {base.tolist()} is not strictly positive")
    p = inst.rhs.at(w0)
    m = inst.order
    for n in range(1, n_max + 1):
        if (n ** (m - 1) * base + p).min() > tol and w0 in inst.omega(n * v0):
            return RayFeasible(n, n * v0, w0)
    return None


# -- semi-positive tensor sets -----------------------------------------------------------


def _cone_coverage(pred: ConeMatch, vlo: np.ndarray, vhi: np.ndarray) -> str:
    """'all', 'some' or 'none': how much of the box (away from 0) the cone can match."""
    center = (vlo + vhi) / 2
    half = float(np.linalg.norm(vhi - vlo)) / 2
    nearest = max(float(np.linalg.norm(center)) - half, 1e-300)
    spread = math.pi / 2 * half / nearest if half else 0.0
    a = pred.angle(center)
    if a + spread <= pred.angular_tol:
        return "all"
    if a - spread <= pred.angular_tol:
        return "some"
    return "none"


def _cell_omegas(omap: OmegaMap, vlo, vhi, certain: bool) -> tuple[Omega, ...]:
    """Parameters present on every ray through the box (``certain``) or on some ray.

    Tolerance balls are ignored here; their centres are checked as points.
    """
    out = list(omap.default)
    for piece in omap.pieces:
        pred = piece.predicate
        if isinstance(pred, (All, NonnegOrthant)):
            out.extend(piece.omegas)
        elif isinstance(pred, ConeMatch):
            cov = _cone_coverage(pred, vlo, vhi)
            if cov == "all" or (cov == "some" and not certain):
                out.extend(piece.omegas)
    return _unique(out)


def _point_candidates(inst: SvtcpInstance) -> list[np.ndarray]:
    pts = search.orthant_canonical(inst.dim)
    for piece in inst.omega.pieces:
        if isinstance(piece.predicate, PointMatch):
            c = np.asarray(piece.predicate.point, dtype=float)
            if c.min() >= 0 and c.any():
                pts.append(c)
    return pts


def _semipositive_set_check(inst: SvtcpInstance, strong: bool, grid_depth: int, max_cells: int, tol: float):
    tensors = {w: inst.family.at(w) for w in inst.omega.all_omegas()}
    datas = {w: t.data for w, t in tensors.items()}

    def support_values(w, v):
        return contract_to_vector(tensors[w], v)[v > 0]

    def certify(facet, vlo, vhi):
        S = list(facet.support)
        W = _cell_omegas(inst.omega, vlo, vhi, certain=not strong)
        if not W:
            return None
        lows = np.array([interval_contract(datas[w], vlo, vhi)[0][S] for w in W])
        # strong: one k must be good for every w; weak: one (k, w) pair suffices
        margin = float(lows.min(axis=0).max()) if strong else float(lows.max())
        return margin if margin >= 0 else None

    def violation(v):
        if v.min() < 0 or not v.any():
            return None
        omegas = inst.omega(v)
        bad = [w for w in omegas if support_values(w, v).max() < -tol]
        if strong and bad:
            return (v, bad[0])
        if not strong and len(bad) == len(omegas):
            return (v, None)
        return None

    def objective(v):
        vals = [support_values(w, v).max() for w in inst.omega(v)]
        return float(min(vals) if strong else max(vals))

    res = search.branch_and_bound(
        search.orthant_facets(inst.dim), certify, violation, objective,
        canonical=_point_candidates(inst), max_depth=grid_depth, max_cells=max_cells,
    )
    name = "strongly semi-positive set" if strong else "weakly semi-positive set"
    detail = f"{name}: {res.describe()}; tolerance balls checked at their centres"
    if res.status == "refuted":
        v, w = res.certificate
        return ClassVerdict(Status.REFUTED, v, detail, w)
    return ClassVerdict(Status.VERIFIED if res.status == "verified" else Status.UNKNOWN, None, detail)


def check_strongly_semipositive_set(
    inst: SvtcpInstance, grid_depth: int = 10, max_cells: int = 20000, tol: float = 1e-12
) -> ClassVerdict:
    """Every nonzero ``v >= 0`` has ``k`` with ``v_k > 0`` and ``(B(w) v^{m-1})_k >= 0`` for all ``w in Omega(v)``."""
    return _semipositive_set_check(inst, True, grid_depth, max_cells, tol)


def check_weakly_semipositive_set(
    inst: SvtcpInstance, grid_depth: int = 10, max_cells: int = 20000, tol: float = 1e-12
) -> ClassVerdict:
    """As the strong check, but one ``w in Omega(v)`` per ``v`` is enough."""
    return _semipositive_set_check(inst, False, grid_depth, max_cells, tol)


SCALE_LADDER = (1e-2, 1e-1, 1.0, 1e1, 1e2)


def _simplex_points(n: int) -> list[np.ndarray]:
    eye = np.eye(n)
    pts = [np.full(n, 1.0 / n)] + [eye[i] for i in range(n)]
    pts += [(eye[i] + eye[j]) / 2 for i in range(n) for j in range(i + 1, n)]
    return pts


def check_zero_unique_solution(
    inst: SvtcpInstance, grid_depth: int = 10, cfg: SolverConfig = SolverConfig(), max_cells: int = 20000
) -> ClassVerdict:
    """With ``p(w) > 0`` everywhere, decide whether ``v = 0`` is the only solution.

    First looks for a nonzero solution from starts ``t u`` with ``t`` on a fixed
    scale ladder and ``u`` on a coarse simplex grid.  If none turns up, a
    verified strongly semi-positive set proves uniqueness; otherwise the
    answer is Unknown.
    """
    omegas = inst.omega.all_omegas()
    for w in omegas:
        p = inst.rhs.at(w)
        if p.min() <= 0:
            raise NonpositiveP(f"p({w}) = {p.tolist()} is not strictly positive")
    starts = [t * u for t in SCALE_LADDER for u in _simplex_points(inst.dim)]
    cands = _point_candidates(inst)
    for w in omegas:
        sub = inst.tcp_at(w)
        found = list(cands)
        found += tcp.solve_tcp_all(sub, cfg, starts=starts)
        for v in found:
            if np.abs(v).max() > 1e3 * cfg.tol and tcp.is_solution(sub, v, cfg.tol) and w in inst.omega(v):
                return ClassVerdict(Status.REFUTED, v, f"nonzero solution with parameter {w}", w)
    strong = check_strongly_semipositive_set(inst, grid_depth, max_cells)
    ladder = f"scale ladder {SCALE_LADDER[0]:g}..{SCALE_LADDER[-1]:g}"
    if strong.verified:
        return ClassVerdict(Status.VERIFIED, None, f"no nonzero solution on the {ladder}; uniqueness from {strong.detail}")
    return ClassVerdict(Status.UNKNOWN, None, f"no nonzero solution on the {ladder}; strong semi-positivity {strong.status.value}")


# -- limit-R0 and level boundedness ----------------------------------------------------------


def check_limit_r0(inst: SvtcpInstance, grid_depth: int = 10, max_cells: int = 20000, tol: float = 1e-9) -> ClassVerdict:
    """R0 search on ``B(w)`` for every ``w`` in the limit set of ``Omega`` at infinity."""
    limit = inst.omega.limit_values()
    if not limit:
        raise EmptyLimitSet("the map has no parameters at infinity")
    notes, unknown = [], False
    for w in limit:
        res = r0_search(inst.family.at(w), grid_depth, max_cells, tol)
        if res.status == "refuted":
            return ClassVerdict(Status.REFUTED, res.certificate, f"limit-R0 fails at {w}: {res.describe()}", w)
        unknown |= res.status != "verified"
        notes.append(f"{w}: {res.status}")
    detail = "limit set " + ", ".join(notes)
    return ClassVerdict(Status.UNKNOWN if unknown else Status.VERIFIED, None, detail)


def sample_directions(n: int, count: int, seed: int = 0) -> list[np.ndarray]:
    """Seeded unit directions in the nonnegative orthant."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        d = np.abs(rng.standard_normal(n))
        if d.any():
            out.append(d / np.linalg.norm(d))
    return out


def log_grid(t_max: float, per_decade: int = 4, t_min: float = 1.0) -> list[float]:
    k = max(1, int(round(per_decade * math.log10(t_max / t_min))))
    return [float(t) for t in np.logspace(math.log10(t_min), math.log10(t_max), k + 1)]


@dataclass
class DirectionProbe:
    direction: np.ndarray
    r: list[float]
    tail_min: float
    first_exceed: dict[float, float | None]
    bounded: dict[float, bool]


@dataclass
class LevelProbeReport:
    t_grid: list[float]
    alphas: list[float]
    directions: list[DirectionProbe]

    def bounded_directions(self, alpha: float) -> list[int]:
        """Indices of directions where ``r`` is still ``<= alpha`` at the largest ``t``."""
        return [i for i, d in enumerate(self.directions) if d.bounded[alpha]]


def probe_level_boundedness(
    inst: SvtcpInstance, directions: Sequence, t_grid: Sequence[float], alphas: Sequence[float] = (10.0,),
    tail_fraction: float = 0.25,
) -> LevelProbeReport:
    """Evaluate the merit along rays ``t d`` to look for unbounded sublevel sets.

    A direction is flagged bounded at level ``alpha`` when ``r(t_max d) <= alpha``,
    a witness that the ``alpha``-sublevel set reaches out at least to ``t_max``.
    """
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be increasing")
    alphas = [float(a) for a in alphas]
    tail = max(1, int(math.ceil(tail_fraction * len(t_grid))))

    def probe(d):
        d = as_vec(d, inst.dim)
        if not d.any():
            raise ValueError("directions must be nonzero")
        d = d / np.linalg.norm(d)
        r = [svtcp_residual(inst, t * d)[0] for t in t_grid]
        first = {a: next((t for t, x in zip(t_grid, r) if x > a), None) for a in alphas}
        bounded = {a: r[-1] <= a for a in alphas}
        return DirectionProbe(d, r, min(r[-tail:]), first, bounded)

    return LevelProbeReport(t_grid, alphas, _map(probe, directions))
