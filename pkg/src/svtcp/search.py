"""Interval branch-and-bound over normalized facets of the nonnegative orthant or the sphere.

Every homogeneous condition on ``v != 0`` only needs checking on ``||v||_inf = 1``.
That set is covered by facets ``v_j = +-1`` with the other free coordinates in a
box.  For orthant problems the facets are further split by exact support ``S``:
coordinates outside ``S`` are zero and those inside are positive.

A problem supplies three callbacks:

``certify(facet, vlo, vhi)``
    margin ``>= 0`` if the box provably contains no violator, else ``None``.
``violation(v)``
    a certificate object if ``v`` itself violates, else ``None``.
``objective(v)``
    real score, lower means closer to a violation; drives cell priority and
    local polishing.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class Facet:
    pivot: int
    sign: float
    free: tuple[int, ...]
    support: tuple[int, ...] | None
    low: float
    n: int

    def point(self, x: np.ndarray) -> np.ndarray:
        v = np.zeros(self.n)
        v[self.pivot] = self.sign
        if self.free:
            v[list(self.free)] = x
        return v

    def box(self, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.point(lo), self.point(hi)


def orthant_facets(n: int) -> list[Facet]:
    """Facets by support (increasing size, then lexicographic), then pivot."""
    out = []
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            for j in S:
                out.append(Facet(j, 1.0, tuple(i for i in S if i != j), S, 0.0, n))
    return out


def sphere_facets(n: int) -> list[Facet]:
    out = []
    for j in range(n):
        for sign in (1.0, -1.0):
            out.append(Facet(j, sign, tuple(i for i in range(n) if i != j), None, -1.0, n))
    return out


def orthant_canonical(n: int) -> list[np.ndarray]:
    return [np.ones(n)] + [np.eye(n)[i] for i in range(n)]


def sphere_canonical(n: int) -> list[np.ndarray]:
    pos = orthant_canonical(n)
    return pos + [-v for v in pos]


@dataclass
class SearchResult:
    status: str  # "verified" | "refuted" | "unknown"
    certificate: Any = None
    cells: int = 0
    certified_cells: int = 0
    open_cells: int = 0
    min_margin: float = float("inf")
    max_depth: int = 0
    budget_exhausted: bool = False
    notes: list[str] = field(default_factory=list)

    def describe(self) -> str:
        parts = [f"cells={self.cells}", f"certified={self.certified_cells}", f"max_depth={self.max_depth}"]
        if self.certified_cells:
            parts.append(f"min_margin={self.min_margin:.6g}")
        if self.open_cells:
            parts.append(f"open={self.open_cells}")
        if self.budget_exhausted:
            parts.append("budget exhausted")
        return ", ".join(parts + self.notes)


def _polish(facet: Facet, x0: np.ndarray, objective: Callable, max_iters: int) -> np.ndarray:
    lo, hi = facet.low, 1.0

    def f(x):
        return objective(facet.point(np.clip(x, lo, hi)))

    res = minimize(f, x0, method="Nelder-Mead", options={"maxiter": max_iters, "xatol": 1e-13, "fatol": 1e-16})
    return facet.point(np.clip(res.x, lo, hi))


def branch_and_bound(
    facets: Iterable[Facet],
    certify: Callable[[Facet, np.ndarray, np.ndarray], float | None],
    violation: Callable[[np.ndarray], Any],
    objective: Callable[[np.ndarray], float],
    canonical: Iterable[np.ndarray] = (),
    max_depth: int = 12,
    max_cells: int = 20000,
    max_polish: int = 16,
    polish_iters: int = 400,
) -> SearchResult:
    """Refute, verify, or give up on a condition over all normalized facets.

    ``max_depth`` bounds the number of halvings per free coordinate.  Cells are
    explored most-suspicious first; if any survive the depth or cell budget, the
    worst few are polished locally before returning ``unknown``.
    """
    result = SearchResult("unknown")
    for v in canonical:
        cert = violation(np.asarray(v, dtype=float))
        if cert is not None:
            result.status, result.certificate = "refuted", cert
            result.notes.append("canonical point")
            return result

    counter = itertools.count()
    heap: list = []
    for facet in facets:
        d = len(facet.free)
        lo, hi = np.full(d, facet.low), np.ones(d)
        c = facet.point((lo + hi) / 2)
        heapq.heappush(heap, (objective(c), next(counter), facet, lo, hi, 0))

    leaves = []
    while heap:
        if result.cells >= max_cells:
            result.budget_exhausted = True
            break
        score, _, facet, lo, hi, depth = heapq.heappop(heap)
        result.cells += 1
        result.max_depth = max(result.max_depth, depth)
        margin = certify(facet, *facet.box(lo, hi))
        if margin is not None:
            result.certified_cells += 1
            result.min_margin = min(result.min_margin, margin)
            continue
        x = (lo + hi) / 2
        cert = violation(facet.point(x))
        if cert is not None:
            result.status, result.certificate = "refuted", cert
            return result
        widths = hi - lo
        if len(widths) == 0 or widths.max() <= (1.0 - facet.low) * 2.0**-max_depth:
            leaves.append((score, facet, lo, hi))
            continue
        axis = int(np.argmax(widths))
        mid = x[axis]
        for a, b in ((lo[axis], mid), (mid, hi[axis])):
            clo, chi = lo.copy(), hi.copy()
            clo[axis], chi[axis] = a, b
            c = facet.point((clo + chi) / 2)
            heapq.heappush(heap, (objective(c), next(counter), facet, clo, chi, depth + 1))

    pending = sorted(leaves + [(h[0], h[2], h[3], h[4]) for h in heap], key=lambda t: t[0])
    result.open_cells = len(pending)
    if not pending:
        result.status = "verified"
        return result
    for _, facet, lo, hi in pending[:max_polish]:
        if not facet.free:
            continue
        v = _polish(facet, (lo + hi) / 2, objective, polish_iters)
        cert = violation(v)
        if cert is not None:
            result.status, result.certificate = "refuted", cert
            result.notes.append("found by local polish")
            return result
    return result
