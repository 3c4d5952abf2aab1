"""Brute-force reference computations, independent of the code they check."""
import itertools

import numpy as np
from scipy.optimize import linprog


def naive_contract_vector(T, v):
    n, m = T.shape[0], T.ndim
    out = np.zeros(n)
    for i in range(n):
        for idx in itertools.product(range(n), repeat=m - 1):
            term = T[(i,) + idx]
            for j in idx:
                term *= v[j]
            out[i] += term
    return out


def naive_shao(A, B):
    """Loop over the defining sum ``c[j, a_1..a_{q-1}] = sum a[j, j_2..j_q] prod_t b[j_t, a_{t-1}]``."""
    n, q, k = A.shape[0], A.ndim, B.ndim
    out_order = (q - 1) * (k - 1) + 1
    C = np.zeros((n,) * out_order)
    for j in range(n):
        for alphas in itertools.product(itertools.product(range(n), repeat=k - 1), repeat=q - 1):
            total = 0.0
            for js in itertools.product(range(n), repeat=q - 1):
                term = A[(j,) + js]
                for jt, a in zip(js, alphas):
                    term *= B[(jt,) + a]
                total += term
            C[(j,) + tuple(x for a in alphas for x in a)] = total
    return C


def principal_minors_positive(M):
    n = len(M)
    return all(
        np.linalg.det(M[np.ix_(S, S)]) > 0
        for k in range(1, n + 1)
        for S in map(list, itertools.combinations(range(n), k))
    )


def matrix_semipositive_violator_exists(M):
    """m = 2: some support S admits x_S > 0 with M_SS x_S < 0 (scaled to x >= 1, M x <= -1e-9)."""
    n = len(M)
    for k in range(1, n + 1):
        for S in map(list, itertools.combinations(range(n), k)):
            r = linprog(np.zeros(k), A_ub=M[np.ix_(S, S)], b_ub=-1e-9 * np.ones(k), bounds=[(1, None)] * k)
            if r.status == 0:
                return True
    return False


def matrix_r0_violator_exists(M):
    """m = 2: LP feasibility of x >= 0, sum x = 1, (Mx)_S = 0, (Mx)_rest >= 0, x_rest = 0."""
    n = len(M)
    for k in range(1, n + 1):
        for S in map(list, itertools.combinations(range(n), k)):
            rest = [i for i in range(n) if i not in S]
            A_eq = np.vstack([M[np.ix_(S, S)], np.ones((1, k))])
            b_eq = np.concatenate([np.zeros(k), [1.0]])
            A_ub = -M[np.ix_(rest, S)] if rest else None
            b_ub = np.zeros(len(rest)) if rest else None
            r = linprog(np.zeros(k), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k)
            if r.status == 0:
                return True
    return False


def matrix_is_s(M):
    n = len(M)
    r = linprog(np.zeros(n), A_ub=-M, b_ub=-np.ones(n), bounds=[(1, None)] * n)
    return r.status == 0


def sample_simplex(n, count, rng):
    """Uniform points on the simplex plus all of its faces (random supports)."""
    pts = rng.dirichlet(np.ones(n), size=count)
    mask = rng.random((count, n)) < 0.3
    mask[np.arange(count), rng.integers(0, n, count)] = False
    pts[mask] = 0.0
    return pts / pts.sum(axis=1, keepdims=True)
