"""Dense multilinear algebra on order-m, dimension-n real tensors.

Tensors are stored as read-only numpy arrays of shape ``(n,) * m``.  Vectors
are plain 1-D float arrays; :func:`as_vec` validates them.
"""
from __future__ import annotations

import string
from typing import Sequence

import numpy as np

MAX_DIM = 8
MAX_ORDER = 5
# shao_product results may exceed MAX_ORDER; this caps their entry count instead.
MAX_ENTRIES = MAX_DIM**MAX_ORDER


class DimensionError(ValueError):
    pass


class BudgetExceeded(ValueError):
    pass


def as_vec(v, dim: int | None = None) -> np.ndarray:
    """Return ``v`` as a finite 1-D float array, optionally checking its length."""
    arr = np.atleast_1d(np.array(v, dtype=float))
    if arr.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite components")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"vector has dimension {arr.shape[0]}, expected {dim}")
    return arr


class DenseTensor:
    """An order-``m``, dimension-``n`` real tensor with immutable dense storage."""

    __slots__ = ("_data",)

    def __init__(self, data, *, _uncapped: bool = False):
        arr = np.array(data, dtype=float)
        if arr.ndim < 2:
            raise DimensionError("tensor order must be at least 2")
        n = arr.shape[0]
        if n < 1 or any(s != n for s in arr.shape):
            raise DimensionError(f"tensor must be cubical, got shape {arr.shape}")
        if not _uncapped and (n > MAX_DIM or arr.ndim > MAX_ORDER):
            raise BudgetExceeded(
                f"order {arr.ndim}, dimension {n} exceeds caps (m <= {MAX_ORDER}, n <= {MAX_DIM})"
            )
        if arr.size > MAX_ENTRIES:
            raise BudgetExceeded(f"{arr.size} entries exceeds budget {MAX_ENTRIES}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor has non-finite entries")
        arr.setflags(write=False)
        self._data = arr

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def data(self) -> np.ndarray:
        return self._data

    def __getitem__(self, idx: Sequence[int]) -> float:
        idx = tuple(idx)
        if len(idx) != self.order or any(not 0 <= i < self.dim for i in idx):
            raise IndexError(f"index {idx} out of range for order {self.order}, dim {self.dim}")
        return float(self._data[idx])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"DenseTensor(order={self.order}, dim={self.dim})"

    def __neg__(self) -> DenseTensor:
        return DenseTensor(-self._data)

    def __add__(self, other: DenseTensor) -> DenseTensor:
        _check_same_shape(self, other)
        return DenseTensor(self._data + other._data)

    def __sub__(self, other: DenseTensor) -> DenseTensor:
        _check_same_shape(self, other)
        return DenseTensor(self._data - other._data)

    def __mul__(self, scalar: float) -> DenseTensor:
        return DenseTensor(float(scalar) * self._data)

    __rmul__ = __mul__

    @classmethod
    def zeros(cls, n: int, m: int) -> DenseTensor:
        return cls(np.zeros((n,) * m))

    def is_diagonal(self) -> bool:
        off = self._data.copy()
        off[(np.arange(self.dim),) * self.order] = 0.0
        return not np.any(off)

    def diagonal(self) -> np.ndarray:
        return self._data[(np.arange(self.dim),) * self.order].copy()

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._data)))


def _check_same_shape(a: DenseTensor, b: DenseTensor) -> None:
    if a.data.shape != b.data.shape:
        raise DimensionError(f"shape mismatch: {a.data.shape} vs {b.data.shape}")


def _check_dim(B: DenseTensor, v: np.ndarray) -> np.ndarray:
    v = as_vec(v)
    if v.shape[0] != B.dim:
        raise DimensionError(f"tensor dimension {B.dim} does not match vector dimension {v.shape[0]}")
    return v


def contract_to_vector(B: DenseTensor, v) -> np.ndarray:
    """Compute ``B v^{m-1}``: contract every index but the first with ``v``."""
    v = _check_dim(B, v)
    x = B.data
    for _ in range(B.order - 1):
        x = x @ v
    return np.asarray(x, dtype=float)


def contract_to_scalar(B: DenseTensor, v) -> float:
    """Compute ``B v^m`` by a single full einsum over all ``m`` indices."""
    v = _check_dim(B, v)
    letters = string.ascii_lowercase[: B.order]
    spec = letters + "," + ",".join(letters) + "->"
    return float(np.einsum(spec, B.data, *([v] * B.order)))


def contract_jacobian(B: DenseTensor, v) -> np.ndarray:
    """Jacobian of ``v -> B v^{m-1}``; no symmetry of ``B`` is assumed."""
    v = _check_dim(B, v)
    n, m = B.dim, B.order
    J = np.zeros((n, n))
    for axis in range(1, m):
        x = np.moveaxis(B.data, axis, 1)
        while x.ndim > 2:
            x = x @ v
        J += x
    return J


def row_subtensor(B: DenseTensor, i: int):
    """Slice with the first index fixed at ``i`` (0-based).

    Returns a :class:`DenseTensor` of order ``m - 1`` when ``m >= 3`` and the
    matrix row (a 1-D array) when ``m == 2``.
    """
    if not 0 <= i < B.dim:
        raise IndexError(f"row index {i} out of range for dimension {B.dim}")
    row = B.data[i]
    if B.order == 2:
        return row.copy()
    return DenseTensor(row)


def make_diagonal(n: int, m: int, diag) -> DenseTensor:
    diag = as_vec(diag, n)
    data = np.zeros((n,) * m)
    data[(np.arange(n),) * m] = diag
    return DenseTensor(data)


def unit_tensor(n: int, m: int) -> DenseTensor:
    return make_diagonal(n, m, np.ones(n))


def shao_product(A: DenseTensor, B, *, max_entries: int = MAX_ENTRIES):
    """General tensor product ``A . B`` of an order-q tensor with an order-k tensor.

    ``c[j, a_1, ..., a_{q-1}] = sum a[j, j_2..j_q] b[j_2, a_1] ... b[j_q, a_{q-1}]``
    where each ``a_t`` is a multi-index of length ``k - 1``.  The result has
    order ``(q-1)(k-1) + 1``.  ``B`` may be a vector (``k == 1``), in which case
    the result is the vector ``A b^{q-1}``.
    """
    b = B.data if isinstance(B, DenseTensor) else as_vec(B)
    n = A.dim
    if b.shape[0] != n:
        raise DimensionError(f"dimension mismatch: {n} vs {b.shape[0]}")
    q, k = A.order, b.ndim
    out_order = (q - 1) * (k - 1) + 1
    if n**out_order > max_entries:
        raise BudgetExceeded(f"product has {n**out_order} entries, budget is {max_entries}")
    letters = iter(string.ascii_letters)
    lead = next(letters)
    inner = [next(letters) for _ in range(q - 1)]
    tails = [[next(letters) for _ in range(k - 1)] for _ in range(q - 1)]
    operands = [lead + "".join(inner)] + [j + "".join(t) for j, t in zip(inner, tails)]
    spec = ",".join(operands) + "->" + lead + "".join("".join(t) for t in tails)
    out = np.einsum(spec, A.data, *([b] * (q - 1)))
    if out_order == 1:
        return np.asarray(out, dtype=float)
    return DenseTensor(out, _uncapped=True)


def interval_contract(data: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Enclosure of ``B v^{m-1}`` over the box ``lo <= v <= hi``.

    Plain interval arithmetic, one index at a time; rounding is not directed.
    """
    alo = ahi = data
    for _ in range(data.ndim - 1):
        c = np.stack([alo * lo, alo * hi, ahi * lo, ahi * hi])
        alo, ahi = c.min(axis=0).sum(axis=-1), c.max(axis=0).sum(axis=-1)
    return np.asarray(alo, dtype=float), np.asarray(ahi, dtype=float)


def batch_contract(data: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``B v^{m-1}`` for each row ``v`` of ``V``; returns shape ``(len(V), n)``."""
    x = np.broadcast_to(data, (V.shape[0],) + data.shape)
    for _ in range(data.ndim - 1):
        x = np.einsum("b...j,bj->b...", x, V)
    return x
