"""Named instances used by the demo, the bundled fixtures and the tests."""
from __future__ import annotations

import numpy as np

from .setvalued import All, OmegaMap, Piece, PointMatch, SvtcpInstance, TensorFamily, VectorFamily
from .tensor import DenseTensor, unit_tensor


def example_3_1(p=None) -> SvtcpInstance:
    """Order 3, dimension 2, ``b_111(w) = b_222(w) = w``.

    ``Omega(v) = {0, 1}`` at ``v = (1, 0)`` and ``{0}`` elsewhere.  ``p`` is
    not fixed by the construction; it defaults to the all-ones vector.
    """
    p = np.ones(2) if p is None else np.asarray(p, dtype=float)
    family = TensorFamily(DenseTensor.zeros(2, 3), (unit_tensor(2, 3),))
    omap = OmegaMap(1, (Piece(PointMatch((1.0, 0.0)), ((0.0,), (1.0,))),), ((0.0,),))
    return SvtcpInstance(family, VectorFamily.constant(p), omap)


def all_four_tensor() -> DenseTensor:
    """``b_111 = b_122 = b_211 = b_222 = 1``: both components of ``Bv^2`` equal ``v_1^2 + v_2^2``."""
    data = np.zeros((2, 2, 2))
    for idx in [(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)]:
        data[idx] = 1.0
    return DenseTensor(data)


def cprime_separating() -> SvtcpInstance:
    """Constant map ``{0}`` with ``B(0)`` the all-four tensor: ``(1, 0)`` is in C' but not C."""
    return SvtcpInstance(
        TensorFamily.constant(all_four_tensor()), VectorFamily.constant(np.ones(2)), OmegaMap.constant([(0.0,)])
    )


def example_3_1_positive_variant() -> SvtcpInstance:
    """The map of :func:`example_3_1` with ``B(w) = w`` times the all-four tensor.

    Here ``(1, 0)`` really is in C' (through ``w = 1``), while no point of C
    exists because ``w = 1`` is only offered at ``(1, 0)``.
    """
    family = TensorFamily(DenseTensor.zeros(2, 3), (all_four_tensor(),))
    omap = OmegaMap(1, (Piece(PointMatch((1.0, 0.0)), ((0.0,), (1.0,))),), ((0.0,),))
    return SvtcpInstance(family, VectorFamily.constant(np.ones(2)), omap)


def constant_instance(B: DenseTensor, p, omega=(0.0,)) -> SvtcpInstance:
    return SvtcpInstance(TensorFamily.constant(B, len(omega)), VectorFamily.constant(p, len(omega)),
                         OmegaMap.constant([omega]))


def scalar_not_level_bounded() -> SvtcpInstance:
    """``n = 1, m = 2``, ``B(w) = w``, ``p = 1``, ``Omega = {0}``: ``r(t) = min(t, 1)``."""
    family = TensorFamily(DenseTensor([[0.0]]), (DenseTensor([[1.0]]),))
    return SvtcpInstance(family, VectorFamily.constant([1.0]), OmegaMap.constant([(0.0,)]))


def sign_switch(n: int = 2, m: int = 3, p=None) -> SvtcpInstance:
    """``B(w) = (2w - 1)`` times the unit tensor with ``Omega = {0, 1}`` everywhere."""
    p = np.ones(n) if p is None else p
    U = unit_tensor(n, m)
    family = TensorFamily(-U, (2.0 * U,))
    omap = OmegaMap(1, (Piece(All(), ((0.0,), (1.0,))),), ())
    return SvtcpInstance(family, VectorFamily.constant(p), omap)
