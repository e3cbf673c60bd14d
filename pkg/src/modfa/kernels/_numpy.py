"""Pure-numpy gate-application kernels (reference semantics, fallback backend).

State vectors are 1-D complex arrays of length 2^m indexed so that bit q of
the flat index is wire q (wire 0 is the least significant bit). Both
functions return freshly allocated contiguous arrays.
"""
from __future__ import annotations

import numpy as np


def _num_bits(size: int) -> int:
    n = size.bit_length() - 1
    if size <= 0 or (1 << n) != size:
        raise ValueError(f"vector length {size} is not a power of two")
    return n


def apply_1q(state: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    """Apply a 2x2 operator on index bit q."""
    n = _num_bits(state.size)
    ax = n - 1 - q
    psi = np.moveaxis(state.reshape((2,) * n), ax, 0)
    out = np.tensordot(u, psi, axes=(1, 0))
    return np.ascontiguousarray(np.moveaxis(out, 0, ax)).reshape(state.size)


def apply_2q(state: np.ndarray, u: np.ndarray, q0: int, q1: int) -> np.ndarray:
    """Apply a 4x4 operator; its row index is 2*bit(q0) + bit(q1)."""
    n = _num_bits(state.size)
    if q0 == q1:
        raise ValueError("two-qubit kernel needs distinct wires")
    a0, a1 = n - 1 - q0, n - 1 - q1
    psi = state.reshape((2,) * n)
    u4 = u.reshape(2, 2, 2, 2)
    out = np.tensordot(u4, psi, axes=([2, 3], [a0, a1]))
    out = np.moveaxis(out, (0, 1), (a0, a1))
    return np.ascontiguousarray(out).reshape(state.size)
