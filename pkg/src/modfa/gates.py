"""Gate matrices and small dense linear-algebra helpers.

All matrices are plain complex128 numpy arrays. Rotation gates use the
half-angle convention: ry(2a) rotates the real q0-q1 plane by a, and
rz(t) = diag(e^{-it/2}, e^{it/2}).
"""
from __future__ import annotations

import cmath
import math
from functools import reduce

import numpy as np

SQRT2_INV = 1.0 / math.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT2_INV
SX = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2
SXDG = SX.conj().T


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.array(
        [[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=complex
    )


def plane_rotation(angle: float) -> np.ndarray:
    """Counter-clockwise rotation of the real plane by `angle` (full angle)."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def phase_rotation(angle: float) -> np.ndarray:
    """diag(e^{-i angle}, e^{i angle})."""
    return np.array(
        [[cmath.exp(-1j * angle), 0], [0, cmath.exp(1j * angle)]], dtype=complex
    )


def controlled(u: np.ndarray) -> np.ndarray:
    """4x4 controlled-u; the control is the first (high) index bit."""
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = u
    return out


CX = controlled(X)


def kron_all(*matrices: np.ndarray) -> np.ndarray:
    return reduce(np.kron, matrices)


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(m.conj().T @ m - np.eye(m.shape[0])) < tol


def assert_unitary(m: np.ndarray, tol: float = 1e-12, what: str = "matrix") -> None:
    if not is_unitary(m, tol):
        raise ValueError(f"{what} is not unitary within {tol}")


def phase_between(a: np.ndarray, b: np.ndarray) -> float:
    """Angle f such that a ~ e^{if} b, read off b's largest-magnitude entry."""
    idx = np.unravel_index(int(np.argmax(np.abs(b))), b.shape)
    return float(np.angle(a[idx] / b[idx]))


def equiv_global_phase(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """True iff a equals e^{if} b entrywise within tol for some phase f."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    phi = phase_between(a, b)
    return max_abs(a - cmath.exp(1j * phi) * b) < tol
