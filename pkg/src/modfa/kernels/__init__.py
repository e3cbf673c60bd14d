"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The Cython extension is preferred when built; otherwise the numpy
implementation is selected at import. `set_backend` switches explicitly
(used by the test suite and by benchmarks/bench_kernels.py).

Statevector layout: flat index bit q is wire q (wire 0 = least significant
bit). Density matrices reuse the same kernels through the vectorization
trick: a row-major flattened 2^n x 2^n matrix is a length-4^n vector whose
row-index bits sit at positions n..2n-1, so M rho M^dag is one kernel call
on bit n+q followed by one with conj(M) on bit q.
"""
from __future__ import annotations

import numpy as np

from . import _numpy

try:
    from . import _core
except ImportError:
    _core = None

_impl = _core if _core is not None else _numpy


def available_backends() -> tuple[str, ...]:
    return ("cython", "numpy") if _core is not None else ("numpy",)


def active_backend() -> str:
    return "cython" if _impl is _core else "numpy"


def set_backend(name: str) -> None:
    global _impl
    if name == "numpy":
        _impl = _numpy
    elif name == "cython":
        if _core is None:
            raise RuntimeError("compiled kernel backend is not built")
        _impl = _core
    else:
        raise ValueError(f"unknown kernel backend {name!r}")


def _as_c128(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.complex128)


def apply_1q_sv(state: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    """New statevector with the 2x2 operator u applied on wire q."""
    return _impl.apply_1q(_as_c128(state), _as_c128(u), q)


def apply_2q_sv(state: np.ndarray, u: np.ndarray, q0: int, q1: int) -> np.ndarray:
    """New statevector with the 4x4 operator u applied on wires (q0, q1)."""
    return _impl.apply_2q(_as_c128(state), _as_c128(u), q0, q1)


def _num_qubits_dm(rho: np.ndarray) -> int:
    dim = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != dim:
        raise ValueError("density matrix must be square")
    n = dim.bit_length() - 1
    if (1 << n) != dim:
        raise ValueError(f"density-matrix dimension {dim} is not a power of two")
    return n


def evolve_1q_dm(rho: np.ndarray, m: np.ndarray, q: int) -> np.ndarray:
    """rho -> m rho m^dag with m acting on wire q (m need not be unitary)."""
    n = _num_qubits_dm(rho)
    flat = _as_c128(rho).reshape(rho.size)
    flat = _impl.apply_1q(flat, _as_c128(m), n + q)
    flat = _impl.apply_1q(flat, _as_c128(np.conj(m)), q)
    return flat.reshape(rho.shape)


def evolve_2q_dm(rho: np.ndarray, m: np.ndarray, q0: int, q1: int) -> np.ndarray:
    """rho -> m rho m^dag with the 4x4 operator m acting on wires (q0, q1)."""
    n = _num_qubits_dm(rho)
    flat = _as_c128(rho).reshape(rho.size)
    flat = _impl.apply_2q(flat, _as_c128(m), n + q0, n + q1)
    flat = _impl.apply_2q(flat, _as_c128(np.conj(m)), q0, q1)
    return flat.reshape(rho.shape)


def kraus_1q_dm(rho: np.ndarray, kraus: list[np.ndarray], q: int) -> np.ndarray:
    """Channel sum_k K rho K^dag over a single-wire Kraus set."""
    out = evolve_1q_dm(rho, kraus[0], q)
    for k in kraus[1:]:
        out += evolve_1q_dm(rho, k, q)
    return out


def kraus_2q_dm(rho: np.ndarray, kraus: list[np.ndarray], q0: int, q1: int) -> np.ndarray:
    """Channel sum_k K rho K^dag over a two-wire Kraus set."""
    out = evolve_2q_dm(rho, kraus[0], q0, q1)
    for k in kraus[1:]:
        out += evolve_2q_dm(rho, k, q0, q1)
    return out
