# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled gate-application kernels.

Same contract as kernels._numpy: flat index bit q is wire q, results are
new arrays. Inputs must be C-contiguous complex128 (the package wrapper
guarantees this).
"""
import numpy as np

ctypedef double complex cplx


def apply_1q(const cplx[::1] state, const cplx[:, ::1] u, Py_ssize_t q):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t low = (<Py_ssize_t> 1) << q
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef Py_ssize_t base, off, i0, i1
    cdef cplx a, b
    for base in range(0, dim, 2 * low):
        for off in range(low):
            i0 = base + off
            i1 = i0 + low
            a = state[i0]
            b = state[i1]
            out[i0] = u00 * a + u01 * b
            out[i1] = u10 * a + u11 * b
    return out_arr


def apply_2q(const cplx[::1] state, const cplx[:, ::1] u, Py_ssize_t q0, Py_ssize_t q1):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t b0 = (<Py_ssize_t> 1) << q0
    cdef Py_ssize_t b1 = (<Py_ssize_t> 1) << q1
    cdef Py_ssize_t lo = b0 if b0 < b1 else b1
    cdef Py_ssize_t hi = b0 if b0 > b1 else b1
    cdef Py_ssize_t lomask = lo - 1
    cdef Py_ssize_t himask = hi - 1
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u02 = u[0, 2], u03 = u[0, 3]
    cdef cplx u10 = u[1, 0], u11 = u[1, 1], u12 = u[1, 2], u13 = u[1, 3]
    cdef cplx u20 = u[2, 0], u21 = u[2, 1], u22 = u[2, 2], u23 = u[2, 3]
    cdef cplx u30 = u[3, 0], u31 = u[3, 1], u32 = u[3, 2], u33 = u[3, 3]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef Py_ssize_t g, t, i01, i10, i11
    cdef cplx a00, a01, a10, a11
    for g in range(dim >> 2):
        # insert zero bits at the two wire positions, low position first
        t = ((g & ~lomask) << 1) | (g & lomask)
        t = ((t & ~himask) << 1) | (t & himask)
        i01 = t | b1
        i10 = t | b0
        i11 = i10 | b1
        a00 = state[t]
        a01 = state[i01]
        a10 = state[i10]
        a11 = state[i11]
        out[t] = u00 * a00 + u01 * a01 + u02 * a10 + u03 * a11
        out[i01] = u10 * a00 + u11 * a01 + u12 * a10 + u13 * a11
        out[i10] = u20 * a00 + u21 * a01 + u22 * a10 + u23 * a11
        out[i11] = u30 * a00 + u31 * a01 + u32 * a10 + u33 * a11
    return out_arr
