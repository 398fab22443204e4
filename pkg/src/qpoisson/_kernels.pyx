# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled amplitude-update kernels.

Same contract as `_kernels_np`: in-place updates on a C-contiguous
complex128 statevector, masks and values as integers over basis-index bits.
Coset enumeration walks submasks of the free-bit mask with
``s = (s - free) & free``, so no index temporaries are allocated.
"""

import numpy as np

BACKEND_NAME = "cython"


def apply_ctrl_1q(double complex[::1] psi, long long target_bit,
                  long long ctrl_mask, long long ctrl_value,
                  double complex u00, double complex u01,
                  double complex u10, double complex u11):
    """2x2 update on the target bit, restricted to (i & ctrl_mask) == ctrl_value."""
    cdef long long full = psi.shape[0] - 1
    cdef long long free = full & ~ctrl_mask & ~target_bit
    cdef long long s = 0
    cdef long long i0, i1
    cdef double complex a, b
    with nogil:
        while True:
            i0 = s | ctrl_value
            i1 = i0 | target_bit
            a = psi[i0]
            b = psi[i1]
            psi[i0] = u00 * a + u01 * b
            psi[i1] = u10 * a + u11 * b
            s = (s - free) & free
            if s == 0:
                break


def apply_phase_mask(double complex[::1] psi, long long mask, long long value,
                     double complex phase):
    """Multiply amplitudes with (i & mask) == value by ``phase``."""
    cdef long long full = psi.shape[0] - 1
    cdef long long free = full & ~mask
    cdef long long s = 0
    with nogil:
        while True:
            psi[s | value] = psi[s | value] * phase
            s = (s - free) & free
            if s == 0:
                break


def apply_block(double complex[::1] psi, const long long[::1] offsets,
                long long block_mask, const double complex[:, ::1] u):
    """Dense update over the subset encoded by ``offsets``.

    ``offsets[v]`` is the basis-index contribution of subset value ``v``;
    ``block_mask`` is the union of the subset's bits.
    """
    cdef long long full = psi.shape[0] - 1
    cdef long long free = full & ~block_mask
    cdef long long dim = offsets.shape[0]
    cdef double complex[::1] scratch = np.empty(dim, dtype=np.complex128)
    cdef long long s = 0
    cdef long long r, t
    cdef double complex acc
    with nogil:
        while True:
            for t in range(dim):
                scratch[t] = psi[s | offsets[t]]
            for r in range(dim):
                acc = 0
                for t in range(dim):
                    acc = acc + u[r, t] * scratch[t]
                psi[s | offsets[r]] = acc
            s = (s - free) & free
            if s == 0:
                break


def prob_mask(double complex[::1] psi, long long mask, long long value):
    """Total probability of (i & mask) == value."""
    cdef long long full = psi.shape[0] - 1
    cdef long long free = full & ~mask
    cdef long long s = 0
    cdef double total = 0.0
    cdef double complex a
    with nogil:
        while True:
            a = psi[s | value]
            total += a.real * a.real + a.imag * a.imag
            s = (s - free) & free
            if s == 0:
                break
    return total


def collapse_mask(double complex[::1] psi, long long mask, long long value,
                  double scale):
    """Zero every amplitude with (i & mask) != value, scale the rest."""
    cdef long long n = psi.shape[0]
    cdef long long i
    with nogil:
        for i in range(n):
            if (i & mask) == value:
                psi[i] = psi[i] * scale
            else:
                psi[i] = 0


def scale_subset(double complex[::1] psi, const long long[::1] positions,
                 const double[::1] factors):
    """Multiply by factors[v] where bit i of v is the value of qubit positions[i]."""
    cdef long long n = psi.shape[0]
    cdef long long k = positions.shape[0]
    cdef long long i, j, v
    with nogil:
        for i in range(n):
            v = 0
            for j in range(k):
                v |= ((i >> positions[j]) & 1) << j
            psi[i] = psi[i] * factors[v]


def marginal_probs(double complex[::1] psi, const long long[::1] positions):
    """Probability of each value of the qubit subset, marginalizing the rest.

    Bit i of the returned array's index is the value of qubit positions[i].
    """
    cdef long long n = psi.shape[0]
    cdef long long k = positions.shape[0]
    out_arr = np.zeros(1 << k, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef long long i, j, v
    cdef double complex a
    with nogil:
        for i in range(n):
            v = 0
            for j in range(k):
                v |= ((i >> positions[j]) & 1) << j
            a = psi[i]
            out[v] += a.real * a.real + a.imag * a.imag
    return out_arr


def norm_sq(double complex[::1] psi):
    cdef long long n = psi.shape[0]
    cdef long long i
    cdef double total = 0.0
    cdef double complex a
    with nogil:
        for i in range(n):
            a = psi[i]
            total += a.real * a.real + a.imag * a.imag
    return total
