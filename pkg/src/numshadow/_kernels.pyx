# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: batched quadratic forms and histogram binning.

The numpy fallback in ``_kernels_py`` implements the same contracts; the
active implementation is chosen at import time in ``backend``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def quad_forms(cnp.complex128_t[:, ::1] matrix, cnp.complex128_t[:, ::1] states):
    """Return z[s] = <states[s] | matrix | states[s]> for each row."""
    cdef Py_ssize_t n = states.shape[0]
    cdef Py_ssize_t d = states.shape[1]
    out = np.empty(n, dtype=np.complex128)
    cdef cnp.complex128_t[::1] z = out
    cdef Py_ssize_t s, i, j
    cdef double complex acc, row
    for s in range(n):
        acc = 0
        for i in range(d):
            row = 0
            for j in range(d):
                row = row + matrix[i, j] * states[s, j]
            acc = acc + states[s, i].conjugate() * row
        z[s] = acc
    return out


def diag_quad_forms(cnp.complex128_t[::1] diag, cnp.complex128_t[:, ::1] states):
    """Return z[s] = sum_i diag[i] * |states[s, i]|^2 (diagonal-operator case)."""
    cdef Py_ssize_t n = states.shape[0]
    cdef Py_ssize_t d = states.shape[1]
    out = np.empty(n, dtype=np.complex128)
    cdef cnp.complex128_t[::1] z = out
    cdef Py_ssize_t s, i
    cdef double complex acc
    cdef double p
    for s in range(n):
        acc = 0
        for i in range(d):
            p = states[s, i].real * states[s, i].real + states[s, i].imag * states[s, i].imag
            acc = acc + diag[i] * p
        z[s] = acc
    return out


def bin_counts(double[::1] re, double[::1] im,
               double re_min, double re_max, double im_min, double im_max,
               cnp.int64_t[:, ::1] counts):
    """Accumulate samples into counts[iy, ix]; upper grid edges are inclusive.

    Returns the number of samples falling outside the window.
    """
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t ny = counts.shape[0]
    cdef Py_ssize_t nx = counts.shape[1]
    cdef double dx = (re_max - re_min) / nx
    cdef double dy = (im_max - im_min) / ny
    cdef Py_ssize_t k, outside = 0
    cdef Py_ssize_t ix, iy
    for k in range(n):
        if re[k] < re_min or re[k] > re_max or im[k] < im_min or im[k] > im_max:
            outside += 1
            continue
        ix = <Py_ssize_t>((re[k] - re_min) / dx)
        if ix >= nx:
            ix = nx - 1
        iy = <Py_ssize_t>((im[k] - im_min) / dy)
        if iy >= ny:
            iy = ny - 1
        counts[iy, ix] += 1
    return outside
