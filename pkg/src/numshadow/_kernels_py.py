"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or explicitly disabled via
the NUMSHADOW_PURE_PY environment variable). Binning semantics are kept
identical to the compiled version: window edges inclusive, index truncation
toward zero, top edge clamped into the last cell.
"""

import numpy as np


def quad_forms(matrix, states):
    """Return z[s] = <states[s] | matrix | states[s]> for each row."""
    w = states @ matrix.T
    return np.sum(states.conj() * w, axis=1)


def diag_quad_forms(diag, states):
    """Return z[s] = sum_i diag[i] * |states[s, i]|^2 (diagonal-operator case)."""
    p = states.real**2 + states.imag**2
    return p @ diag


def bin_counts(re, im, re_min, re_max, im_min, im_max, counts):
    """Accumulate samples into counts[iy, ix]; returns the off-window count."""
    ny, nx = counts.shape
    dx = (re_max - re_min) / nx
    dy = (im_max - im_min) / ny
    inside = (re >= re_min) & (re <= re_max) & (im >= im_min) & (im <= im_max)
    ix = np.minimum(((re[inside] - re_min) / dx).astype(np.int64), nx - 1)
    iy = np.minimum(((im[inside] - im_min) / dy).astype(np.int64), ny - 1)
    flat = np.bincount(iy * nx + ix, minlength=nx * ny)
    counts += flat.reshape(ny, nx)
    return int(re.size - np.count_nonzero(inside))
