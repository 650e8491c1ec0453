"""Kernel backend selection.

Imports the compiled extension when present; otherwise falls back to the
numpy implementations. Set NUMSHADOW_PURE_PY=1 to force the fallback (used
by the benchmark and the backend-equivalence tests).
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("NUMSHADOW_PURE_PY"):
    _impl = _kernels_py
    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        _impl = _kernels_py
        COMPILED = False


def quad_forms(matrix, states):
    matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
    states = np.ascontiguousarray(states, dtype=np.complex128)
    return _impl.quad_forms(matrix, states)


def diag_quad_forms(diag, states):
    diag = np.ascontiguousarray(diag, dtype=np.complex128)
    states = np.ascontiguousarray(states, dtype=np.complex128)
    return _impl.diag_quad_forms(diag, states)


def bin_counts(z, re_min, re_max, im_min, im_max, counts):
    re = np.ascontiguousarray(z.real, dtype=np.float64)
    im = np.ascontiguousarray(z.imag, dtype=np.float64)
    return _impl.bin_counts(re, im, re_min, re_max, im_min, im_max, counts)
