"""Dense complex linear algebra primitives: expectation values, Kronecker
products, partial traces/transposes and density-matrix checks.

Composite bases are ordered lexicographically, (i1, i2) with i1 the first
(A) subsystem, so flat index = i1 * N_B + i2. All partial operations below
follow this convention.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
RESIDUAL_TOL = 1e-10

IDENT2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"i": IDENT2, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_normal(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m @ m.conj().T - m.conj().T @ m)) <= tol)


def is_unitary(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def expectation(matrix, psi) -> complex:
    """Expectation value <psi| matrix |psi> of a unit vector psi."""
    m = as_matrix(matrix)
    v = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex).ravel()
    if v.size != m.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {m.shape[0]}, state {v.size}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"state is not normalized: ||psi|| = {norm!r}")
    return complex(v.conj() @ m @ v)


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more operators."""
    if not ops:
        raise ValueError("kron needs at least one operator")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def _split(x, dims):
    m = as_matrix(x)
    na, nb = int(dims[0]), int(dims[1])
    if na * nb != m.shape[0]:
        raise ValueError(f"dimension {m.shape[0]} does not factor as {na}x{nb}")
    return m.reshape(na, nb, na, nb), na, nb


def partial_trace(x, dims, over: str = "A") -> np.ndarray:
    """Trace out one subsystem of a bipartite operator.

    dims is (N_A, N_B); over selects the subsystem to sum away ('A' or 'B').
    The total trace is preserved.
    """
    t, _, _ = _split(x, dims)
    if over in ("A", "a", 0):
        return np.einsum("iaib->ab", t)
    if over in ("B", "b", 1):
        return np.einsum("aibi->ab", t)
    raise ValueError(f"unknown subsystem selector {over!r}")


def partial_transpose(x, dims, sub: str = "B") -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator."""
    t, na, nb = _split(x, dims)
    if sub in ("A", "a", 0):
        t = t.transpose(2, 1, 0, 3)
    elif sub in ("B", "b", 1):
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"unknown subsystem selector {sub!r}")
    return t.reshape(na * nb, na * nb)


def reduced_density(psi, dims, keep: int) -> np.ndarray:
    """Reduced density matrix of a pure state on one site of a tensor product.

    dims lists the local dimensions; keep is the site index to retain.
    """
    v = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex).ravel()
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != v.size:
        raise ValueError("dims do not match the state dimension")
    t = v.reshape(dims)
    t = np.moveaxis(t, keep, 0).reshape(dims[keep], -1)
    return t @ t.conj().T


def hermitian_eigensystem(h, tol: float = HERMITIAN_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    m = as_matrix(h)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian to tolerance")
    w, v = np.linalg.eigh(m)
    return w, v


def check_density(rho, trace_tol: float = 1e-12, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    m = as_matrix(rho)
    if not is_hermitian(m, HERMITIAN_TOL):
        raise ValueError("density matrix is not Hermitian")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr!r} != 1")
    w = np.linalg.eigvalsh(m)
    if w[0] < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {w[0]!r}")
    return m


def purity(rho) -> float:
    m = as_matrix(rho)
    return float(np.trace(m @ m).real)
