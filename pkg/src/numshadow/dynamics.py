"""Discrete-time two-qubit dynamics: an entangling unitary interleaved with
local depolarizing noise on the second qubit, projected onto the complex
plane through the expectation value of an observable.

One step maps rho -> U Phi(rho) U^+ with

    U      = exp(i alpha sx (x) sy) = cos(alpha) 1 + i sin(alpha) sx (x) sy
    Phi    = Kraus set {sqrt(1-beta) 1_4, sqrt(beta/3) 1_2 (x) s_p, p = x,y,z}

(the closed form for U holds because (sx (x) sy)^2 = 1). Separability of
each visited state is decided by positivity of the partial transpose, exact
for two qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    IDENT2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    as_matrix,
    check_density,
    kron,
    partial_transpose,
    purity,
)


@dataclass(frozen=True)
class DynamicsConfig:
    alpha: float = 0.1
    beta: float = 0.03
    steps: int = 300
    observable: np.ndarray = field(default_factory=lambda: np.diag([-1, 1, -1, 1]).astype(complex))

    def __post_init__(self):
        if not 0.0 <= self.beta <= 0.75:
            raise ValueError("beta must lie in [0, 3/4]")
        if self.steps < 1:
            raise ValueError("steps must be positive")
        if as_matrix(self.observable).shape[0] != 4:
            raise ValueError("observable must be 4x4")


@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    z: complex
    separable: bool
    purity: float
    min_pt_eigenvalue: float


def bell_state() -> np.ndarray:
    """Projector onto (|00> + |11>) / sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[[0, 3]] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def entangling_unitary(alpha: float) -> np.ndarray:
    return np.cos(alpha) * np.eye(4, dtype=complex) + 1j * np.sin(alpha) * kron(SIGMA_X, SIGMA_Y)


def depolarizing_kraus(beta: float) -> list[np.ndarray]:
    """Kraus operators of the local depolarizing channel on the second qubit."""
    if not 0.0 <= beta <= 0.75:
        raise ValueError("beta must lie in [0, 3/4]")
    ops = [np.sqrt(1.0 - beta) * np.eye(4, dtype=complex)]
    for sigma in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        ops.append(np.sqrt(beta / 3.0) * kron(IDENT2, sigma))
    return ops


def apply_channel(rho: np.ndarray, kraus) -> np.ndarray:
    out = np.zeros_like(rho)
    for k in kraus:
        out += k @ rho @ k.conj().T
    return out


def step(rho: np.ndarray, cfg: DynamicsConfig) -> np.ndarray:
    """One evolution step; preserves trace, Hermiticity and positivity."""
    rho = check_density(rho)
    u = entangling_unitary(cfg.alpha)
    noisy = apply_channel(rho, depolarizing_kraus(cfg.beta))
    out = u @ noisy @ u.conj().T
    return (out + out.conj().T) / 2.0


def is_separable_2x2(rho, tol: float = 1e-12):
    """(separable?, min eigenvalue of the partial transpose) for a two-qubit state.

    Positivity of the partial transpose is necessary and sufficient in
    dimension 2 (x) 2.
    """
    m = check_density(rho)
    if m.shape[0] != 4:
        raise ValueError("expected a two-qubit (4x4) state")
    pt = partial_transpose(m, (2, 2), "B")
    low = float(np.linalg.eigvalsh(pt)[0])
    return low >= -tol, low


def trajectory(cfg: DynamicsConfig) -> list[TrajectoryPoint]:
    """Evolve the Bell state for cfg.steps steps, recording the observable
    expectation, the separability flag and the purity at t = 0 .. steps."""
    x = as_matrix(cfg.observable)
    rho = bell_state()
    points = []
    for t in range(cfg.steps + 1):
        sep, low = is_separable_2x2(rho)
        points.append(
            TrajectoryPoint(
                step=t,
                z=complex(np.trace(rho @ x)),
                separable=sep,
                purity=purity(rho),
                min_pt_eigenvalue=low,
            )
        )
        if t < cfg.steps:
            rho = step(rho, cfg)
    return points


def count_transitions(points) -> int:
    flags = [p.separable for p in points]
    return sum(1 for a, b in zip(flags, flags[1:]) if a != b)


def trajectory_to_csv(points, path) -> None:
    with open(path, "w") as fh:
        fh.write("t,re_z,im_z,separable,purity,min_pt_eig\n")
        for p in points:
            fh.write(
                f"{p.step},{float(p.z.real)!r},{float(p.z.imag)!r},{int(p.separable)},"
                f"{float(p.purity)!r},{float(p.min_pt_eigenvalue)!r}\n"
            )
