"""Samplers for pure states drawn from restricted manifolds.

Supported restrictions: full complex/real states, product states over an
arbitrary factorization, maximally entangled states of an NxN system
(complex via a single Haar unitary, real via a Haar orthogonal), local
orbits of the two inequivalent three-qubit entangled seeds, and bipartite
states with fixed Schmidt coefficients.

All randomness flows through :class:`RngStream`, which wraps a numpy
SeedSequence; identical (seed, stream_id) pairs reproduce identical draws
and chunked substreams are derived deterministically from the chunk index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import reduced_density

KINDS = ("complex", "real", "product", "maxent", "ghz", "w", "schmidt")


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream: (seed, stream_id) identifies the draws."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        )

    def chunk_generator(self, index: int) -> np.random.Generator:
        """Independent generator for parallel chunk `index` of this stream."""
        return np.random.default_rng(
            np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, index))
        )


def as_stream(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng))
    raise TypeError(f"expected RngStream or int seed, got {type(rng)!r}")


@dataclass(frozen=True)
class Restriction:
    """Tag describing which manifold of pure states is sampled.

    kind       one of KINDS
    dims       local dimensions: (D,) for complex/real, the factor dims for
               product, (N,) for maxent; ignored for ghz/w
    field      'complex' or 'real' (product and maxent only)
    schmidt    Schmidt coefficients, descending, summing to 1 (schmidt only)
    """

    kind: str
    dims: tuple[int, ...] = ()
    field: str = "complex"
    schmidt: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown restriction kind {self.kind!r}")
        if self.field not in ("complex", "real"):
            raise ValueError(f"unknown field {self.field!r}")
        if self.kind == "product" and len(self.dims) < 2:
            raise ValueError("product restriction needs at least two factors")
        if self.kind == "schmidt":
            lam = np.array(self.schmidt, dtype=float)
            if lam.size == 0 or np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
                raise ValueError("Schmidt coefficients must be nonnegative and sum to 1")
            if np.any(np.diff(lam) > 0):
                raise ValueError("Schmidt coefficients must be sorted descending")

    @property
    def dim(self) -> int:
        if self.kind in ("complex", "real"):
            return self.dims[0]
        if self.kind == "product":
            return int(np.prod(self.dims))
        if self.kind == "maxent":
            return self.dims[0] ** 2
        if self.kind == "schmidt":
            return len(self.schmidt) ** 2
        return 8  # ghz / w

    def __str__(self) -> str:
        if self.kind in ("complex", "real"):
            return f"{self.kind}:{self.dims[0]}"
        if self.kind == "product":
            return f"product:{'x'.join(str(d) for d in self.dims)}:{self.field}"
        if self.kind == "maxent":
            return f"maxent:{self.dims[0]}:{self.field}"
        if self.kind == "schmidt":
            return "schmidt:" + ",".join(repr(v) for v in self.schmidt)
        return self.kind


def full_complex(dim: int) -> Restriction:
    return Restriction("complex", (int(dim),))


def full_real(dim: int) -> Restriction:
    return Restriction("real", (int(dim),), field="real")


def product(dims, field: str = "complex") -> Restriction:
    return Restriction("product", tuple(int(d) for d in dims), field=field)


def max_entangled(n: int, field: str = "complex") -> Restriction:
    return Restriction("maxent", (int(n),), field=field)


def ghz_orbit() -> Restriction:
    return Restriction("ghz")


def w_orbit() -> Restriction:
    return Restriction("w")


def schmidt(coefficients) -> Restriction:
    return Restriction("schmidt", schmidt=tuple(float(c) for c in coefficients))


def parse_restriction(text: str) -> Restriction:
    """Parse a CLI restriction string, e.g. 'complex:4', 'product:2x2:complex',
    'maxent:2:real', 'ghz', 'w', 'schmidt:0.75,0.25'."""
    parts = text.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind in ("complex", "real") and len(parts) == 2:
            dim = int(parts[1])
            return full_complex(dim) if kind == "complex" else full_real(dim)
        if kind == "product" and len(parts) in (2, 3):
            dims = tuple(int(d) for d in parts[1].split("x"))
            fld = parts[2] if len(parts) == 3 else "complex"
            return product(dims, fld)
        if kind == "maxent" and len(parts) in (2, 3):
            fld = parts[2] if len(parts) == 3 else "complex"
            return max_entangled(int(parts[1]), fld)
        if kind == "ghz" and len(parts) == 1:
            return ghz_orbit()
        if kind == "w" and len(parts) == 1:
            return w_orbit()
        if kind == "schmidt" and len(parts) == 2:
            return schmidt(float(v) for v in parts[1].split(","))
    except ValueError as exc:
        raise ValueError(f"bad restriction string {text!r}: {exc}") from exc
    raise ValueError(f"bad restriction string {text!r}")


@dataclass(frozen=True)
class PureState:
    """Unit vector plus the restriction tag of the manifold that produced it."""

    dim: int
    amplitudes: np.ndarray
    restriction: Restriction


@dataclass(frozen=True)
class SchmidtSpec:
    """Fixed Schmidt coefficients of a bipartite NxN pure state."""

    n: int
    lam: tuple[float, ...]

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.size != self.n:
            raise ValueError("need exactly n Schmidt coefficients")
        if abs(lam.sum() - 1.0) > 1e-12 or np.any(lam < 0):
            raise ValueError("Schmidt coefficients must be nonnegative and sum to 1")
        if np.any(np.diff(lam) > 0):
            raise ValueError("Schmidt coefficients must be sorted descending")


def _ginibre(gen, shape, field):
    if field == "real":
        return gen.standard_normal(shape)
    return gen.standard_normal(shape) + 1j * gen.standard_normal(shape)


def haar_unitary_batch(n: int, count: int, gen, field: str = "complex") -> np.ndarray:
    """Stack of Haar-distributed unitary (or orthogonal) matrices, shape (count, n, n)."""
    g = _ginibre(gen, (count, n, n), field)
    q, r = np.linalg.qr(g)
    d = np.einsum("kii->ki", r)
    if field == "real":
        phase = np.sign(d)
        phase[phase == 0] = 1.0
    else:
        phase = d / np.abs(d)
    return q * phase[:, None, :]


def sample_haar_unitary(n: int, field: str = "complex", rng=0) -> np.ndarray:
    """One Haar-random element of U(n) (field='complex') or O(n) (field='real')."""
    if n < 1:
        raise ValueError("n must be positive")
    gen = rng if isinstance(rng, np.random.Generator) else as_stream(rng).generator()
    return haar_unitary_batch(n, 1, gen, field)[0]


def sample_dirichlet(dim: int, s: float, rng=0, size: int | None = None) -> np.ndarray:
    """Probability vectors with symmetric Dirichlet(s) density on the simplex."""
    if s <= 0:
        raise ValueError("Dirichlet parameter s must be positive")
    gen = rng if isinstance(rng, np.random.Generator) else as_stream(rng).generator()
    g = gen.gamma(s, size=(size or 1, dim))
    q = g / g.sum(axis=1, keepdims=True)
    return q if size is not None else q[0]


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=1, keepdims=True)


_GHZ_SEED = np.zeros(8, dtype=complex)
_GHZ_SEED[[0, 7]] = 1 / math.sqrt(2)
_W_SEED = np.zeros(8, dtype=complex)
_W_SEED[[4, 2, 1]] = 1 / math.sqrt(3)


def _orbit_batch(seed_state: np.ndarray, count: int, gen) -> np.ndarray:
    ua = haar_unitary_batch(2, count, gen)
    ub = haar_unitary_batch(2, count, gen)
    uc = haar_unitary_batch(2, count, gen)
    t = seed_state.reshape(2, 2, 2)
    out = np.einsum("nai,nbj,nck,ijk->nabc", ua, ub, uc, t)
    return out.reshape(count, 8)


def sample_batch(restriction: Restriction, count: int, gen) -> np.ndarray:
    """Matrix of `count` unit states (rows) drawn from the restriction manifold."""
    r = restriction
    if r.kind in ("complex", "real"):
        v = _ginibre(gen, (count, r.dims[0]), "real" if r.kind == "real" else "complex")
        return _normalize_rows(np.asarray(v, dtype=complex))
    if r.kind == "product":
        out = None
        for d in r.dims:
            f = _normalize_rows(np.asarray(_ginibre(gen, (count, d), r.field), dtype=complex))
            out = f if out is None else (out[:, :, None] * f[:, None, :]).reshape(count, -1)
        return out
    if r.kind == "maxent":
        n = r.dims[0]
        u = haar_unitary_batch(n, count, gen, r.field)
        return np.asarray(u, dtype=complex).reshape(count, n * n) / math.sqrt(n)
    if r.kind == "ghz":
        return _orbit_batch(_GHZ_SEED, count, gen)
    if r.kind == "w":
        return _orbit_batch(_W_SEED, count, gen)
    if r.kind == "schmidt":
        lam = np.array(r.schmidt, dtype=float)
        n = lam.size
        ua = haar_unitary_batch(n, count, gen)
        ub = haar_unitary_batch(n, count, gen)
        out = np.einsum("nai,nbi,i->nab", ua, ub, np.sqrt(lam))
        return out.reshape(count, n * n)
    raise ValueError(f"unknown restriction kind {r.kind!r}")


def sample_pure(restriction: Restriction, rng=0) -> PureState:
    """Draw a single pure state from the restriction manifold."""
    gen = rng if isinstance(rng, np.random.Generator) else as_stream(rng).generator()
    v = sample_batch(restriction, 1, gen)[0]
    return PureState(dim=v.size, amplitudes=v, restriction=restriction)


def sample_schmidt_state(spec: SchmidtSpec, rng=0) -> PureState:
    """Bipartite pure state with the prescribed Schmidt coefficients."""
    return sample_pure(schmidt(spec.lam), rng)


def membership_residual(state, restriction: Restriction) -> float:
    """Largest deviation of a state from its declared manifold.

    Product: second singular values of the successive unfoldings; maxent:
    distance of the reduced state from the maximally mixed one; ghz/w:
    deviation of single-qubit reduced spectra from the seed's; real fields:
    largest imaginary part; schmidt: singular value mismatch.
    """
    v = np.asarray(getattr(state, "amplitudes", state), dtype=complex).ravel()
    res = abs(np.linalg.norm(v) - 1.0)
    r = restriction
    if r.kind == "real" or (r.kind in ("product", "maxent") and r.field == "real"):
        phase = v[np.argmax(np.abs(v))]
        res = max(res, float(np.max(np.abs((v * abs(phase) / phase).imag))))
    if r.kind == "product":
        rest = v
        for d in r.dims[:-1]:
            m = rest.reshape(d, -1)
            s = np.linalg.svd(m, compute_uv=False)
            res = max(res, float(s[1]) if s.size > 1 else 0.0)
            row = m[np.unravel_index(np.argmax(np.abs(m)), m.shape)[0]]
            rest = row / np.linalg.norm(row)
        return res
    if r.kind == "maxent":
        n = r.dims[0]
        rho = reduced_density(v, (n, n), 0)
        return max(res, float(np.max(np.abs(rho - np.eye(n) / n))))
    if r.kind in ("ghz", "w"):
        want = np.array([0.5, 0.5]) if r.kind == "ghz" else np.array([1 / 3, 2 / 3])
        for site in range(3):
            w = np.linalg.eigvalsh(reduced_density(v, (2, 2, 2), site))
            res = max(res, float(np.max(np.abs(np.sort(w) - np.sort(want)))))
        return res
    if r.kind == "schmidt":
        n = len(r.schmidt)
        s = np.linalg.svd(v.reshape(n, n), compute_uv=False)
        res = max(res, float(np.max(np.abs(np.sort(s) - np.sort(np.sqrt(r.schmidt))))))
    return res
