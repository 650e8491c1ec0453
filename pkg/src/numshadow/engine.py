"""Monte Carlo estimation of restricted numerical shadows.

Samples are generated in fixed-size chunks, each from a generator derived
deterministically from (seed, stream id, chunk index), so results are
bit-identical for any thread count and any merge order: histograms
accumulate integer counts, which commute.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .linalg import as_matrix
from .ranges import numerical_range_boundary
from .sampling import Restriction, as_stream, sample_batch, sample_dirichlet

DEFAULT_CHUNK = 1 << 16
DEFAULT_SAMPLES = 1_000_000


@dataclass(frozen=True)
class GridSpec:
    """Rectangular window on the complex plane with an nx by ny cell grid."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int = 256
    ny: int = 256

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("empty grid window")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid must have at least one cell")

    def cell_of(self, z: complex) -> tuple[int, int]:
        """(iy, ix) of the cell containing z; raises if z is off-window."""
        z = complex(z)
        if not (self.re_min <= z.real <= self.re_max and self.im_min <= z.imag <= self.im_max):
            raise ValueError(f"{z} lies outside the grid window")
        dx = (self.re_max - self.re_min) / self.nx
        dy = (self.im_max - self.im_min) / self.ny
        ix = min(int((z.real - self.re_min) / dx), self.nx - 1)
        iy = min(int((z.imag - self.im_min) / dy), self.ny - 1)
        return iy, ix


@dataclass
class ShadowHistogram:
    """Normalized 2-D density of shadow samples over a grid window.

    mass sums to 1 - n_outside / n_samples; off-window samples are counted,
    never silently dropped.
    """

    grid: GridSpec
    counts: np.ndarray  # (ny, nx) int64
    n_samples: int
    n_outside: int

    @property
    def mass(self) -> np.ndarray:
        return self.counts / self.n_samples

    def merged(self, other: "ShadowHistogram") -> "ShadowHistogram":
        if other.grid != self.grid:
            raise ValueError("histograms live on different grids")
        return ShadowHistogram(
            self.grid,
            self.counts + other.counts,
            self.n_samples + other.n_samples,
            self.n_outside + other.n_outside,
        )


@dataclass(frozen=True)
class MomentEstimate:
    """Sample mean/variance of shadow values with jackknife standard errors."""

    mean: complex
    second_abs: float
    variance: float
    std_error_mean: float
    std_error_var: float
    n_samples: int


def auto_grid(a, nx: int = 256, ny: int = 256, pad: float = 0.05) -> GridSpec:
    """Window = bounding box of the numerical range padded by `pad` per side.

    Degenerate extents (points, horizontal/vertical segments) are widened to
    a unit window so every shadow sample stays on-grid.
    """
    poly = numerical_range_boundary(as_matrix(a), 360)
    re_min, re_max, im_min, im_max = poly.bounding_box()

    def widen(lo, hi, ncells):
        if hi - lo < 1e-12:
            # unit window shifted by half a cell so the point sits at a
            # cell center, not on an edge where roundoff jitter splits it
            mid = (lo + hi) / 2
            return mid - 0.5 + 0.5 / ncells, mid + 0.5 + 0.5 / ncells
        w = hi - lo
        return lo - pad * w, hi + pad * w

    re_min, re_max = widen(re_min, re_max, nx)
    im_min, im_max = widen(im_min, im_max, ny)
    return GridSpec(re_min, re_max, im_min, im_max, nx, ny)


def _chunk_sizes(n: int, chunk: int):
    sizes = []
    left = n
    while left > 0:
        take = min(chunk, left)
        sizes.append(take)
        left -= take
    return sizes


def _values_for_chunk(matrix, diag, restriction, count, gen):
    states = sample_batch(restriction, count, gen)
    if diag is not None:
        return backend.diag_quad_forms(diag, states)
    return backend.quad_forms(matrix, states)


def _prepare(a, restriction: Restriction):
    m = as_matrix(a)
    if m.shape[0] != restriction.dim:
        raise ValueError(
            f"matrix dimension {m.shape[0]} does not match restriction dimension {restriction.dim}"
        )
    off = m - np.diag(np.diag(m))
    diag = np.diag(m).copy() if not np.any(off) else None
    return m, diag


def sample_values(a, restriction: Restriction, n: int, rng=0,
                  threads: int = 1, chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """n shadow samples z = <psi|A|psi> with psi drawn from the restriction."""
    if n <= 0:
        raise ValueError("sample count must be positive")
    m, diag = _prepare(a, restriction)
    stream = as_stream(rng)
    sizes = _chunk_sizes(n, chunk)

    def work(idx):
        return _values_for_chunk(m, diag, restriction, sizes[idx], stream.chunk_generator(idx))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    return np.concatenate(parts)


def estimate_shadow(a, restriction: Restriction, n: int = DEFAULT_SAMPLES,
                    grid: GridSpec | None = None, rng=0, threads: int = 1,
                    chunk: int = DEFAULT_CHUNK) -> ShadowHistogram:
    """Histogram of n shadow samples on the given (or automatic) grid."""
    if n <= 0:
        raise ValueError("sample count must be positive")
    m, diag = _prepare(a, restriction)
    if grid is None:
        grid = auto_grid(m)
    stream = as_stream(rng)
    sizes = _chunk_sizes(n, chunk)

    def work(idx):
        z = _values_for_chunk(m, diag, restriction, sizes[idx], stream.chunk_generator(idx))
        counts = np.zeros((grid.ny, grid.nx), dtype=np.int64)
        outside = backend.bin_counts(
            z, grid.re_min, grid.re_max, grid.im_min, grid.im_max, counts
        )
        return counts, outside

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    counts = np.zeros((grid.ny, grid.nx), dtype=np.int64)
    outside = 0
    for c, o in parts:
        counts += c
        outside += o
    return ShadowHistogram(grid, counts, n, outside)


def moment_estimate(z: np.ndarray) -> MomentEstimate:
    """Moments of a sample of complex values with jackknife standard errors."""
    z = np.asarray(z, dtype=complex).ravel()
    n = z.size
    if n < 2:
        raise ValueError("need at least two samples")
    mean = complex(z.mean())
    second = float(np.mean(np.abs(z) ** 2))
    var = max(second - abs(mean) ** 2, 0.0)
    se_mean = math.sqrt(var / n)
    # delete-one variance estimates from the sufficient statistics
    s1 = z.sum()
    s2 = np.sum(np.abs(z) ** 2)
    loo_second = (s2 - np.abs(z) ** 2) / (n - 1)
    loo_mean_sq = np.abs(s1 - z) ** 2 / (n - 1) ** 2
    loo_var = loo_second - loo_mean_sq
    se_var = math.sqrt((n - 1) / n * float(np.sum((loo_var - loo_var.mean()) ** 2)))
    return MomentEstimate(mean, second, var, se_mean, se_var, n)


def estimate_moments(a, restriction: Restriction, n: int = DEFAULT_SAMPLES,
                     rng=0, threads: int = 1) -> MomentEstimate:
    """Monte Carlo mean/variance of the shadow of `a` over the restriction."""
    return moment_estimate(sample_values(a, restriction, n, rng, threads))


def diag_fast_sample(x, case: str, n: int, rng=0, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Shadow samples of a diagonal operator via simplex weights, z = x . q.

    case 'A': flat simplex measure (full complex states);
    case 'B': statistical measure, Dirichlet(1/2) (full real states);
    case 'C': product of flat simplex measures (complex product states);
    case 'D': product of Dirichlet(1/2) measures (real product states).
    Cases C/D need the spectrum length to factor as N*M (square by default).
    """
    spec = np.asarray(x, dtype=complex).ravel()
    d = spec.size
    if n <= 0:
        raise ValueError("sample count must be positive")
    gen = as_stream(rng).generator()
    case = case.upper()
    if case in ("A", "B"):
        s = 1.0 if case == "A" else 0.5
        q = sample_dirichlet(d, s, gen, size=n)
        return q @ spec
    if case in ("C", "D"):
        if dims is None:
            root = math.isqrt(d)
            if root * root != d:
                raise ValueError(
                    f"spectrum length {d} is not a perfect square; pass dims=(N, M)"
                )
            dims = (root, root)
        na, nb = int(dims[0]), int(dims[1])
        if na * nb != d:
            raise ValueError(f"dims {dims} do not factor the spectrum length {d}")
        s = 1.0 if case == "C" else 0.5
        p = sample_dirichlet(na, s, gen, size=n)
        q = sample_dirichlet(nb, s, gen, size=n)
        r = (p[:, :, None] * q[:, None, :]).reshape(n, d)
        return r @ spec
    raise ValueError(f"unknown fast-path case {case!r}")


def tensor_shadow_compose(samples_a, samples_b) -> np.ndarray:
    """Shadow samples of a tensor product from independent factor samples
    (elementwise products; singleton factors broadcast)."""
    a = np.asarray(samples_a, dtype=complex).ravel()
    b = np.asarray(samples_b, dtype=complex).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("sample lists must be nonempty")
    if a.size != b.size and 1 not in (a.size, b.size):
        raise ValueError("sample lists must have equal length (or one singleton)")
    return a * b


def histogram_1d(values, lo: float, hi: float, bins: int) -> np.ndarray:
    """Normalized bin masses of real values on [lo, hi] (off-range mass dropped)."""
    v = np.asarray(values, dtype=float)
    counts, _ = np.histogram(v, bins=bins, range=(lo, hi))
    return counts / v.size


def total_variation(p, q) -> float:
    """Total variation distance between two mass arrays on a shared grid."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("mass arrays must share a shape")
    return 0.5 * float(np.sum(np.abs(p - q)))


def ks_statistic(x, y) -> float:
    """Two-sample Kolmogorov-Smirnov statistic for real samples."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    data = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, data, side="right") / x.size
    cdf_y = np.searchsorted(y, data, side="right") / y.size
    return float(np.max(np.abs(cdf_x - cdf_y)))


def ks_critical(n: int, m: int, alpha: float = 0.01) -> float:
    """Asymptotic two-sample KS critical value at level alpha."""
    c = math.sqrt(-math.log(alpha / 2.0) / 2.0)
    return c * math.sqrt((n + m) / (n * m))


def histogram_to_csv(hist: ShadowHistogram, path) -> None:
    """Write the window/shape header line, its values, then ny rows of mass."""
    mass = hist.mass
    g = hist.grid
    with open(path, "w") as fh:
        fh.write("re_min,re_max,im_min,im_max,nx,ny,n_samples,n_outside\n")
        fh.write(
            f"{float(g.re_min)!r},{float(g.re_max)!r},{float(g.im_min)!r},{float(g.im_max)!r},"
            f"{g.nx},{g.ny},{hist.n_samples},{hist.n_outside}\n"
        )
        for row in mass:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def histogram_from_csv(path) -> ShadowHistogram:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header[:2] != ["re_min", "re_max"]:
            raise ValueError("not a shadow histogram CSV")
        vals = fh.readline().strip().split(",")
        grid = GridSpec(
            float(vals[0]), float(vals[1]), float(vals[2]), float(vals[3]),
            int(vals[4]), int(vals[5]),
        )
        n_samples = int(vals[6])
        n_outside = int(vals[7])
        mass = np.loadtxt(fh, delimiter=",", ndmin=2)
    counts = np.rint(mass * n_samples).astype(np.int64)
    return ShadowHistogram(grid, counts, n_samples, n_outside)


def histogram_to_pgm(hist: ShadowHistogram, path, gamma: float = 0.5) -> None:
    """8-bit plain PGM of the mass grid, max-normalized with gamma correction;
    the top image row is the highest-im bin row."""
    mass = hist.mass
    peak = mass.max()
    img = np.zeros_like(mass) if peak == 0 else (mass / peak) ** gamma
    pix = np.flipud(np.rint(img * 255).astype(int))
    with open(path, "w") as fh:
        fh.write(f"P2\n{hist.grid.nx} {hist.grid.ny}\n255\n")
        for row in pix:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
