"""Numerical-range geometry: boundary polygons via a supporting-hyperplane
sweep, membership tests, empirical support masks and Minkowski products.

For each sweep angle theta the top eigenvector v of the Hermitian part of
e^{-i theta} A gives a boundary point <v|A|v> and the support value
h(theta) = lambda_max. Membership uses the supporting half-planes (an outer
approximation), so boundary-near samples are never falsely rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix


@dataclass(frozen=True)
class RangePolygon:
    """Boundary points of a numerical range, ordered by sweep angle."""

    vertices: np.ndarray  # complex boundary points
    angles: np.ndarray
    supports: np.ndarray  # support function values h(theta)

    @property
    def n_angles(self) -> int:
        return self.angles.size

    def signed_distance(self, z) -> np.ndarray:
        """max_theta Re(e^{-i theta} z) - h(theta): negative inside, positive outside."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.full(flat.shape, -np.inf)
        step = 4096
        cos = np.cos(self.angles)
        sin = np.sin(self.angles)
        for lo in range(0, flat.size, step):
            part = flat[lo : lo + step]
            proj = np.outer(part.real, cos) + np.outer(part.imag, sin)
            out[lo : lo + step] = np.max(proj - self.supports, axis=1)
        return out.reshape(z.shape) if z.shape else float(out[0])

    def contains(self, z, tol: float = 1e-9):
        return self.signed_distance(z) <= tol

    def bounding_box(self):
        v = self.vertices
        return (
            float(v.real.min()),
            float(v.real.max()),
            float(v.imag.min()),
            float(v.imag.max()),
        )

    def area(self) -> float:
        """Area of the convex hull of the boundary points."""
        hull = convex_hull(self.vertices)
        if hull.size < 3:
            return 0.0
        x, y = hull.real, hull.imag
        return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def convex_hull(points) -> np.ndarray:
    """Convex hull of complex points (monotone chain), counterclockwise."""
    pts = np.unique(np.asarray(points, dtype=complex).ravel())
    pts = pts[np.lexsort((pts.imag, pts.real))]
    if pts.size <= 2:
        return pts

    def cross(o, a, b):
        return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)

    lower: list[complex] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def numerical_range_boundary(a, n_angles: int = 720) -> RangePolygon:
    """Boundary of the numerical range of a square matrix.

    Eigenvalue ties in the sweep are broken arbitrarily; flat boundary
    segments appear as collinear vertex runs.
    """
    m = as_matrix(a)
    if n_angles < 3:
        raise ValueError("need at least 3 sweep angles")
    angles = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    vertices = np.empty(n_angles, dtype=complex)
    supports = np.empty(n_angles)
    for k, theta in enumerate(angles):
        rot = np.exp(-1j * theta) * m
        herm = (rot + rot.conj().T) / 2.0
        w, v = np.linalg.eigh(herm)
        top = v[:, -1]
        vertices[k] = top.conj() @ m @ top
        supports[k] = w[-1]
    return RangePolygon(vertices, angles, supports)


def restricted_support(hist, threshold: float = 0.0) -> np.ndarray:
    """Boolean mask of histogram cells with mass above the threshold.

    The occupied set estimates the restricted range, which needs not be
    convex or simply connected; emptiness at finite sample counts is
    statistical, not a topological certainty.
    """
    return hist.mass > threshold


def minkowski_product(p: RangePolygon, q: RangePolygon, n_out: int = 4096) -> np.ndarray:
    """Pairwise products of boundary samples of two ranges (about n_out points)."""
    if n_out < 1:
        raise ValueError("n_out must be positive")
    k = max(1, int(np.sqrt(n_out)))

    def boundary_samples(poly):
        v = poly.vertices
        if v.size <= k:
            return v
        idx = np.linspace(0, v.size - 1, k).astype(int)
        return v[idx]

    a = boundary_samples(p)
    b = boundary_samples(q)
    return np.multiply.outer(a, b).ravel()


def polygon_to_csv(poly: RangePolygon, path) -> None:
    with open(path, "w") as fh:
        fh.write("re,im\n")
        for z in poly.vertices:
            fh.write(f"{float(z.real)!r},{float(z.imag)!r}\n")


def mask_to_pgm(mask: np.ndarray, path) -> None:
    """Binary occupancy mask as a plain (P2) PGM, top row = highest im bin."""
    img = np.flipud(mask.astype(int) * 255)
    with open(path, "w") as fh:
        fh.write(f"P2\n{img.shape[1]} {img.shape[0]}\n255\n")
        for row in img:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
