"""Numerical-range boundary sweep, membership, support masks, Minkowski products."""

import numpy as np
import pytest

from numshadow import catalog, engine, sampling
from numshadow.ranges import (
    convex_hull,
    mask_to_pgm,
    minkowski_product,
    numerical_range_boundary,
    polygon_to_csv,
    restricted_support,
)


def test_normal_matrix_segment():
    poly = numerical_range_boundary(np.diag([1.0, 1j]), 360)
    # all boundary points within 1e-10 of the segment from 1 to i
    seg = np.linspace(0, 1, 2001)
    curve = 1.0 * (1 - seg) + 1j * seg
    d = np.min(np.abs(poly.vertices[:, None] - curve[None, :]), axis=1)
    assert np.max(d) <= 1e-6  # curve discretization dominates
    assert poly.signed_distance(0.5 + 0.5j) <= 1e-9
    assert poly.signed_distance(0.0) > 0.1


def test_shift_matrix_disk():
    poly = numerical_range_boundary(np.array([[0.0, 1.0], [0.0, 0.0]]), 720)
    r = np.abs(poly.vertices)
    assert np.max(np.abs(r - 0.5)) <= 1e-9


def test_u8_triangle():
    poly = numerical_range_boundary(catalog.get("U8").matrix, 720)
    hull = convex_hull(poly.vertices)
    w = np.exp(2j * np.pi / 3)
    corners = np.array([1.0, w, w.conjugate()])
    assert hull.size == 3
    d = np.min(np.abs(hull[:, None] - corners[None, :]), axis=1)
    assert np.max(d) <= 1e-9


def test_polygon_contains_diagonal_entries():
    gen = np.random.default_rng(0)
    for _ in range(5):
        a = gen.standard_normal((4, 4)) + 1j * gen.standard_normal((4, 4))
        poly = numerical_range_boundary(a, 360)
        assert np.all(poly.signed_distance(np.diag(a)) <= 1e-9)


def test_translation_scale_equivariance():
    gen = np.random.default_rng(1)
    a = gen.standard_normal((3, 3)) + 1j * gen.standard_normal((3, 3))
    alpha, beta = 2.5, 1.0 - 2.0j
    p1 = numerical_range_boundary(alpha * a + beta * np.eye(3), 180)
    p0 = numerical_range_boundary(a, 180)
    np.testing.assert_allclose(p1.vertices, alpha * p0.vertices + beta, atol=1e-9)


def test_convexity_of_sweep_vertices():
    gen = np.random.default_rng(2)
    a = gen.standard_normal((4, 4)) + 1j * gen.standard_normal((4, 4))
    v = numerical_range_boundary(a, 360).vertices
    e = np.diff(np.concatenate([v, v[:1]]))
    cross = (e.real * np.roll(e, -1).imag - e.imag * np.roll(e, -1).real)
    scale = np.max(np.abs(v))
    assert np.min(cross) >= -1e-12 * scale**2


def test_area_monotone_in_angles():
    gen = np.random.default_rng(3)
    a = gen.standard_normal((4, 4)) + 1j * gen.standard_normal((4, 4))
    areas = [numerical_range_boundary(a, n).area() for n in (90, 180, 360)]
    assert areas[0] <= areas[1] + 1e-12 <= areas[2] + 2e-12


def test_numerical_range_errors():
    with pytest.raises(ValueError, match="angles"):
        numerical_range_boundary(np.eye(2), 2)


def test_restricted_support_single_cell():
    hist = engine.estimate_shadow(np.eye(3), sampling.full_complex(3), 5000, rng=4)
    mask = restricted_support(hist)
    assert int(mask.sum()) == 1


def test_support_mask_inside_range_polygon():
    a = catalog.get("B4b").matrix
    poly = numerical_range_boundary(a, 360)
    hist = engine.estimate_shadow(a, sampling.full_complex(4), 50_000, rng=5)
    mask = restricted_support(hist)
    g = hist.grid
    dx = (g.re_max - g.re_min) / g.nx
    dy = (g.im_max - g.im_min) / g.ny
    ys, xs = np.nonzero(mask)
    centers = (g.re_min + (xs + 0.5) * dx) + 1j * (g.im_min + (ys + 0.5) * dy)
    # cell centers may be off the range by at most a cell diagonal
    assert np.all(poly.signed_distance(centers) <= np.hypot(dx, dy))


def test_b4a_hull_of_two_ellipses_with_four_flats():
    # B4a is permutation-equivalent to a direct sum of two 2x2 blocks whose
    # ranges are intersecting ellipses (foci +-1 and +-i); the hull boundary
    # therefore consists of four ellipse arcs joined by four straight
    # bitangent segments, which the sweep renders as long polygon edges
    b4a = catalog.get("B4a").matrix
    poly = numerical_range_boundary(b4a, 720)
    v = poly.vertices
    edges = np.diff(np.concatenate([v, v[:1]]))
    lengths = np.abs(edges)
    long_idx = sorted(np.nonzero(lengths > 20 * np.median(lengths))[0])
    groups = []
    for k in long_idx:
        if groups and k == groups[-1][-1] + 1:
            groups[-1].append(k)
        else:
            groups.append([k])
    assert len(groups) == 4
    ell1 = numerical_range_boundary(b4a[np.ix_([0, 2], [0, 2])], 2880).vertices
    ell2 = numerical_range_boundary(b4a[np.ix_([1, 3], [1, 3])], 2880).vertices
    for grp in groups:
        a = v[grp[0]]
        b = v[(grp[-1] + 1) % v.size]
        d1 = min(np.min(np.abs(a - ell1)), np.min(np.abs(b - ell1)))
        d2 = min(np.min(np.abs(a - ell2)), np.min(np.abs(b - ell2)))
        # each flat connects one ellipse to the other
        assert d1 <= 0.01 and d2 <= 0.01


def test_minkowski_point_factor():
    point = numerical_range_boundary(np.array([[1.0]]), 90)
    q = numerical_range_boundary(np.diag([1.0, 1j]), 90)
    cloud = minkowski_product(point, q, 64)
    ref = minkowski_product(q, point, 64)
    np.testing.assert_allclose(np.sort_complex(cloud), np.sort_complex(ref), atol=1e-12)
    assert np.max(np.abs(np.imag(cloud / np.where(cloud == 0, 1, cloud)))) <= 1e-12


def test_minkowski_disks():
    r = 0.7
    disk = numerical_range_boundary(np.array([[0.0, 2 * r], [0.0, 0.0]]), 360)
    cloud = minkowski_product(disk, disk, 4096)
    assert np.max(np.abs(cloud)) <= r**2 + 1e-9
    assert np.max(np.abs(cloud)) >= r**2 - 1e-6


def test_minkowski_segments():
    seg = numerical_range_boundary(np.diag([0.0, 1.0]), 360)
    cloud = minkowski_product(seg, seg, 1024)
    assert np.max(np.abs(cloud.imag)) <= 1e-10
    assert np.all(cloud.real >= -1e-10)
    assert np.all(cloud.real <= 1.0 + 1e-10)
    with pytest.raises(ValueError, match="positive"):
        minkowski_product(seg, seg, 0)


def test_polygon_csv_and_mask_pgm(tmp_path):
    poly = numerical_range_boundary(catalog.get("A2").matrix, 90)
    csv_path = tmp_path / "poly.csv"
    polygon_to_csv(poly, csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) == 91
    mask = np.zeros((4, 6), dtype=bool)
    mask[1, 2] = True
    pgm_path = tmp_path / "mask.pgm"
    mask_to_pgm(mask, pgm_path)
    content = pgm_path.read_text().splitlines()
    assert content[0] == "P2"
    assert content[1] == "6 4"
    # top image row corresponds to the highest-im mask row
    assert content[3 + (3 - 1)].split()[2] == "255"
