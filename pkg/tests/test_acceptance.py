"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Statistical criteria run at their stated sample counts with fixed seeds, so
the suite is deterministic. Standard errors come from the samples themselves
(jackknife for variances).
"""

import math
import time

import numpy as np
import pytest
from scipy import ndimage
from scipy.integrate import quad

from numshadow import backend, catalog, dynamics, engine, moments, sampling
from numshadow.engine import (
    diag_fast_sample,
    estimate_shadow,
    histogram_1d,
    histogram_to_csv,
    moment_estimate,
    sample_values,
    total_variation,
)
from numshadow.ranges import numerical_range_boundary
from numshadow.sampling import (
    RngStream,
    full_complex,
    full_real,
    haar_unitary_batch,
    max_entangled,
    product,
    sample_batch,
)

N_MC = 1_000_000


def report(num, desc, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {desc} {detail}".rstrip())
    assert ok, f"criterion {num}: {desc} {detail}"


def random_matrices(count, seed, d=4):
    gen = np.random.default_rng(np.random.SeedSequence(seed))
    return [gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d)) for _ in range(count)]


@pytest.fixture(scope="module")
def separable_mc():
    """Shared MC run over product states for criteria 1 and 2."""
    results = []
    for k, x in enumerate(random_matrices(10, seed=1000)):
        t0 = time.time()
        est = engine.estimate_moments(x, product((2, 2)), N_MC, rng=RngStream(1, k))
        results.append((x, est, time.time() - t0))
    return results


def test_criterion_1_separable_mean(separable_mc):
    worst_z = 0.0
    max_t = 0.0
    for x, est, elapsed in separable_mc:
        mean = moments.separable_moments(x, 2).mean
        worst_z = max(worst_z, abs(est.mean - mean) / est.std_error_mean)
        max_t = max(max_t, elapsed)
    ok = worst_z <= 3.0 and max_t <= 10.0
    report(1, "separable mean law (10 random 4x4, 1e6 samples)", ok,
           f"worst |z|={worst_z:.2f}, max runtime {max_t:.2f}s")


def test_criterion_2_separable_variance(separable_mc):
    worst_z = 0.0
    for x, est, _ in separable_mc:
        var = moments.separable_moments(x, 2).variance
        worst_z = max(worst_z, abs(est.variance - var) / est.std_error_var)
    worked = moments.separable_moments(np.diag([1.0, 2.0, 3.0, 4.0]), 2).variance
    ok = worst_z <= 3.0 and abs(worked - 5.0 / 12.0) <= 1e-12
    report(2, "separable variance law; diag(1,2,3,4) constant 5/12", ok,
           f"worst |z|={worst_z:.2f}, constant diff={abs(worked - 5 / 12):.1e}")


def test_criterion_3_entangled_variance():
    worst_z = 0.0
    for k, x in enumerate(random_matrices(5, seed=1003)):
        est = engine.estimate_moments(x, max_entangled(2), N_MC, rng=RngStream(3, k))
        var = moments.entangled_moments(x, 2).variance
        worst_z = max(worst_z, abs(est.variance - var) / est.std_error_var)
    x0 = np.diag([1.0, 0.0, 0.0, 1.0])
    exact = moments.entangled_moments(x0, 2).variance
    shortcut = moments.entangled_variance_diag_2x2(x0)
    ok = (worst_z <= 3.0 and abs(exact - 1.0 / 12.0) <= 1e-12
          and abs(shortcut - exact) <= 1e-12)
    report(3, "entangled variance law; diag(1,0,0,1) = 1/12 with 2x2 shortcut", ok,
           f"worst |z|={worst_z:.2f}")


def test_criterion_4_reduction_of_entangled_shadow():
    x4 = np.diag([1.0, 0.0, 0.0, 1.0])
    y2 = moments.reduced_matrix_y(x4)
    z_ent = sample_values(x4, max_entangled(2), N_MC, rng=RngStream(4, 0)).real
    z_std = sample_values(y2, full_complex(2), N_MC, rng=RngStream(4, 1)).real
    tv = total_variation(histogram_1d(z_ent, 0.0, 1.0, 200), histogram_1d(z_std, 0.0, 1.0, 200))
    est = moment_estimate(z_std.astype(complex))
    z_var = abs(est.variance - 1.0 / 12.0) / est.std_error_var
    ok = tv <= 0.01 and z_var <= 3.0
    report(4, "entangled shadow of diag(1,0,0,1) equals shadow of diag(1,0)", ok,
           f"tv={tv:.4f}, uniform variance |z|={z_var:.2f}")


def test_criterion_5_g3_suite():
    spec = [1.0, 0.0, -1.0]
    z = diag_fast_sample(spec, "B", N_MC, rng=RngStream(5, 0)).real
    edges = np.linspace(-1.0, 1.0, 201)
    analytic = np.array([
        quad(moments.g3_density, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])
    ])
    tv = total_variation(histogram_1d(z, -1.0, 1.0, 200), analytic)
    moment_err = 0.0
    for m in range(0, 6):
        quadrature = sum(
            quad(lambda t, p=2 * m: t**p * moments.g3_density(t), a, b, limit=200)[0]
            for a, b in ((-1.0, 0.0), (0.0, 1.0))
        )
        moment_err = max(moment_err, abs(quadrature - moments.g3_moment(2 * m)))
    worst_odd = 0.0
    for m in (1, 3, 5, 7, 9):
        vals = z**m
        worst_odd = max(worst_odd, abs(vals.mean()) / (vals.std(ddof=1) / math.sqrt(z.size)))
    ok = (tv <= 0.01 and moment_err <= 1e-6 and worst_odd <= 3.0
          and abs(moments.g3_moment(2) - 4.0 / 15.0) <= 1e-12)
    report(5, "real shadow of diag(1,0,-1): density, even and odd moments", ok,
           f"tv={tv:.4f}, even moment err={moment_err:.1e}, worst odd |z|={worst_odd:.2f}")


def test_criterion_6_sphere_monomials():
    worst_z = 0.0
    checks = 0
    for dim in (2, 3, 4):
        gen = RngStream(6, dim).generator()
        x = gen.standard_normal((N_MC, dim))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        sq = x**2
        for total in range(1, 4):
            for beta in moments._compositions(total, dim):
                vals = np.prod(sq ** np.array(beta), axis=1)
                se = vals.std(ddof=1) / math.sqrt(N_MC)
                worst_z = max(worst_z, abs(vals.mean() - moments.sphere_monomial(beta, dim)) / se)
                checks += 1
    ok = worst_z <= 3.0
    report(6, f"sphere monomial averages, N in 2..4, |beta| <= 3 ({checks} checks)", ok,
           f"worst |z|={worst_z:.2f}")


def test_criterion_7_u3_monomials():
    gen = RngStream(7, 0).generator()
    b = np.empty((N_MC, 4))
    done = 0
    while done < N_MC:
        take = min(engine.DEFAULT_CHUNK, N_MC - done)
        u = haar_unitary_batch(3, take, gen)
        b[done : done + take] = np.abs(u[:, :2, :2].reshape(take, 4)) ** 2
        done += take
    worst_z = 0.0
    checks = 0
    for total in range(1, 4):
        for expo in moments._compositions(total, 4):
            vals = np.prod(b ** np.array(expo), axis=1)
            se = vals.std(ddof=1) / math.sqrt(N_MC)
            worst_z = max(worst_z, abs(vals.mean() - moments.u3_monomial_integral(*expo)) / se)
            checks += 1
    exact = abs(moments.u3_monomial_integral(1, 0, 0, 1) - 1.0 / 8.0)
    ok = worst_z <= 3.0 and exact <= 1e-15
    report(7, f"Haar U(3) entry monomials, total degree <= 3 ({checks} checks)", ok,
           f"worst |z|={worst_z:.2f}, (1,0,0,1) diff={exact:.1e}")


def test_criterion_8_bell_orbit_moments():
    gen = RngStream(8, 0).generator()
    ua = haar_unitary_batch(2, N_MC, gen)
    ub = haar_unitary_batch(2, N_MC, gen)
    seed_vec = np.zeros((2, 2), dtype=complex)
    seed_vec[0, 0] = seed_vec[1, 1] = 1.0 / math.sqrt(2.0)
    v = np.einsum("nai,nbj,ij->nab", ua, ub, seed_vec).reshape(N_MC, 4)
    q1 = np.abs(v[:, 0]) ** 2 + np.abs(v[:, 3]) ** 2
    q2 = 1.0 - q1
    worst_z = 0.0
    for total in range(0, 6):
        for k in range(total + 1):
            n_exp, k_exp = total - k, k
            vals = q1**n_exp * q2**k_exp
            se = vals.std(ddof=1) / math.sqrt(N_MC)
            if se == 0.0:
                continue  # the (0, 0) moment is identically 1
            ref = moments.bell_orbit_simplex_moment(n_exp, k_exp)
            worst_z = max(worst_z, abs(vals.mean() - ref) / se)
    ok = worst_z <= 3.0
    report(8, "entangled-orbit weight moments q1^n q2^k, n+k <= 5", ok,
           f"worst |z|={worst_z:.2f}")


def test_criterion_9_schmidt_interpolation():
    xs = random_matrices(5, seed=1009)
    worst_z = 0.0
    for j, lam in enumerate([(1.0, 0.0), (0.75, 0.25), (0.5, 0.5)]):
        states = sample_batch(sampling.schmidt(lam), N_MC, RngStream(9, j).generator())
        for x in xs:
            vals = np.abs(backend.quad_forms(x, states)) ** 2
            se = vals.std(ddof=1) / math.sqrt(N_MC)
            ref = moments.schmidt_second_moment(x, 2, lam)
            worst_z = max(worst_z, abs(vals.mean() - ref) / se)
    ok = worst_z <= 3.0
    report(9, "Schmidt-coefficient interpolation of the second moment", ok,
           f"worst |z|={worst_z:.2f}")


def test_criterion_10_variance_ratio():
    gen = np.random.default_rng(np.random.SeedSequence(1010))
    target = 5.0 / 3.0
    worst_rel = 0.0
    for k in range(3):
        q = haar_unitary_batch(4, 1, gen, field="real")[0]
        lam = gen.standard_normal(4) + 1j * gen.standard_normal(4)
        a = (q * lam) @ q.T
        vr = engine.estimate_moments(a, full_real(4), N_MC, rng=RngStream(10, 2 * k)).variance
        vc = engine.estimate_moments(a, full_complex(4), N_MC, rng=RngStream(10, 2 * k + 1)).variance
        worst_rel = max(worst_rel, abs(vr / vc - target) / target)
    ok = worst_rel <= 0.05
    report(10, "real/complex shadow variance ratio 2(N+1)/(N+2) = 5/3", ok,
           f"worst rel err={worst_rel:.3f}")


def test_criterion_11_u8_product_support_topology():
    u8 = catalog.get("U8").matrix
    hist = estimate_shadow(u8, product((2, 2, 2)), 10_000_000, rng=RngStream(11, 0))
    empty = ~(hist.counts > 0)
    labels, _ = ndimage.label(empty)
    iy, ix = hist.grid.cell_of(0.0)
    origin_label = labels[iy, ix]
    border = np.zeros_like(empty)
    border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
    enclosed = bool(empty[iy, ix]) and origin_label not in labels[border & empty]
    full = estimate_shadow(u8, full_complex(8), N_MC, grid=hist.grid, rng=RngStream(11, 1))
    occupied = full.counts[full.grid.cell_of(0.0)] > 0
    ok = enclosed and bool(occupied)
    report(11, "product shadow of the three-qubit diagonal unitary has a hole at 0", ok,
           f"hole cells={int((labels == origin_label).sum())}, full shadow occupies 0: {occupied}")


def test_criterion_12_dynamics():
    x1 = catalog.get("X1").matrix
    t0 = time.time()
    pts = dynamics.trajectory(dynamics.DynamicsConfig(0.1, 0.03, 300, x1))
    elapsed = time.time() - t0
    poly = numerical_range_boundary(x1, 720)
    zs = np.array([p.z for p in pts])
    transitions = dynamics.count_transitions(pts)
    ok = (not pts[0].separable
          and abs(pts[0].min_pt_eigenvalue + 0.5) <= 1e-12
          and transitions >= 2
          and float(np.max(poly.signed_distance(zs))) <= 1e-9
          and elapsed <= 1.0)
    report(12, "dynamics: initial Bell entangled, >= 2 transitions, inside W(X1)", ok,
           f"transitions={transitions}, runtime {elapsed:.3f}s")


def test_criterion_13_determinism_across_threads(tmp_path):
    x = catalog.get("B4e").matrix
    blobs = []
    n = 3 * engine.DEFAULT_CHUNK + 777
    for threads in (1, 4, 8):
        hist = estimate_shadow(x, product((2, 2)), n, rng=RngStream(13, 0), threads=threads)
        path = tmp_path / f"hist_t{threads}.csv"
        histogram_to_csv(hist, path)
        blobs.append(path.read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2]
    report(13, "bit-identical histogram CSVs across thread counts 1, 4, 8", ok)
