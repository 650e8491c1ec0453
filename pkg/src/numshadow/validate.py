"""Analytic-vs-Monte-Carlo validation suites.

Each suite compares sampled moments or densities against the closed forms in
:mod:`numshadow.moments`, reporting one record per check: the analytic value,
the MC estimate with standard error and z-score for statistical checks, or
the absolute deviation for deterministic identities. Statistical checks pass
at |z| <= 3; deterministic ones at the stated tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend, engine, moments, sampling


@dataclass
class CheckRecord:
    formula_id: str
    inputs: dict
    analytic: object
    mc_estimate: object = None
    mc_stderr: float | None = None
    z_score: float | None = None
    passed: bool = True
    detail: str = ""

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, (np.floating, np.integer)):
                return float(v)
            return v

        return {
            "formula_id": self.formula_id,
            "inputs": {k: enc(v) for k, v in self.inputs.items()},
            "analytic": enc(self.analytic),
            "mc_estimate": enc(self.mc_estimate),
            "mc_stderr": enc(self.mc_stderr),
            "z_score": enc(self.z_score),
            "passed": bool(self.passed),
            "detail": self.detail,
        }


def _stat_check(formula_id, inputs, analytic, estimate, stderr) -> CheckRecord:
    if stderr == 0:
        z = 0.0 if estimate == analytic else math.inf
    else:
        z = abs(estimate - analytic) / stderr
    return CheckRecord(formula_id, inputs, analytic, estimate, stderr, float(z), bool(z <= 3.0))


def _exact_check(formula_id, inputs, analytic, value, tol) -> CheckRecord:
    diff = abs(value - analytic)
    return CheckRecord(
        formula_id, inputs, analytic, value, None, None, bool(diff <= tol), f"|diff|={diff:.3e}"
    )


def _random_matrix(gen, d=4):
    return gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))


def suite_separable_moments(seed=0, n=1_000_000, threads=1, n_matrices=10):
    """Mean and variance of product-state shadows of random 4x4 operators."""
    gen = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(101,)))
    out = []
    restriction = sampling.product((2, 2))
    for k in range(n_matrices):
        x = _random_matrix(gen)
        report = moments.separable_moments(x, 2)
        est = engine.estimate_moments(x, restriction, n, rng=sampling.RngStream(seed, k), threads=threads)
        out.append(_stat_check("separable-mean", {"matrix": f"random-{k}", "n": n},
                               abs(report.mean), abs(est.mean),
                               max(est.std_error_mean, 1e-300)))
        out.append(_stat_check("separable-variance", {"matrix": f"random-{k}", "n": n},
                               report.variance, est.variance, max(est.std_error_var, 1e-300)))
    worked = moments.separable_moments(np.diag([1.0, 2.0, 3.0, 4.0]), 2)
    out.append(_exact_check("separable-variance", {"matrix": "diag(1,2,3,4)"},
                            5.0 / 12.0, worked.variance, 1e-12))
    return out


def suite_entangled_moments(seed=0, n=1_000_000, threads=1, n_matrices=5):
    """Variance of maximally entangled shadows vs the closed form."""
    gen = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(102,)))
    out = []
    restriction = sampling.max_entangled(2)
    for k in range(n_matrices):
        x = _random_matrix(gen)
        report = moments.entangled_moments(x, 2)
        est = engine.estimate_moments(x, restriction, n, rng=sampling.RngStream(seed, 50 + k), threads=threads)
        out.append(_stat_check("entangled-variance", {"matrix": f"random-{k}", "n": n},
                               report.variance, est.variance, max(est.std_error_var, 1e-300)))
    x = np.diag([1.0, 0.0, 0.0, 1.0])
    rep = moments.entangled_moments(x, 2)
    out.append(_exact_check("entangled-variance", {"matrix": "diag(1,0,0,1)"},
                            1.0 / 12.0, rep.variance, 1e-12))
    out.append(_exact_check("entangled-variance-2x2-shortcut", {"matrix": "diag(1,0,0,1)"},
                            rep.variance, moments.entangled_variance_diag_2x2(x), 1e-12))
    out.append(_exact_check("entangled-variance", {"matrix": "diag(1,2,3,4)"},
                            0.0, moments.entangled_moments(np.diag([1.0, 2, 3, 4]), 2).variance, 1e-12))
    return out


def suite_prop3(seed=0, n=1_000_000, threads=1):
    """Entangled shadow of diag(1,0,0,1) vs the standard shadow of diag(1,0)."""
    x4 = np.diag([1.0, 0.0, 0.0, 1.0])
    y2 = moments.reduced_matrix_y(x4)
    z_ent = engine.sample_values(x4, sampling.max_entangled(2), n,
                                 rng=sampling.RngStream(seed, 1), threads=threads).real
    z_std = engine.sample_values(y2, sampling.full_complex(2), n,
                                 rng=sampling.RngStream(seed, 2), threads=threads).real
    bins = 200
    tv = engine.total_variation(
        engine.histogram_1d(z_ent, 0.0, 1.0, bins), engine.histogram_1d(z_std, 0.0, 1.0, bins)
    )
    out = [CheckRecord("reduction-2x2-total-variation", {"n": n, "bins": bins}, 0.0,
                       tv, None, None, bool(tv <= 0.01), f"tv={tv:.4f}")]
    est = engine.moment_estimate(z_std.astype(complex))
    out.append(_stat_check("uniform-variance", {"matrix": "diag(1,0)", "n": n},
                           1.0 / 12.0, est.variance, max(est.std_error_var, 1e-300)))
    return out


def suite_g3(seed=0, n=1_000_000, threads=1):
    """Fast-path samples of diag(1,0,-1) vs the closed-form density and moments."""
    out = []
    for m in range(0, 11):
        closed = moments.g3_moment(m)
        series = moments.g3_moment_series(m)
        out.append(_exact_check("g3-moment-series", {"n": m}, closed, series, 1e-12))
    from scipy.integrate import quad

    for m in range(0, 11, 2):
        val = sum(
            quad(lambda t, m=m: t**m * moments.g3_density(t), a, b, limit=200)[0]
            for a, b in ((-1.0, 0.0), (0.0, 1.0))
        )
        out.append(_exact_check("g3-moment-quadrature", {"n": m}, moments.g3_moment(m), val, 1e-6))
    z = engine.diag_fast_sample([1.0, 0.0, -1.0], "B", n, rng=sampling.RngStream(seed, 3)).real
    bins = 200
    edges = np.linspace(-1.0, 1.0, bins + 1)
    analytic_mass = np.array([
        quad(moments.g3_density, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])
    ])
    tv = engine.total_variation(engine.histogram_1d(z, -1.0, 1.0, bins), analytic_mass)
    out.append(CheckRecord("g3-density-total-variation", {"n": n, "bins": bins}, 0.0, tv,
                           None, None, bool(tv <= 0.01), f"tv={tv:.4f}"))
    for m in (1, 3, 5):
        vals = z**m
        se = vals.std(ddof=1) / math.sqrt(n)
        out.append(_stat_check("g3-odd-moment", {"n": m}, 0.0, float(vals.mean()), se))
    return out


def suite_sphere(seed=0, n=1_000_000, threads=1):
    """Monomial averages over real unit spheres, N = 2..4, |beta| <= 3."""
    out = []
    for dim in (2, 3, 4):
        gen = sampling.RngStream(seed, 200 + dim).generator()
        x = gen.standard_normal((n, dim))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        sq = x**2
        for total in range(1, 4):
            for beta in moments._compositions(total, dim):
                vals = np.prod(sq ** np.array(beta), axis=1)
                se = vals.std(ddof=1) / math.sqrt(n)
                out.append(_stat_check("sphere-monomial", {"N": dim, "beta": list(beta)},
                                       moments.sphere_monomial(beta, dim), float(vals.mean()), se))
    return out


def suite_u3(seed=0, n=1_000_000, threads=1):
    """Monomials of squared moduli of Haar U(3) entries vs the closed form."""
    gen = sampling.RngStream(seed, 300).generator()
    b = np.empty((n, 4))
    done = 0
    while done < n:
        take = min(engine.DEFAULT_CHUNK, n - done)
        u = sampling.haar_unitary_batch(3, take, gen)
        sq = np.abs(u[:, :2, :2].reshape(take, 4)) ** 2
        b[done : done + take] = sq
        done += take
    out = [_exact_check("u3-monomial", {"exponents": [1, 0, 0, 1]}, 1.0 / 8.0,
                        moments.u3_monomial_integral(1, 0, 0, 1), 1e-12)]
    for total in range(1, 4):
        for expo in moments._compositions(total, 4):
            vals = np.prod(b ** np.array(expo), axis=1)
            se = vals.std(ddof=1) / math.sqrt(n)
            out.append(_stat_check("u3-monomial", {"exponents": list(expo)},
                                   moments.u3_monomial_integral(*expo), float(vals.mean()), se))
    return out


def _bell_orbit_weights(n, gen):
    """q1 = |v1|^2 + |v4|^2 for v = (U_A x U_B)(|00> + |11>)/sqrt(2)."""
    ua = sampling.haar_unitary_batch(2, n, gen)
    ub = sampling.haar_unitary_batch(2, n, gen)
    seed_vec = np.zeros((2, 2), dtype=complex)
    seed_vec[0, 0] = seed_vec[1, 1] = 1.0 / math.sqrt(2.0)
    v = np.einsum("nai,nbj,ij->nab", ua, ub, seed_vec).reshape(n, 4)
    q1 = np.abs(v[:, 0]) ** 2 + np.abs(v[:, 3]) ** 2
    return q1


def suite_bell_orbit(seed=0, n=1_000_000, threads=1):
    """Joint moments of the two-qubit entangled-orbit weights (q1, q2)."""
    gen = sampling.RngStream(seed, 400).generator()
    q1 = _bell_orbit_weights(n, gen)
    q2 = 1.0 - q1
    out = []
    for total in range(0, 6):
        for k in range(total + 1):
            a, bexp = total - k, k
            vals = q1**a * q2**bexp
            se = vals.std(ddof=1) / math.sqrt(n)
            out.append(_stat_check("bell-orbit-moment", {"n": a, "k": bexp},
                                   moments.bell_orbit_simplex_moment(a, bexp),
                                   float(vals.mean()), se))
    return out


def suite_schmidt(seed=0, n=1_000_000, threads=1, n_matrices=5):
    """Second moment over fixed-Schmidt-coefficient orbits: affine in purity."""
    gen = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(500,)))
    xs = [_random_matrix(gen) for _ in range(n_matrices)]
    out = []
    for j, lam in enumerate([(1.0, 0.0), (0.75, 0.25), (0.5, 0.5)]):
        restriction = sampling.schmidt(lam)
        stream = sampling.RngStream(seed, 510 + j)
        states = sampling.sample_batch(restriction, n, stream.generator())
        for k, x in enumerate(xs):
            vals = np.abs(backend.quad_forms(x, states)) ** 2
            se = vals.std(ddof=1) / math.sqrt(n)
            out.append(_stat_check("schmidt-second-moment",
                                   {"matrix": f"random-{k}", "lambda": list(lam)},
                                   moments.schmidt_second_moment(x, 2, lam),
                                   float(vals.mean()), se))
    x = xs[0]
    sep = moments.separable_moments(x, 2)
    ent = moments.entangled_moments(x, 2)
    out.append(_exact_check("schmidt-second-moment", {"lambda": [1, 0]},
                            sep.second_abs, moments.schmidt_second_moment(x, 2, (1.0, 0.0)), 1e-12))
    out.append(_exact_check("schmidt-second-moment", {"lambda": [0.5, 0.5]},
                            ent.second_abs, moments.schmidt_second_moment(x, 2, (0.5, 0.5)), 1e-12))
    return out


def suite_variance_ratio(seed=0, n=1_000_000, threads=1, n_matrices=3):
    """Real vs complex shadow variance ratio 2(N+1)/(N+2) for N = 4."""
    gen = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(600,)))
    out = []
    target = 2.0 * 5.0 / 6.0
    for k in range(n_matrices):
        q = sampling.haar_unitary_batch(4, 1, gen, field="real")[0]
        lam = gen.standard_normal(4) + 1j * gen.standard_normal(4)
        a = (q * lam) @ q.T
        vr = engine.estimate_moments(a, sampling.full_real(4), n,
                                     rng=sampling.RngStream(seed, 610 + k), threads=threads)
        vc = engine.estimate_moments(a, sampling.full_complex(4), n,
                                     rng=sampling.RngStream(seed, 630 + k), threads=threads)
        ratio = vr.variance / vc.variance
        rec = CheckRecord("real-complex-variance-ratio", {"matrix": f"random-{k}", "n": n},
                          target, ratio, None, None,
                          bool(abs(ratio - target) <= 0.05 * target),
                          f"ratio={ratio:.4f}")
        out.append(rec)
    return out


def suite_real_variance(seed=0, n=1_000_000, threads=1):
    """Real-shadow variance quadratic form (general eigenbasis) vs MC."""
    shift = np.roll(np.eye(3), 1, axis=0).astype(complex)  # cyclic permutation
    lam = np.exp(2j * np.pi * np.arange(3) / 3)
    v = moments.fourier_matrix(3)
    analytic = moments.real_shadow_variance(lam, v)
    z = engine.sample_values(shift, sampling.full_real(3), n,
                             rng=sampling.RngStream(seed, 700), threads=threads)
    mean = complex(np.trace(shift)) / 3.0
    vals = np.abs(z - mean) ** 2
    se = vals.std(ddof=1) / math.sqrt(n)
    out = [_stat_check("real-variance-general", {"matrix": "cyclic-shift-3"},
                       analytic, float(vals.mean()), se)]
    out.append(_exact_check("real-variance-general", {"matrix": "cyclic-shift-3"},
                            0.2, analytic, 1e-12))
    return out


def suite_second_moment_3x3(seed=0, n=1_000_000, threads=1):
    """Second moment of maximally entangled 3x3 shadows of diagonal operators."""
    gen = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(800,)))
    c = gen.standard_normal((3, 3))
    c -= c.sum() / 9.0
    x = np.diag(c.reshape(-1)).astype(complex)
    analytic = moments.entangled_second_moment_3x3(c)
    out = [_exact_check("second-moment-maxent-3x3", {"matrix": "random-traceless"},
                        moments.entangled_moments(x, 3).second_abs, analytic, 1e-12)]
    z = engine.sample_values(x, sampling.max_entangled(3), n,
                             rng=sampling.RngStream(seed, 810), threads=threads).real
    vals = z**2
    se = vals.std(ddof=1) / math.sqrt(n)
    out.append(_stat_check("second-moment-maxent-3x3", {"matrix": "random-traceless", "n": n},
                           analytic, float(vals.mean()), se))
    return out


def suite_fastpath(seed=0, n=100_000, threads=1):
    """Fast simplex sampling agrees with state sampling for diagonal operators."""
    crit = engine.ks_critical(n, n)
    cases = [
        ("A", np.array([1.0, 0.4 + 0.3j, -1.0]), sampling.full_complex(3), None),
        ("B", np.array([1.0, 0.0, -1.0]), sampling.full_real(3), None),
        ("C", np.array([1.0, 1j, -1.0, -1j]), sampling.product((2, 2)), (2, 2)),
        ("D", np.array([1.0, 1j, -1.0, -1j]), sampling.product((2, 2), "real"), (2, 2)),
    ]
    out = []
    for label, spec, restriction, dims in cases:
        fast = engine.diag_fast_sample(spec, label, n, rng=sampling.RngStream(seed, 900), dims=dims)
        slow = engine.sample_values(np.diag(spec), restriction, n,
                                    rng=sampling.RngStream(seed, 901), threads=threads)
        stat = max(engine.ks_statistic(fast.real, slow.real),
                   engine.ks_statistic(fast.imag, slow.imag))
        out.append(CheckRecord("fastpath-ks", {"case": label, "n": n}, 0.0, stat, None, None,
                               bool(stat <= crit), f"ks={stat:.5f} crit={crit:.5f}"))
    return out


SUITES = {
    "moments-separable": suite_separable_moments,
    "moments-entangled": suite_entangled_moments,
    "prop3": suite_prop3,
    "g3": suite_g3,
    "sphere": suite_sphere,
    "u3": suite_u3,
    "bell-orbit": suite_bell_orbit,
    "schmidt": suite_schmidt,
    "variance-ratio": suite_variance_ratio,
    "real-variance": suite_real_variance,
    "second-moment-3x3": suite_second_moment_3x3,
    "fastpath": suite_fastpath,
}


def run_suite(name: str, seed: int = 0, n: int = 1_000_000, threads: int = 1):
    """Run one suite (or 'all'); returns (records, all_passed)."""
    if name == "all":
        records = []
        for fn in SUITES.values():
            records.extend(fn(seed=seed, n=n, threads=threads))
    elif name in SUITES:
        records = SUITES[name](seed=seed, n=n, threads=threads)
    else:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}, all")
    return records, all(r.passed for r in records)
