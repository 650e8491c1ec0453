"""Two-qubit noisy dynamics: channel structure, separability, trajectories."""

import numpy as np
import pytest
from scipy.linalg import expm

from numshadow import catalog
from numshadow.dynamics import (
    DynamicsConfig,
    apply_channel,
    bell_state,
    count_transitions,
    depolarizing_kraus,
    entangling_unitary,
    is_separable_2x2,
    step,
    trajectory,
    trajectory_to_csv,
)
from numshadow.linalg import SIGMA_X, SIGMA_Y, check_density, kron, partial_trace, purity
from numshadow.ranges import numerical_range_boundary


def random_density(gen, d=4):
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_bell_state_projector():
    rho = bell_state()
    assert np.trace(rho) == pytest.approx(1.0)
    np.testing.assert_allclose(rho @ rho, rho, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, (2, 2), "B"), np.eye(2) / 2, atol=1e-12)


def test_bell_partial_transpose_spectrum():
    # hand diagonalization: eigenvalues {1/2, 1/2, 1/2, -1/2}
    sep, low = is_separable_2x2(bell_state())
    assert not sep
    assert low == pytest.approx(-0.5, abs=1e-12)


def test_entangling_unitary_closed_form():
    for alpha in (0.0, 0.1, 0.7, 2.0):
        u = entangling_unitary(alpha)
        ref = expm(1j * alpha * kron(SIGMA_X, SIGMA_Y))
        np.testing.assert_allclose(u, ref, atol=1e-12)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)


def test_kraus_completeness():
    for beta in (0.0, 0.03, 0.5, 0.75):
        ops = depolarizing_kraus(beta)
        total = sum(k.conj().T @ k for k in ops)
        np.testing.assert_allclose(total, np.eye(4), atol=1e-14)
    with pytest.raises(ValueError, match="beta"):
        depolarizing_kraus(0.76)
    with pytest.raises(ValueError, match="beta"):
        depolarizing_kraus(-0.01)


def test_step_preserves_density_invariants():
    gen = np.random.default_rng(0)
    cfg = DynamicsConfig(alpha=0.3, beta=0.2, steps=5, observable=catalog.get("X1").matrix)
    rho = random_density(gen)
    for _ in range(5):
        rho = step(rho, cfg)
        check_density(rho)


def test_unitary_step_preserves_purity():
    gen = np.random.default_rng(1)
    cfg = DynamicsConfig(alpha=0.4, beta=0.0, steps=1, observable=catalog.get("X1").matrix)
    rho = random_density(gen)
    assert purity(step(rho, cfg)) == pytest.approx(purity(rho), abs=1e-12)


def test_full_depolarization_twirls_second_qubit():
    gen = np.random.default_rng(2)
    rho = random_density(gen)
    out = apply_channel(rho, depolarizing_kraus(0.75))
    expected = kron(partial_trace(rho, (2, 2), "B"), np.eye(2) / 2)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_is_separable_basics():
    sep, low = is_separable_2x2(np.eye(4) / 4)
    assert sep and low > 0
    with pytest.raises(ValueError, match="negative"):
        is_separable_2x2(np.diag([1.5, -0.5, 0.0, 0.0]))
    with pytest.raises(ValueError, match="two-qubit"):
        is_separable_2x2(np.eye(2) / 2)


def test_werner_family_boundary():
    # rho(p) = p Bell + (1-p) I/4 has minimal PT eigenvalue (1 - 3p)/4
    bell = bell_state()
    for p in (0.0, 0.2, 1 / 3, 0.5, 1.0):
        rho = p * bell + (1 - p) * np.eye(4) / 4
        sep, low = is_separable_2x2(rho, tol=1e-10)
        assert low == pytest.approx((1 - 3 * p) / 4, abs=1e-12)
        assert sep == (p <= 1 / 3 + 1e-9)


def test_trajectory_constant_without_dynamics():
    cfg = DynamicsConfig(alpha=0.0, beta=0.0, steps=10, observable=catalog.get("X1").matrix)
    pts = trajectory(cfg)
    assert len(pts) == 11
    z0 = pts[0].z
    for p in pts:
        assert p.z == pytest.approx(z0, abs=1e-12)
        assert p.purity == pytest.approx(1.0, abs=1e-12)


def test_trajectory_reference_run():
    cfg = DynamicsConfig(alpha=0.1, beta=0.03, steps=300, observable=catalog.get("X1").matrix)
    pts = trajectory(cfg)
    assert not pts[0].separable
    assert pts[0].min_pt_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    assert count_transitions(pts) >= 2
    assert all(0.0 < p.purity <= 1.0 + 1e-12 for p in pts)
    poly = numerical_range_boundary(cfg.observable, 720)
    zs = np.array([p.z for p in pts])
    assert np.max(poly.signed_distance(zs)) <= 1e-9


def test_unitary_trajectory_stays_pure():
    cfg = DynamicsConfig(alpha=0.1, beta=0.0, steps=50, observable=catalog.get("X2").matrix)
    pts = trajectory(cfg)
    assert all(p.purity == pytest.approx(1.0, abs=1e-10) for p in pts)


def test_classification_tolerance_stability():
    cfg = DynamicsConfig(alpha=0.1, beta=0.03, steps=200, observable=catalog.get("X1").matrix)
    pts = trajectory(cfg)
    for p in pts:
        strict = p.min_pt_eigenvalue >= -1e-13
        loose = p.min_pt_eigenvalue >= -1e-11
        if strict != loose:
            assert abs(p.min_pt_eigenvalue) < 1e-11


def test_config_validation():
    with pytest.raises(ValueError, match="beta"):
        DynamicsConfig(beta=0.9)
    with pytest.raises(ValueError, match="steps"):
        DynamicsConfig(steps=0)
    with pytest.raises(ValueError, match="4x4"):
        DynamicsConfig(observable=np.eye(2))


def test_trajectory_csv(tmp_path):
    cfg = DynamicsConfig(steps=3, observable=catalog.get("X1").matrix)
    pts = trajectory(cfg)
    path = tmp_path / "traj.csv"
    trajectory_to_csv(pts, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,re_z,im_z,separable,purity,min_pt_eig"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "0"
    assert first[3] == "0"  # Bell state is entangled
