"""Closed-form moments and densities of restricted shadows.

Everything here is exact (up to floating point): hypergeometric series,
moments of monomials on real spheres and on U(3), the mean/variance laws for
separable and maximally entangled shadows of an operator on an NxN product
space, the quadratic-form variance of real shadows, and the density/CDF of
the real shadow of a diagonal operator. The Monte Carlo engine is validated
against these formulas.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import digamma

from .linalg import as_matrix, is_unitary, partial_trace

_EULER_GAMMA = 0.5772156649015328606


def pochhammer(x: float, n: int) -> float:
    """Shifted factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1.0
    if x > 0 and n > 20:
        return math.exp(math.lgamma(x + n) - math.lgamma(x))
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def _nonpositive_int(x) -> bool:
    return float(x).is_integer() and x <= 0


def _series_2f1(a, b, c, x, tol, max_terms):
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        if _nonpositive_int(c + k):
            raise ValueError(f"2F1 pole: c = {c} hits a nonpositive integer")
        term *= (a + k) * (b + k) / (c + k) * x / (k + 1)
        total += term
        if abs(term) <= tol * max(abs(total), 1.0):
            return total
    raise ValueError(f"2F1 series did not converge at x = {x}")


def _log_case_2f1(a, b, x, tol, max_terms):
    # c = a + b: expansion in powers of (1 - x) with logarithmic terms.
    w = 1.0 - x
    lw = math.log(w)
    pref = math.exp(math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
    psi_n = -_EULER_GAMMA
    psi_a = float(digamma(a))
    psi_b = float(digamma(b))
    coeff = 1.0
    total = 0.0
    for n in range(max_terms):
        term = coeff * (2 * psi_n - psi_a - psi_b - lw)
        total += term
        if n > 2 and abs(term) <= tol * max(abs(total), 1.0):
            return pref * total
        coeff *= (a + n) * (b + n) / ((n + 1) ** 2) * w
        psi_n += 1.0 / (n + 1)
        psi_a += 1.0 / (a + n)
        psi_b += 1.0 / (b + n)
    raise ValueError(f"2F1 near-unit-argument series did not converge at x = {x}")


def hyp2f1(a: float, b: float, c: float, x: float,
           tol: float = 1e-15, max_terms: int = 500_000) -> float:
    """Gauss hypergeometric series 2F1(a, b; c; x) for real parameters.

    Terminating series are summed exactly (any x). Otherwise x < 1 is
    required; negative arguments are mapped into [0, 1) and arguments close
    to 1 use either the Euler transformation or, when c = a + b, the
    logarithmic expansion around the unit argument.
    """
    if _nonpositive_int(c) and not (
        (_nonpositive_int(a) and a > c) or (_nonpositive_int(b) and b > c)
    ):
        raise ValueError(f"2F1 undefined for c = {c}")
    for top in (a, b):
        if _nonpositive_int(top):
            n_max = int(round(-top))
            term = 1.0
            total = 1.0
            for k in range(n_max):
                term *= (a + k) * (b + k) / (c + k) * x / (k + 1)
                total += term
            return total
    if x >= 1.0:
        raise ValueError(f"non-terminating 2F1 diverges for x = {x} >= 1")
    if x < 0.0:
        # Pfaff transformation onto x/(x-1) in [0, 1).
        return (1.0 - x) ** (-a) * hyp2f1(a, c - b, c, x / (x - 1.0), tol, max_terms)
    if 1.0 - x < 0.1:
        s = c - a - b
        if s == 0.0:
            return _log_case_2f1(a, b, x, tol, max_terms)
        if s > 0.0:
            return (1.0 - x) ** s * _series_2f1(c - a, c - b, c, x, tol, max_terms)
    return _series_2f1(a, b, c, x, tol, max_terms)


def hyp4f3(tops, bottoms, x: float = 1.0) -> float:
    """Terminating 4F3 series; some top parameter must be a nonpositive integer."""
    tops = [float(t) for t in tops]
    bottoms = [float(b) for b in bottoms]
    if len(tops) != 4 or len(bottoms) != 3:
        raise ValueError("4F3 needs 4 top and 3 bottom parameters")
    stops = [int(round(-t)) for t in tops if _nonpositive_int(t)]
    if not stops:
        raise ValueError("non-terminating 4F3 is not supported")
    n_max = min(stops)
    term = 1.0
    total = 1.0
    for k in range(n_max):
        den = 1.0
        for b in bottoms:
            if b + k == 0.0:
                raise ValueError("4F3 bottom parameter hits zero before termination")
            den *= b + k
        num = 1.0
        for t in tops:
            num *= t + k
        term *= num / den * x / (k + 1)
        total += term
    return total


def hypergeometric(kind: str, params, x: float) -> float:
    """Dispatcher: kind '2F1' takes params (a, b, c); '4F3' takes (tops, bottoms)."""
    if kind == "2F1":
        a, b, c = params
        return hyp2f1(a, b, c, x)
    if kind == "4F3":
        tops, bottoms = params
        return hyp4f3(tops, bottoms, x)
    raise ValueError(f"unknown hypergeometric kind {kind!r}")


@dataclass(frozen=True)
class MomentReport:
    """Exact mean / second absolute moment / variance of a shadow."""

    mean: complex
    second_abs: float
    variance: float
    exact: bool
    formula_id: str


def matrix_functionals(x, n: int):
    """The four invariants |tr X|^2, ||tr_A X||^2, ||tr_B X||^2, ||X||^2 (HS norms)."""
    m = as_matrix(x)
    if m.shape[0] != n * n:
        raise ValueError(f"dimension {m.shape[0]} is not {n}x{n}")
    t = abs(np.trace(m)) ** 2
    ta = partial_trace(m, (n, n), "A")
    tb = partial_trace(m, (n, n), "B")
    a2 = float(np.sum(np.abs(ta) ** 2))
    b2 = float(np.sum(np.abs(tb) ** 2))
    f2 = float(np.sum(np.abs(m) ** 2))
    return float(t), a2, b2, f2


def separable_moments(x, n: int | None = None) -> MomentReport:
    """Mean and variance of the shadow over product states of an NxN system."""
    m = as_matrix(x)
    if n is None:
        n = math.isqrt(m.shape[0])
    if n * n != m.shape[0]:
        raise ValueError(f"dimension {m.shape[0]} is not a perfect square")
    t, a2, b2, f2 = matrix_functionals(m, n)
    mean = complex(np.trace(m)) / n**2
    scale = 1.0 / (n**2 * (n + 1) ** 2)
    second = scale * (t + a2 + b2 + f2)
    var = scale * (-(2 * n + 1) / n**2 * t + a2 + b2 + f2)
    return MomentReport(mean, second, var, True, "separable-moments")


def entangled_moments(x, n: int | None = None) -> MomentReport:
    """Mean and variance of the shadow over maximally entangled states."""
    m = as_matrix(x)
    if n is None:
        n = math.isqrt(m.shape[0])
    if n * n != m.shape[0]:
        raise ValueError(f"dimension {m.shape[0]} is not a perfect square")
    t, a2, b2, f2 = matrix_functionals(m, n)
    mean = complex(np.trace(m)) / n**2
    second = (f2 + t) / (n**2 * (n**2 - 1)) - (a2 + b2) / (n**3 * (n**2 - 1))
    var = (f2 + t / n**2) / (n**2 * (n**2 - 1)) - (a2 + b2) / (n**3 * (n**2 - 1))
    return MomentReport(mean, second, var, True, "entangled-moments")


def entangled_variance_diag_2x2(x) -> float:
    """Two-qubit shortcut for a diagonal operator: |d1 + d4 - d2 - d3|^2 / 48."""
    m = as_matrix(x)
    if m.shape[0] != 4 or np.max(np.abs(m - np.diag(np.diag(m)))) > 0:
        raise ValueError("expected a diagonal 4x4 matrix")
    d = np.diag(m)
    return float(abs(d[0] + d[3] - d[1] - d[2]) ** 2) / 48.0


def reduced_matrix_y(x) -> np.ndarray:
    """Order-two reduction of a diagonal order-four operator whose standard
    shadow equals the maximally entangled shadow of the input."""
    m = as_matrix(x)
    if m.shape[0] != 4:
        raise ValueError("expected a 4x4 matrix")
    if np.max(np.abs(m - np.diag(np.diag(m)))) > 0:
        raise ValueError("expected a diagonal matrix")
    d = np.diag(m)
    return np.diag([(d[0] + d[3]) / 2, (d[1] + d[2]) / 2])


@dataclass(frozen=True)
class CollinsSniadyCoeffs:
    """Second-moment contraction weights for twirl averages over U(N) x U(N).

    c1..c4 weight the four index pairings; together with the reduced-state
    purity they determine E(z zbar) for any bipartite pure state.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    trace_sq: float
    tr_a_sq: float
    tr_b_sq: float
    frobenius_sq: float


def collins_sniady_coeffs(x, n: int | None = None) -> CollinsSniadyCoeffs:
    m = as_matrix(x)
    if n is None:
        n = math.isqrt(m.shape[0])
    if n * n != m.shape[0]:
        raise ValueError(f"dimension {m.shape[0]} is not a perfect square")
    if n == 1:
        raise ValueError("n must be at least 2")
    t, a2, b2, f2 = matrix_functionals(m, n)
    w = 1.0 / (n**2 - 1) ** 2
    c1 = w * (t - a2 / n - b2 / n + f2 / n**2)
    c2 = w * (b2 - f2 / n - t / n + a2 / n**2)
    c3 = w * (a2 - f2 / n - t / n + b2 / n**2)
    c4 = w * (f2 - a2 / n - b2 / n + t / n**2)
    return CollinsSniadyCoeffs(c1, c2, c3, c4, t, a2, b2, f2)


def schmidt_second_moment(x, n: int, lam) -> float:
    """E(z zbar) over local-unitary orbits of states with fixed Schmidt
    coefficients lam; depends on lam only through the purity sum(lam^2)."""
    lam = np.asarray(lam, dtype=float)
    if lam.size != n or abs(lam.sum() - 1.0) > 1e-12 or np.any(lam < 0):
        raise ValueError("Schmidt coefficients must be nonnegative and sum to 1")
    c = collins_sniady_coeffs(x, n)
    purity = float(np.sum(lam**2))
    return c.c1 + c.c4 + (c.c2 + c.c3) * purity


def complex_shadow_variance(eigenvalues) -> float:
    """Variance of the full complex shadow of a normal operator with the
    given spectrum: sum |lam - m|^2 / (N (N+1))."""
    lam = np.asarray(eigenvalues, dtype=complex).ravel()
    if lam.size == 0:
        raise ValueError("empty spectrum")
    n = lam.size
    m = lam.mean()
    return float(np.sum(np.abs(lam - m) ** 2)) / (n * (n + 1))


def unistochastic_c(v) -> np.ndarray:
    """Entrywise |(V^T V)_ij|^2 for unitary V: a symmetric doubly stochastic matrix."""
    m = as_matrix(v)
    if not is_unitary(m, 1e-10):
        raise ValueError("V must be unitary")
    w = m.T @ m
    return np.abs(w) ** 2


def real_shadow_variance(eigenvalues, v=None) -> float:
    """Variance of the real shadow of a normal operator A = V diag(lam) V^+.

    With v None (or 'orthogonal') the eigenbasis is real orthogonal and the
    variance is 2 sum |lam - m|^2 / (N (N+2)); otherwise the quadratic form
    sum (lam_i - m) conj(lam_j - m) (delta_ij + |(V^T V)_ij|^2) / (N (N+2)).
    """
    lam = np.asarray(eigenvalues, dtype=complex).ravel()
    if lam.size == 0:
        raise ValueError("empty spectrum")
    n = lam.size
    m = lam.mean()
    d = lam - m
    if v is None or (isinstance(v, str) and v == "orthogonal"):
        return 2.0 * float(np.sum(np.abs(d) ** 2)) / (n * (n + 2))
    c = unistochastic_c(v)
    form = np.einsum("i,j,ij->", d, d.conj(), np.eye(n) + c)
    return float(form.real) / (n * (n + 2))


def fourier_matrix(n: int) -> np.ndarray:
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / math.sqrt(n)


def g3_density(t: float) -> float:
    """Density of the real shadow of diag(1, 0, -1); even, supported on [-1, 1],
    with an integrable logarithmic divergence at t = 0."""
    at = abs(float(t))
    if at > 1.0:
        return 0.0
    if at == 0.0:
        raise ValueError("density diverges at t = 0")
    if at == 1.0:
        return 1.0 / (2.0 * math.sqrt(2.0))
    return hyp2f1(0.5, 0.5, 1.0, (at - 1.0) / (2.0 * at)) / (2.0 * math.sqrt(2.0 * at))


def g3_moment(n: int) -> float:
    """n-th moment of the diag(1, 0, -1) real-shadow density; zero for odd n,
    (2m+2)(2m+4)...(4m) / ((2m+1)(2m+3)...(4m+1)) for n = 2m."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n % 2 == 1:
        return 0.0
    m = n // 2
    num = 1
    for j in range(1, m + 1):
        num *= 2 * m + 2 * j
    den = 1
    for j in range(0, m + 1):
        den *= 2 * m + 1 + 2 * j
    return num / den


def g3_moment_series(n: int) -> float:
    """Same moment evaluated as the alternating binomial sum of shifted factorials."""
    den = pochhammer(1.5, n)
    total = 0.0
    for k in range(n + 1):
        total += math.comb(n, k) * (-1) ** k * pochhammer(0.5, n - k) * pochhammer(0.5, k)
    return total / den


def real_shadow_cdf(eigenvalues, t: float) -> float:
    """CDF of sum_k a_k x_k^2 for x uniform on the real unit sphere.

    Evaluated by quadrature of the standard single-integral representation;
    requires distinct eigenvalues (ties are perturbed by 1e-12 with a warning).
    """
    a = np.sort(np.asarray(eigenvalues, dtype=float).ravel())[::-1]
    if a.size == 0:
        raise ValueError("empty spectrum")
    if a.size == 1:
        return 0.0 if t < a[0] else 1.0
    if np.any(np.diff(a) == 0):
        warnings.warn("tied eigenvalues perturbed by 1e-12 for the CDF quadrature")
        for i in range(1, a.size):
            if a[i] >= a[i - 1]:
                a[i] = a[i - 1] - 1e-12
    if t <= a[-1]:
        return 0.0
    if t >= a[0]:
        return 1.0
    d = a - t

    def integrand(phi):
        u = math.tan(phi)
        du = d * u
        s = math.sin(0.5 * float(np.sum(np.arctan(du))))
        p = float(np.prod((1.0 + du**2) ** 0.25))
        return s / (u * p) * (1.0 + u * u)

    val, _ = quad(integrand, 0.0, math.pi / 2, limit=300, epsabs=1e-10, epsrel=1e-10)
    return 0.5 - val / math.pi


def sphere_monomial(beta, n: int) -> float:
    """Average of x^(2 beta) over the unit sphere in R^n:
    prod_k (1/2)_{beta_k} / (n/2)_{|beta|}."""
    beta = [int(b) for b in beta]
    if any(b < 0 for b in beta):
        raise ValueError("beta components must be nonnegative")
    total = sum(beta)
    num = 1.0
    for b in beta:
        num *= pochhammer(0.5, b)
    return num / pochhammer(n / 2.0, total)


def sphere_moment(alpha, n: int) -> float:
    """Average of x^alpha over the unit sphere in R^n; zero when any exponent is odd."""
    alpha = [int(a) for a in alpha]
    if any(a % 2 for a in alpha):
        return 0.0
    return sphere_monomial([a // 2 for a in alpha], n)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head, *rest)


def real_diag_moment(eigenvalues, n: int) -> float:
    """n-th moment of the real shadow of diag(a): multinomial sum of a^beta
    weighted by the sphere monomial averages."""
    a = np.asarray(eigenvalues, dtype=float).ravel()
    if n < 0:
        raise ValueError("n must be nonnegative")
    dim = a.size
    fact_n = math.factorial(n)
    total = 0.0
    for beta in _compositions(n, dim):
        coeff = fact_n
        for b in beta:
            coeff //= math.factorial(b)
        mono = 1.0
        for ai, b in zip(a, beta):
            mono *= ai**b
        total += coeff * mono * sphere_monomial(beta, dim)
    return total


def u3_monomial_integral(n1: int, n2: int, n3: int, n4: int) -> float:
    """Haar average over U(3) of b1^n1 b2^n2 b3^n3 b4^n4, where b_k are the
    squared moduli of the upper-left 2x2 entries of the unitary."""
    for n in (n1, n2, n3, n4):
        if n < 0:
            raise ValueError("exponents must be nonnegative")
    pref = (
        math.factorial(n1) * math.factorial(n2) * math.factorial(n3) * math.factorial(n4)
        * pochhammer(2.0, n2 + n3) * pochhammer(2.0, n1 + n2 + n4)
    ) / (
        pochhammer(3.0, n1 + n2 + n3 + n4)
        * pochhammer(2.0, n2 + n4) * pochhammer(2.0, n1 + n2) * pochhammer(2.0, n3)
    )
    f = hyp4f3([-n1, -n2, -n4, 1 + n3], [1.0, 2 + n3, -1 - n1 - n2 - n4], 1.0)
    return pref * f


def gamma_table(c) -> np.ndarray:
    """Doubly centered version of a 3x3 matrix: zero row and column sums."""
    m = np.asarray(c, dtype=float)
    if m.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    row = m.sum(axis=1, keepdims=True)
    col = m.sum(axis=0, keepdims=True)
    return m - row / 3.0 - col / 3.0 + m.sum() / 9.0


def entangled_second_moment_3x3(c) -> float:
    """Second moment of z = tr(C B^T) / 3 over maximally entangled 3x3 states,
    where B is the unistochastic matrix of a Haar unitary.

    The mean z equals sum(C)/9; the centered part is the stated quadratic in
    the doubly centered gamma block, so a nonzero total sum only adds the
    squared mean.
    """
    m = np.asarray(c, dtype=float)
    g = gamma_table(m)[:2, :2]
    core = (
        3.0 * float(np.sum(g**2))
        + float(np.sum(g)) ** 2
        + 2.0 * (g[0, 0] + g[1, 1]) * (g[0, 1] + g[1, 0])
    ) / 72.0
    mean = float(m.sum()) / 9.0
    return core + mean**2


def bell_orbit_simplex_moment(n: int, k: int) -> float:
    """Mixed moment E(q1^n q2^k) of the two-qubit entangled-orbit weights:
    n! k! / (n + k + 1)!."""
    if n < 0 or k < 0:
        raise ValueError("exponents must be nonnegative")
    return math.factorial(n) * math.factorial(k) / math.factorial(n + k + 1)
