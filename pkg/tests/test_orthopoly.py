import math

import numpy as np
import pytest
from scipy.special import eval_legendre

from sphereproj.errors import DomainError, NumericalError
from sphereproj.geometry import surface_area
from sphereproj.harmonics import basis_dimension
from sphereproj.orthopoly import (
    DarbouxKernel,
    fourier_lebesgue_constant,
    gauss_legendre_rule,
    legendre_eval,
)


def test_legendre_low_degrees():
    assert legendre_eval(0, -0.7) == 1.0
    assert legendre_eval(1, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert legendre_eval(2, 0.5) == pytest.approx(-0.125, abs=1e-15)


def test_legendre_matches_scipy():
    rng = np.random.default_rng(1)
    t = rng.uniform(-1.0, 1.0, 30)
    for k in range(31):
        assert np.allclose(legendre_eval(k, t), eval_legendre(k, t), atol=1e-12)


def test_legendre_domain():
    with pytest.raises(DomainError):
        legendre_eval(3, 1.001)
    with pytest.raises(DomainError):
        legendre_eval(-1, 0.0)
    # a hair over 1 is clamped, not rejected
    assert legendre_eval(4, 1.0 + 5e-13) == pytest.approx(1.0, abs=1e-12)


def test_gauss_legendre_small_rules():
    r1 = gauss_legendre_rule(1)
    assert np.array_equal(r1.nodes, [0.0]) and np.array_equal(r1.weights, [2.0])
    r2 = gauss_legendre_rule(2)
    assert np.allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r2.weights, [1.0, 1.0], atol=1e-15)
    r5 = gauss_legendre_rule(5)
    assert r5.nodes[2] == 0.0
    assert r5.weights[2] == pytest.approx(128.0 / 225.0, abs=1e-15)
    with pytest.raises(DomainError):
        gauss_legendre_rule(0)


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 13, 21, 34, 60])
def test_gauss_legendre_invariants(m):
    rule = gauss_legendre_rule(m)
    assert abs(rule.weights.sum() - 2.0) <= 1e-12
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.allclose(rule.nodes, -rule.nodes[::-1], atol=1e-12)
    assert np.all(rule.weights > 0)


def test_gauss_legendre_newton_cap(monkeypatch):
    # a starved iteration budget must raise, never return silently
    from sphereproj import orthopoly

    monkeypatch.setattr(orthopoly, "_NEWTON_MAX_ITER", 1)
    with pytest.raises(NumericalError, match="stalled"):
        gauss_legendre_rule(200)


def test_gauss_legendre_exactness_all_orders():
    for m in range(1, 61):
        rule = gauss_legendre_rule(m)
        powers = rule.nodes[None, :] ** np.arange(2 * m)[:, None]
        approx = powers @ rule.weights
        k = np.arange(2 * m)
        exact = np.where(k % 2 == 0, 2.0 / (k + 1.0), 0.0)
        assert np.max(np.abs(approx - exact)) <= 1e-12


def test_gauss_legendre_matches_numpy():
    for m in (3, 10, 40, 100):
        rule = gauss_legendre_rule(m)
        xs, ws = np.polynomial.legendre.leggauss(m)
        assert np.allclose(rule.nodes, xs, atol=5e-14)
        assert np.allclose(rule.weights, ws, atol=5e-14)


def test_gauss_legendre_weight_spacing_comparable():
    # w_i is uniformly comparable to the gap to the next node; the band over
    # all interior pairs and all orders should stay within a factor 4
    ratios = []
    for m in range(6, 61):
        rule = gauss_legendre_rule(m)
        ratios.extend(rule.weights[:-1] / np.diff(rule.nodes))
    ratios = np.array(ratios)
    assert ratios.max() / ratios.min() <= 4.0
    # consequently consecutive weights are comparable as well
    for m in (6, 20, 60):
        w = gauss_legendre_rule(m).weights
        assert np.max(w[1:] / w[:-1]) <= 4.0 and np.min(w[1:] / w[:-1]) >= 0.25


def test_kernel_degree_zero_and_low():
    k0 = DarbouxKernel(2, 0)
    for t in (-1.0, -0.2, 0.0, 0.9, 1.0):
        assert k0.eval(t) == pytest.approx(0.5, rel=1e-14)
    assert DarbouxKernel(2, 3).eval(1.0) == pytest.approx(8.0, rel=1e-13)
    assert DarbouxKernel(2, 1).eval(0.0) == pytest.approx(0.5, rel=1e-13)
    with pytest.raises(DomainError):
        DarbouxKernel(1, 3)
    with pytest.raises(DomainError):
        k0.eval(1.1)


def test_kernel_peak_closed_form_q2():
    for n in range(101):
        peak = DarbouxKernel(2, n).peak()
        assert abs(2.0 * peak - (n + 1) ** 2) <= 1e-10 * (n + 1) ** 2


@pytest.mark.parametrize("n", [4, 9, 16, 25, 57])
def test_kernel_alternating_endpoint_q2(n):
    kern = DarbouxKernel(2, n)
    assert abs(kern.eval(-1.0)) == pytest.approx((n + 1) / 2.0, rel=1e-10)


def test_kernel_bounded_by_peak():
    t = np.linspace(-1.0, 1.0, 4001)
    for q, n in ((2, 25), (3, 18), (4, 12)):
        kern = DarbouxKernel(q, n)
        assert np.max(np.abs(kern.eval(t))) <= kern.peak() * (1 + 1e-12)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_kernel_peak_equals_dimension_identity(q):
    # K_n(1) = |S^(q-1)| * dim P_n / |S^q|: the kernel at coincident points
    # is the constant density of the reproducing kernel
    for n in (0, 1, 5, 20, 60):
        expected = surface_area(q - 1) * basis_dimension(q, n) / surface_area(q)
        assert DarbouxKernel(q, n).peak() == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("q,n", [(2, 8), (3, 8), (4, 8)])
def test_kernel_matches_gram_schmidt_oracle(q, n):
    # brute-force oracle: orthonormalize monomials under the weight by
    # explicit Gram-Schmidt, with inner products from scipy's Gauss-Jacobi
    # rule for (1-t^2)^(q/2-1), then sum the kernel directly
    from scipy.special import roots_jacobi

    xj, wj = roots_jacobi(60, 0.5 * q - 1.0, 0.5 * q - 1.0)

    basis = []
    for k in range(n + 1):
        vec = xj**k
        for prev in basis:
            vec = vec - np.dot(wj * prev, vec) * prev
        vec = vec / math.sqrt(np.dot(wj * vec, vec))
        basis.append(vec)

    rng = np.random.default_rng(9)
    idx = rng.integers(0, len(xj), 25)
    kern = DarbouxKernel(q, n)
    for i in idx:
        t = xj[i]
        # p_k(1) via a recurrence-free route: polyfit each basis vector
        oracle = 0.0
        for k, vec in enumerate(basis):
            coeffs = np.polynomial.polynomial.polyfit(xj, vec, k)
            p_at_1 = np.polynomial.polynomial.polyval(1.0, coeffs)
            oracle += vec[i] * p_at_1
        assert kern.eval(t) == pytest.approx(oracle, rel=1e-9)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_recurrence_orthonormal_under_quadrature(q):
    # evaluate p_0..p_n from the stored coefficients on a Gauss-Jacobi grid
    # for the weight and check the Gram matrix against the identity
    from scipy.special import roots_jacobi

    n = 10
    kern = DarbouxKernel(q, n)
    t, momw = roots_jacobi(80, 0.5 * q - 1.0, 0.5 * q - 1.0)
    vals = np.empty((n + 1, t.size))
    vals[0] = kern.p0
    prev = np.zeros_like(t)
    cur = np.full_like(t, kern.p0)
    for k in range(1, n + 1):
        b = kern.recurrence_b
        prev, cur = cur, (t * cur - b[k - 1] * prev) / b[k]
        vals[k] = cur
    gram = (vals * momw) @ vals.T
    assert np.max(np.abs(gram - np.eye(n + 1))) <= 1e-10

    # reproduction through integration: integral of K_n p_j w = p_j(1)
    kvals = kern.eval(t)
    recovered = (vals * momw) @ kvals
    assert np.max(np.abs(recovered - kern.boundary_values)) <= 1e-9


def test_fourier_lebesgue_degree_zero():
    assert fourier_lebesgue_constant(2, 0) == pytest.approx(1.0, abs=1e-12)


def test_fourier_lebesgue_growth_q2():
    ratios = [fourier_lebesgue_constant(2, n) / math.sqrt(n) for n in range(10, 81, 10)]
    assert max(ratios) / min(ratios) <= 1.5


def test_fourier_lebesgue_growth_q3():
    ratios = [fourier_lebesgue_constant(3, n) / n for n in range(10, 61, 10)]
    assert max(ratios) / min(ratios) <= 1.5


def test_fourier_lebesgue_refinement_cap():
    with pytest.raises(NumericalError, match="estimates"):
        fourier_lebesgue_constant(2, 40, rtol=1e-15, max_refinements=3)
