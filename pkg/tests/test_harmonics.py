import math

import numpy as np
import pytest

from sphereproj.errors import DimensionMismatchError, DomainError
from sphereproj.geometry import random_unit_points
from sphereproj.harmonics import (
    basis_dimension,
    eval_harmonic_basis,
    harmonic_basis_matrix,
    harmonic_orders,
)
from sphereproj.orthopoly import DarbouxKernel, legendre_eval
from sphereproj.quadrature import tensor_gl_rule


def test_basis_dimension_examples():
    assert basis_dimension(2, 1) == 4
    assert basis_dimension(2, 15) == 256
    assert basis_dimension(3, 0) == 1
    with pytest.raises(DomainError):
        basis_dimension(1, 3)
    with pytest.raises(DomainError):
        basis_dimension(2, -1)


def test_basis_dimension_matches_gamma_formula():
    # (2n+q) Gamma(n+q) / (Gamma(q+1) Gamma(n+1)) in exact integer arithmetic
    for q in range(2, 7):
        for n in range(0, 31):
            num = (2 * n + q) * math.factorial(n + q - 1)
            den = math.factorial(q) * math.factorial(n)
            assert num % den == 0
            assert basis_dimension(q, n) == num // den


def test_harmonic_orders_layout():
    ells, ems = harmonic_orders(3)
    assert len(ells) == 16
    assert ells[0] == 0 and ems[0] == 0
    # column l(l+1)+m
    assert ells[2 * 3 + 1] == 2 and ems[2 * 3 + 1] == 1
    assert list(ems[1:4]) == [-1, 0, 1]


def test_constant_harmonic():
    pts = random_unit_points(10, 2, 0)
    vals = harmonic_basis_matrix(0, pts)
    assert np.allclose(vals, 1.0 / math.sqrt(4 * math.pi), atol=1e-15)


def test_degree_one_at_pole():
    vals = eval_harmonic_basis(1, np.array([0.0, 0.0, 1.0]))
    zonal = math.sqrt(3.0 / (4 * math.pi))
    assert vals[1] == 0.0  # m = -1 slot
    assert vals[3] == 0.0  # m = +1 slot
    assert vals[2] == pytest.approx(zonal, rel=1e-14)  # m = 0 slot


def test_parity_under_antipodes():
    n = 12
    ells, _ = harmonic_orders(n)
    pts = random_unit_points(20, 2, 4)
    plus = harmonic_basis_matrix(n, pts)
    minus = harmonic_basis_matrix(n, -pts)
    signs = (-1.0) ** ells
    assert np.allclose(minus, plus * signs, atol=1e-12)


def test_continuous_orthonormality():
    # Gram under a rule of exactness >= 2n must be the identity
    n = 10
    rule = tensor_gl_rule(n)
    y = harmonic_basis_matrix(n, rule.nodes)
    gram = (y * rule.weights[:, None]).T @ y
    assert np.max(np.abs(gram - np.eye((n + 1) ** 2))) <= 1e-9


def test_addition_formula():
    rng = np.random.default_rng(8)
    x = random_unit_points(15, 2, rng)
    y = random_unit_points(15, 2, rng)
    n = 30
    yx = harmonic_basis_matrix(n, x)
    yy = harmonic_basis_matrix(n, y)
    dots = np.sum(x * y, axis=1)
    for ell in range(n + 1):
        cols = slice(ell * ell, (ell + 1) ** 2)
        lhs = np.sum(yx[:, cols] * yy[:, cols], axis=1)
        rhs = (2 * ell + 1) / (4 * math.pi) * legendre_eval(ell, dots)
        assert np.max(np.abs(lhs - rhs)) <= 1e-9


def test_partial_sum_equals_kernel():
    # sum over all columns of Y(x)Y(y) agrees with K_n(x.y)/(2 pi)
    rng = np.random.default_rng(2)
    x = random_unit_points(25, 2, rng)
    y = random_unit_points(25, 2, rng)
    n = 18
    kern = DarbouxKernel(2, n)
    lhs = np.sum(harmonic_basis_matrix(n, x) * harmonic_basis_matrix(n, y), axis=1)
    rhs = kern.eval(np.sum(x * y, axis=1)) / (2 * math.pi)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9


def test_matches_scipy_complex_harmonics():
    try:
        from scipy.special import sph_harm_y
    except ImportError:  # older scipy
        from scipy.special import sph_harm

        def sph_harm_y(ell, m, theta, phi):
            return sph_harm(m, ell, phi, theta)

    rng = np.random.default_rng(6)
    pts = random_unit_points(12, 2, rng)
    theta = np.arccos(pts[:, 2])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    n = 8
    ours = harmonic_basis_matrix(n, pts)
    for ell in range(n + 1):
        for m in range(0, ell + 1):
            ref = sph_harm_y(ell, m, theta, phi)
            # our real harmonics carry no Condon-Shortley phase
            sign = (-1.0) ** m
            if m == 0:
                assert np.allclose(ours[:, ell * (ell + 1)], ref.real, atol=1e-12)
            else:
                cos_part = sign * math.sqrt(2.0) * ref.real
                sin_part = sign * math.sqrt(2.0) * ref.imag
                assert np.allclose(ours[:, ell * (ell + 1) + m], cos_part, atol=1e-12)
                assert np.allclose(ours[:, ell * (ell + 1) - m], sin_part, atol=1e-12)


def test_rejects_wrong_dimension():
    with pytest.raises(DimensionMismatchError):
        harmonic_basis_matrix(2, np.eye(4))
