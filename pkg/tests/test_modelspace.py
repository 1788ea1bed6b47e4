import numpy as np
import pytest

from ttolab.blaschke import normalized_product
from ttolab.modelspace import (
    ModelBasis,
    QuadratureError,
    default_quadrature_points,
    inner_product,
    reproducing_kernel,
    tm_basis,
)

from conftest import TWO_PI, boundary_grid, random_blaschke


def test_monomial_reduction(rng):
    basis = tm_basis(normalized_product([0.0] * 5))
    z = np.exp(1j * rng.uniform(0, TWO_PI, 16))
    E = basis.evaluate(z)
    for k in range(5):
        assert np.abs(E[k] - z ** k).max() < 1e-14


def test_dimension_counts_zeros_with_multiplicity(rng):
    B = normalized_product([0.3, 0.3, -0.5j])
    assert tm_basis(B).dimension == 3


def test_gram_orthonormality(rng):
    for deg in (6, 12):
        basis = tm_basis(random_blaschke(rng, deg))
        assert basis.gram_error <= 1e-10


def test_quadrature_minimum_enforced(rng):
    B = random_blaschke(rng, 4)
    with pytest.raises(ValueError):
        tm_basis(B, quadrature_points=16)


def test_undersized_quadrature_raises():
    B = normalized_product([0.99, -0.99])
    with pytest.raises(QuadratureError):
        tm_basis(B, quadrature_points=16)


def test_default_quadrature_scales_with_pole_distance():
    near = normalized_product([0.999])
    assert default_quadrature_points(near) >= 16000


def test_inner_product_exponentials():
    t = boundary_grid(256)
    for j in range(9):
        for k in range(9):
            val = inner_product(np.exp(1j * j * t), np.exp(1j * k * t))
            assert abs(val - (1.0 if j == k else 0.0)) < 1e-14


def test_inner_product_constant():
    ones = np.ones(64, dtype=complex)
    assert abs(inner_product(ones, ones) - 1.0) < 1e-15


def test_inner_product_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        inner_product(np.ones(8), np.ones(9))


def test_kernel_constant_when_b_vanishes_at_origin(rng):
    B = random_blaschke(rng, 5, origin_zero=True)
    z = 0.8 * np.exp(1j * rng.uniform(0, TWO_PI, 12))
    assert np.abs(reproducing_kernel(B, 0.0, z) - 1.0).max() < 1e-14


def test_kernel_reproduces_point_values(rng):
    B = random_blaschke(rng, 6)
    basis = tm_basis(B)
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    samples = c @ basis.sample_matrix
    for _ in range(32):
        w = complex(rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, TWO_PI)))
        kw = reproducing_kernel(B, w, basis.points)
        assert abs(inner_product(samples, kw) - basis.synthesize(c, w)) < 1e-10


def test_kernel_norm_against_kernel_value(rng):
    B = random_blaschke(rng, 5)
    basis = tm_basis(B)
    w = 0.6 * np.exp(0.8j)
    kw = reproducing_kernel(B, w, basis.points)
    assert abs(inner_product(kw, kw) - reproducing_kernel(B, w, w)) < 1e-12


def test_boundary_kernel_norm_equals_derivative(rng):
    B = random_blaschke(rng, 7)
    basis = tm_basis(B)
    for t0 in rng.uniform(0, TWO_PI, 8):
        zeta = np.exp(1j * t0)
        kz = reproducing_kernel(B, zeta, basis.points)
        norm2 = inner_product(kz, kz).real
        deriv = B.boundary_derivative_modulus(float(t0))
        assert abs(norm2 - deriv) / deriv < 1e-8


def test_kernel_symmetry(rng):
    B = random_blaschke(rng, 6)
    for _ in range(10):
        w = complex(rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, TWO_PI)))
        v = complex(rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, TWO_PI)))
        assert abs(reproducing_kernel(B, w, v) - np.conj(reproducing_kernel(B, v, w))) < 1e-12


def test_kernel_completeness(rng):
    B = random_blaschke(rng, 6)
    basis = tm_basis(B)
    for _ in range(8):
        w = complex(rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, TWO_PI)))
        total = float(np.sum(np.abs(basis.evaluate(w)[:, 0]) ** 2))
        assert abs(total - reproducing_kernel(B, w, w).real) / total < 1e-9


def test_kernel_near_diagonal_switch(rng):
    B = random_blaschke(rng, 4)
    t0 = 1.234
    zeta = np.exp(1j * t0)
    # exact coincidence returns the phase derivative
    assert abs(reproducing_kernel(B, zeta, zeta) - B.boundary_derivative_modulus(t0)) < 1e-12
    # approaching along the circle stays continuous through the switch
    vals = [reproducing_kernel(B, zeta, np.exp(1j * (t0 + eps))) for eps in (1e-7, 1e-10, 1e-13)]
    target = B.boundary_derivative_modulus(t0)
    assert abs(vals[-1] - target) < 1e-4 * target
    assert abs(vals[1] - vals[2]) < 1e-3 * target


def test_expand_unit_coordinates(rng):
    basis = tm_basis(random_blaschke(rng, 6))
    for j in (0, 3, 5):
        ex = basis.expand(basis.sample_matrix[j])
        assert np.abs(ex.coefficients - np.eye(6)[j]).max() < 1e-12
        assert ex.residual <= 1e-10


def test_expand_recovers_kernel(rng):
    B = random_blaschke(rng, 6)
    basis = tm_basis(B)
    w = 0.45 * np.exp(1.7j)
    ex = basis.expand(reproducing_kernel(B, w, basis.points))
    probe = 0.85 * np.exp(1j * rng.uniform(0, TWO_PI, 16))
    assert np.abs(basis.synthesize(ex.coefficients, probe) - reproducing_kernel(B, w, probe)).max() < 1e-9
    assert ex.residual < 1e-9


def test_expand_reports_orthogonal_mass(rng):
    B = random_blaschke(rng, 5)
    basis = tm_basis(B)
    ex = basis.expand(lambda th: B.eval(np.exp(1j * th)) * np.exp(1j * th))
    assert abs(ex.residual - 1.0) < 1e-6
    assert np.abs(ex.coefficients).max() < 1e-10


def test_streamed_expansion_matches_cached(rng):
    B = random_blaschke(rng, 4)
    cached = tm_basis(B, quadrature_points=2048)
    f = lambda th: np.exp(1j * th) + 0.5 * np.exp(-2j * th)
    a = cached.expand(f)
    b = cached.expand(f(cached.thetas))
    assert np.abs(a.coefficients - b.coefficients).max() < 1e-14
    assert abs(a.residual - b.residual) < 1e-12
