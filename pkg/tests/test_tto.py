import numpy as np
import pytest

from ttolab import clark, szego, tto
from ttolab.blaschke import mobius, normalized_product
from ttolab.modelspace import inner_product, tm_basis

from conftest import TWO_PI, random_blaschke, random_trig_symbol, random_unimodular


def classical_toeplitz(coeffs, n):
    return np.array([[coeffs.get(j - k, 0.0) for k in range(n)] for j in range(n)])


def test_master_oracle_classical(rng):
    for n in (8, 16):
        basis = tm_basis(normalized_product([0.0] * n))
        for _ in range(5):
            f, coeffs = random_trig_symbol(rng, int(rng.integers(1, 9)))
            A = tto.build_tto(basis, f).mat
            assert np.abs(A - classical_toeplitz(coeffs, n)).max() < 1e-10


def test_constant_symbol_gives_identity(rng):
    basis = tm_basis(random_blaschke(rng, 6))
    A = tto.build_tto(basis, lambda th: np.ones_like(th, dtype=complex))
    assert np.abs(A.mat - np.eye(6)).max() < 1e-12


def test_conjugate_symbol_is_adjoint(rng):
    basis = tm_basis(random_blaschke(rng, 5))
    f, _ = random_trig_symbol(rng, 3)
    A = tto.build_tto(basis, f)
    Ac = tto.build_tto(basis, lambda th: np.conj(f(th)))
    assert np.abs(Ac.mat - A.adjoint().mat).max() < 1e-12


def test_symbol_sample_array_path(rng):
    basis = tm_basis(random_blaschke(rng, 4))
    f, _ = random_trig_symbol(rng, 2)
    assert np.abs(tto.build_tto(basis, f(basis.thetas)).mat - tto.build_tto(basis, f).mat).max() < 1e-15


def test_basis_tag_mismatch(rng):
    b1 = tm_basis(random_blaschke(rng, 3))
    b2 = tm_basis(random_blaschke(rng, 3))
    A = tto.identity_operator(b1)
    B = tto.identity_operator(b2)
    with pytest.raises(tto.BasisMismatchError):
        A + B
    with pytest.raises(tto.BasisMismatchError):
        A @ B


def test_modified_shift_rank_one_matrix():
    basis = tm_basis(normalized_product([0.0, 0.0]))
    for alpha in (1.0, np.exp(0.7j)):
        S = tto.modified_shift(basis, alpha)
        assert np.abs(S.mat - np.array([[0.0, alpha], [1.0, 0.0]])).max() < 1e-12


def test_modified_shift_unitary(rng):
    basis = tm_basis(random_blaschke(rng, 8, origin_zero=True))
    S = tto.modified_shift(basis, random_unimodular(rng))
    assert tto.schatten_norm(S.adjoint().mat @ S.mat - np.eye(8), np.inf) <= 1e-10


def test_modified_shift_spectrum_is_level_set(rng):
    B = random_blaschke(rng, 7, origin_zero=True)
    basis = tm_basis(B)
    alpha = random_unimodular(rng)
    S = tto.modified_shift(basis, alpha)
    ev = np.sort(np.mod(np.angle(np.linalg.eigvals(S.mat)), TWO_PI))
    atoms = np.sort(clark.clark_measure(B, alpha).arguments)
    assert np.abs(ev - atoms).max() < 1e-8


def test_modified_shift_requires_origin_zero(rng):
    basis = tm_basis(random_blaschke(rng, 4))
    with pytest.raises(ValueError):
        tto.modified_shift(basis, 1.0)
    with pytest.raises(ValueError):
        tto.sedlock_element(basis, 1.0, np.zeros(4))


def test_sedlock_constant_data_is_identity(rng):
    basis = tm_basis(random_blaschke(rng, 5, origin_zero=True))
    ones = basis.expand(lambda th: np.ones_like(th, dtype=complex)).coefficients
    T = tto.sedlock_element(basis, 1.0, ones)
    assert np.abs(T.mat - np.eye(5)).max() < 1e-11


def test_sedlock_shift_data_is_alpha_circulant():
    from ttolab.blaschke import BlaschkeProduct

    n = 5
    basis = tm_basis(BlaschkeProduct([0.0] * n))  # B = z^n with unit factor
    alpha = np.exp(0.4j)
    phi = np.zeros(n, dtype=complex)
    phi[1] = 1.0  # phi(z) = z in the monomial basis
    T = tto.sedlock_element(basis, alpha, phi)
    expect = np.zeros((n, n), dtype=complex)
    for j in range(1, n):
        expect[j, j - 1] = 1.0
    expect[0, n - 1] = alpha
    assert np.abs(T.mat - expect).max() < 1e-12


def test_sedlock_commutes_with_shift(rng):
    basis = tm_basis(random_blaschke(rng, 8, origin_zero=True))
    alpha = random_unimodular(rng)
    S = tto.modified_shift(basis, alpha)
    T = tto.sedlock_element(basis, alpha, rng.normal(size=8) + 1j * rng.normal(size=8))
    assert np.linalg.norm(S.mat @ T.mat - T.mat @ S.mat) <= 1e-9


def test_sedlock_element_matches_spectral_form(rng):
    for _ in range(5):
        deg = int(rng.integers(2, 11))
        basis = tm_basis(random_blaschke(rng, deg, origin_zero=True))
        alpha = random_unimodular(rng)
        phi = rng.normal(size=deg) + 1j * rng.normal(size=deg)
        T1 = tto.sedlock_element(basis, alpha, phi)
        T2 = tto.sedlock_spectral(basis, alpha, phi)
        assert np.linalg.norm(T1.mat - T2.mat) <= 1e-8


def test_sedlock_spectral_constant_and_eigenvalues(rng):
    B = random_blaschke(rng, 6, origin_zero=True)
    basis = tm_basis(B)
    alpha = random_unimodular(rng)
    c = 1.3 - 0.4j
    T = tto.sedlock_spectral(basis, alpha, lambda z: np.full(z.shape, c))
    assert np.abs(T.mat - c * np.eye(6)).max() < 1e-12
    phi = rng.normal(size=6) + 1j * rng.normal(size=6)
    T = tto.sedlock_spectral(basis, alpha, phi)
    vals = np.sort_complex(np.linalg.eigvals(T.mat))
    expect = np.sort_complex(phi @ basis.evaluate(clark.clark_measure(B, alpha).atoms))
    assert np.abs(vals - expect).max() < 1e-8


def test_diag_operator_identity_and_trace(rng):
    basis = tm_basis(random_blaschke(rng, 6, origin_zero=True))
    alpha = random_unimodular(rng)
    D = tto.diag_operator(basis, alpha, np.ones(6))
    assert np.abs(D.mat - np.eye(6)).max() < 1e-12
    nu = rng.uniform(0.1, 2.0, 6)
    assert abs(tto.diag_operator(basis, alpha, nu).trace() - nu.sum()) < 1e-12
    with pytest.raises(ValueError):
        tto.diag_operator(basis, alpha, np.ones(5))


def test_delta_operator_matches_clark_weights(rng):
    B = random_blaschke(rng, 6, origin_zero=True)
    basis = tm_basis(B)
    alpha = random_unimodular(rng)
    mu = clark.clark_measure(B, alpha)
    D1 = tto.delta_operator(basis, alpha)
    D2 = tto.diag_operator(basis, alpha, mu.weights)
    assert np.abs(D1.mat - D2.mat).max() < 1e-15


def test_delta_trace_norm_one(rng):
    basis = tm_basis(random_blaschke(rng, 7, origin_zero=True))
    D = tto.delta_operator(basis, random_unimodular(rng))
    assert abs(tto.schatten_norm(D, 1) - 1.0) <= 1e-9
    assert abs(D.trace() - 1.0) <= 1e-9


def test_delta_for_constant_zero_sequence():
    basis = tm_basis(normalized_product([0.0] * 5))
    D = tto.delta_operator(basis, 1.0)
    assert np.abs(D.mat - np.eye(5) / 5).max() < 1e-13


def test_trace_identity_general_weights(rng):
    B = random_blaschke(rng, 8, origin_zero=True)
    basis = tm_basis(B)
    alpha = random_unimodular(rng)
    mu = clark.clark_measure(B, alpha)
    phi = rng.normal(size=8) + 1j * rng.normal(size=8)
    phivals = phi @ basis.evaluate(mu.atoms)
    nu = rng.uniform(0.1, 2.0, 8)
    T = tto.sedlock_element(basis, alpha, phi)
    D = tto.diag_operator(basis, alpha, nu)
    for p in (1, 2, 3):
        assert abs((D @ T.power(p)).trace() - np.sum(nu * phivals ** p)) <= 1e-8


def test_trace_identity_clark_measure(rng):
    B = random_blaschke(rng, 8, origin_zero=True)
    basis = tm_basis(B)
    alpha = random_unimodular(rng)
    mu = clark.clark_measure(B, alpha)
    phi = rng.normal(size=8) + 1j * rng.normal(size=8)
    T = tto.sedlock_element(basis, alpha, phi)
    D = tto.delta_operator(basis, alpha)
    for p in (1, 2, 3):
        want = mu.integrate((phi @ basis.evaluate(mu.atoms)) ** p)
        assert abs((D @ T.power(p)).trace() - want) <= 1e-8


def test_delta_alpha_average_equals_weight_operator(rng):
    B = random_blaschke(rng, 8, origin_zero=True)
    basis = tm_basis(B)
    acc = np.zeros((8, 8), dtype=complex)
    nodes = clark.alpha_nodes(512)
    for alpha in nodes:
        acc += tto.delta_operator(basis, alpha).mat
    acc /= nodes.size
    W = szego.weight_operator(basis)
    assert np.linalg.norm(acc - W.mat) <= 1e-6


def test_alpha_matched_family_average(rng):
    # Averaging Tr(Delta^alpha T_alpha^p) with the algebra element rebuilt
    # at every alpha recovers the circle mean of phi^p.
    B = random_blaschke(rng, 6, origin_zero=True)
    basis = tm_basis(B)
    phi = rng.normal(size=6) + 1j * rng.normal(size=6)
    phi0 = basis.synthesize(phi, 0.0)
    nodes = clark.alpha_nodes(256)
    for p in (1, 2, 3):
        total = sum(
            (tto.delta_operator(basis, a) @ tto.sedlock_element(basis, a, phi).power(p)).trace()
            for a in nodes
        ) / nodes.size
        assert abs(total - phi0 ** p) <= 1e-6


def test_alpha_fixed_weighted_trace_is_not_the_circle_mean():
    # Keeping the algebra element fixed while weighting with T[1/|B'|]
    # does NOT reproduce the circle mean once p >= 2: for B = z^2,
    # phi = z, alpha = 1 the weighted trace is 1 while the mean of phi^2
    # vanishes.  This pins why the averaged identity must rebuild the
    # element at every alpha.
    basis = tm_basis(normalized_product([0.0, 0.0]))
    W = szego.weight_operator(basis)
    T = tto.sedlock_element(basis, 1.0, np.array([0.0, 1.0]))
    val = (W @ T.power(2)).trace()
    assert abs(val - 1.0) < 1e-12
    assert abs(val - 0.0) > 0.5


def test_transplant_identity_for_zero_parameter(rng):
    B = random_blaschke(rng, 5)
    fb = tm_basis(B)
    tb = tm_basis(B.compose_with_automorphism(0.0))
    U = tto.transplant_unitary(fb, 0.0, tb)
    assert np.abs(U.mat - np.eye(5)).max() < 1e-12


def test_transplant_unitarity_and_conjugation(rng):
    B = random_blaschke(rng, 6)
    a = 0.35 - 0.2j
    fb = tm_basis(B)
    tb = tm_basis(B.compose_with_automorphism(a))
    U = tto.transplant_unitary(fb, a, tb)
    assert np.abs(U.mat.conj().T @ U.mat - np.eye(6)).max() <= 1e-9
    f, _ = random_trig_symbol(rng, 2)
    T = tto.build_tto(fb, f)
    lhs = (U @ T @ U.adjoint()).mat
    rhs = tto.build_tto(tb, lambda th: f(np.mod(np.angle(mobius(a, np.exp(1j * th))), TWO_PI))).mat
    assert np.linalg.norm(lhs - rhs) <= 1e-8


def test_transplant_moves_trace_weight(rng):
    B = random_blaschke(rng, 6)
    a = 0.3 + 0.22j
    fb = tm_basis(B)
    tb = tm_basis(B.compose_with_automorphism(a))
    U = tto.transplant_unitary(fb, a, tb)
    alpha = random_unimodular(rng)
    mu = clark.clark_measure(B, alpha)
    eta = mobius(-a, mu.atoms)
    order = np.argsort(np.mod(np.angle(eta), TWO_PI))
    moved = tto.diag_operator(tb, alpha, mu.weights[order])
    lhs = U.mat @ tto.delta_operator(fb, alpha).mat @ U.mat.conj().T
    assert np.linalg.norm(lhs - moved.mat) <= 1e-8


def test_transplant_rejects_wrong_target(rng):
    B = random_blaschke(rng, 4)
    fb = tm_basis(B)
    other = tm_basis(random_blaschke(rng, 4))
    with pytest.raises(tto.BasisMismatchError):
        tto.transplant_unitary(fb, 0.2, other)


def test_schatten_norms(rng):
    assert tto.schatten_norm(np.eye(7), 1) == pytest.approx(7.0)
    x = rng.normal(size=6) + 1j * rng.normal(size=6)
    R = np.outer(x, x.conj())
    for p in (0.5, 1, 2, np.inf):
        assert tto.schatten_norm(R, p) == pytest.approx(np.linalg.norm(x) ** 2)
    X = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert abs(tto.schatten_norm(X, 2) - np.linalg.norm(X)) < 1e-12
    with pytest.raises(ValueError):
        tto.schatten_norm(X, 0)


def test_functional_calculus(rng):
    X = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    H = tto.OperatorMatrix(X + X.conj().T, "b", "b")
    assert np.linalg.norm(tto.functional_calculus(H, lambda x: x).mat - H.mat) <= 1e-10
    C = tto.functional_calculus(H, lambda x: np.full_like(x, 2.5))
    assert np.abs(C.mat - 2.5 * np.eye(6)).max() <= 1e-12
    cube = tto.functional_calculus(H, lambda x: x ** 3)
    assert np.linalg.norm(cube.mat - np.linalg.matrix_power(H.mat, 3)) <= 1e-9
    with pytest.raises(ValueError):
        tto.functional_calculus(tto.OperatorMatrix(X, "b", "b"), lambda x: x)


def test_rank_one_special(rng):
    B = random_blaschke(rng, 6, origin_zero=True)
    basis = tm_basis(B)
    R = tto.rank_one_special(basis)
    direct = tto.build_tto(basis, lambda th: B.eval(np.exp(1j * th)) * np.exp(-1j * th))
    assert np.linalg.norm(R.mat - direct.mat) <= 1e-9
    sv = np.linalg.svd(R.mat, compute_uv=False)
    assert sv[1] <= 1e-10
    want = inner_product(B.eval(basis.points) * np.conj(basis.points), np.ones(basis.quadrature_points))
    assert abs(R.trace() - want) <= 1e-10
    with pytest.raises(ValueError):
        tto.rank_one_special(tm_basis(random_blaschke(rng, 3)))


def test_operator_norm_bounded_by_symbol(rng):
    basis = tm_basis(random_blaschke(rng, 8))
    f, _ = random_trig_symbol(rng, 3)
    T = tto.build_tto(basis, f)
    sup = float(np.abs(f(TWO_PI * np.arange(1 << 12) / (1 << 12))).max())
    assert tto.schatten_norm(T, np.inf) <= sup + 1e-9


def test_weight_trace_norm_bound(rng):
    for _ in range(5):
        B = random_blaschke(rng, int(rng.integers(2, 9)))
        basis = tm_basis(B)
        W = szego.weight_operator(basis)
        lam1 = abs(B.zeros[0])
        assert tto.schatten_norm(W, 1) <= (1 + lam1) / (1 - lam1) + 1e-9


def test_standard_symbol_invariants(rng):
    B = random_blaschke(rng, 4, origin_zero=True)
    basis = tm_basis(B)
    plus = rng.normal(size=4) + 1j * rng.normal(size=4)
    minus = rng.normal(size=3) + 1j * rng.normal(size=3)
    sym = tto.StandardSymbol(basis, plus, minus)
    assert abs(sym.psi_minus(0.0)) < 1e-14
    theta = TWO_PI * np.arange(64) / 64
    recon = sym.psi_plus(np.exp(1j * theta)) + np.conj(B.eval(np.exp(1j * theta))) * sym.psi_minus(np.exp(1j * theta))
    assert np.abs(sym.boundary_values(theta) - recon).max() < 1e-12
    # an evaluator must agree with the reconstruction
    tto.StandardSymbol(basis, plus, minus, evaluator=sym.boundary_values)
    with pytest.raises(ValueError):
        tto.StandardSymbol(basis, plus, minus, evaluator=lambda th: sym.boundary_values(th) + 1e-6)
    with pytest.raises(ValueError):
        tto.StandardSymbol(tm_basis(random_blaschke(rng, 4)), plus, minus)


def test_extract_standard_symbol_roundtrip(rng):
    B = random_blaschke(rng, 5, origin_zero=True)
    basis = tm_basis(B)
    plus = rng.normal(size=5) + 1j * rng.normal(size=5)
    minus = rng.normal(size=4) + 1j * rng.normal(size=4)
    sym = tto.StandardSymbol(basis, plus, minus)
    got, resid = tto.extract_standard_symbol(basis, sym.boundary_values)
    assert resid <= 1e-10
    assert np.abs(got.plus_coefficients - plus).max() <= 1e-10
    assert np.abs(got.minus_coefficients - minus).max() <= 1e-10


def test_circulant_difference_identity(rng):
    B = random_blaschke(rng, 3, origin_zero=True)
    basis = tm_basis(B)
    sym = tto.StandardSymbol(
        basis,
        rng.normal(size=3) + 1j * rng.normal(size=3),
        rng.normal(size=2) + 1j * rng.normal(size=2),
    )
    v = random_blaschke(rng, 5)
    approx = tto.circulant_approximant(B, v, random_unimodular(rng), sym)
    assert approx.identity_residual <= 1e-9


def test_corner_norms_independent_of_enlargement(rng):
    B = random_blaschke(rng, 3, origin_zero=True)
    basis = tm_basis(B)
    sym = tto.StandardSymbol(
        basis,
        rng.normal(size=3) + 1j * rng.normal(size=3),
        rng.normal(size=2) + 1j * rng.normal(size=2),
    )
    alpha = random_unimodular(rng)
    a4 = tto.circulant_approximant(B, random_blaschke(rng, 4), alpha, sym)
    a9 = tto.circulant_approximant(B, random_blaschke(rng, 9), alpha, sym)
    assert abs(tto.schatten_norm(a4.corner_minus, 1) - tto.schatten_norm(a9.corner_minus, 1)) <= 1e-8
    assert abs(tto.schatten_norm(a4.corner_plus, 1) - tto.schatten_norm(a9.corner_plus, 1)) <= 1e-8
