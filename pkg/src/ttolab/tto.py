"""Truncated Toeplitz operators on finite-dimensional model spaces.

Builds dense matrices (in a fixed ModelBasis) for:

* compressions of multiplication operators ("truncated Toeplitz"),
* modified compressed shifts and the commutant algebra elements they
  generate ("circulants"), in both symbol and spectral form,
* diagonal operators over Clark atoms, including the trace weight built
  from the Clark weights,
* the transplantation unitary between the model spaces of B and B o b_a,
* circulant approximants of a truncated Toeplitz operator on an enlarged
  model space, with the two corner defect operators,

plus Schatten norms and self-adjoint functional calculus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct, blaschke_multiply, mobius, mobius_derivative
from .clark import ClarkMeasure, clark_measure
from .modelspace import ModelBasis, tm_basis

__all__ = [
    "OperatorMatrix",
    "BasisMismatchError",
    "StandardSymbol",
    "CirculantApproximation",
    "build_tto",
    "modified_shift",
    "sedlock_element",
    "sedlock_spectral",
    "diag_operator",
    "delta_operator",
    "transplant_unitary",
    "extract_standard_symbol",
    "circulant_approximant",
    "schatten_norm",
    "functional_calculus",
    "rank_one_special",
]


class BasisMismatchError(ValueError):
    """Operators expressed in different bases were combined."""


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix tagged with the bases of its column and row spaces.

    Square operators on one model space carry the same tag twice;
    transplantation unitaries carry distinct tags.  Combining matrices
    with incompatible tags raises BasisMismatchError.
    """

    mat: np.ndarray
    row_tag: str
    col_tag: str

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2:
            raise ValueError("operator matrix must be two-dimensional")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def basis_tag(self) -> str:
        if self.row_tag != self.col_tag:
            raise BasisMismatchError("rectangular operator has no single basis tag")
        return self.row_tag

    @property
    def shape(self):
        return self.mat.shape

    def __add__(self, other):
        self._check_same(other)
        return OperatorMatrix(self.mat + other.mat, self.row_tag, self.col_tag)

    def __sub__(self, other):
        self._check_same(other)
        return OperatorMatrix(self.mat - other.mat, self.row_tag, self.col_tag)

    def __mul__(self, scalar):
        return OperatorMatrix(self.mat * complex(scalar), self.row_tag, self.col_tag)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if self.col_tag != other.row_tag:
            raise BasisMismatchError(
                "cannot compose: column basis %r != row basis %r" % (self.col_tag, other.row_tag)
            )
        return OperatorMatrix(self.mat @ other.mat, self.row_tag, other.col_tag)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.mat.conj().T, self.col_tag, self.row_tag)

    def power(self, p: int) -> "OperatorMatrix":
        if self.row_tag != self.col_tag:
            raise BasisMismatchError("powers require a square operator on one basis")
        return OperatorMatrix(np.linalg.matrix_power(self.mat, int(p)), self.row_tag, self.col_tag)

    def trace(self) -> complex:
        if self.mat.shape[0] != self.mat.shape[1]:
            raise ValueError("trace of a non-square matrix")
        return complex(np.trace(self.mat))

    def _check_same(self, other):
        if not isinstance(other, OperatorMatrix):
            raise TypeError("expected OperatorMatrix")
        if (self.row_tag, self.col_tag) != (other.row_tag, other.col_tag):
            raise BasisMismatchError("operators live in different bases")


def identity_operator(basis: ModelBasis) -> OperatorMatrix:
    return OperatorMatrix(np.eye(basis.dimension, dtype=complex), basis.tag, basis.tag)


# -- symbol handling ---------------------------------------------------------


def _symbol_values(symbol, theta):
    vals = np.asarray(symbol(theta), dtype=complex)
    if vals.shape != np.shape(theta):
        raise ValueError("symbol must return one boundary value per node")
    return vals


def build_tto(basis: ModelBasis, symbol) -> OperatorMatrix:
    """Matrix of the compression of multiplication by `symbol` to the model space.

    Entries are A[j, k] = <symbol * e_k, e_j> under the circle quadrature
    of the basis.  `symbol` is a callable of theta (radians, vectorized)
    or a sample array on the basis grid.
    """
    n = basis.dimension
    m = basis.quadrature_points
    if callable(symbol):
        acc = np.zeros((n, n), dtype=complex)
        for theta, _, block in basis.iter_chunks():
            acc += (block.conj() * _symbol_values(symbol, theta)) @ block.T
        return OperatorMatrix(acc / m, basis.tag, basis.tag)
    samples = np.asarray(symbol, dtype=complex)
    if samples.shape != (m,):
        raise ValueError("symbol samples must match the quadrature grid (length %d)" % m)
    E = basis.sample_matrix
    return OperatorMatrix((E.conj() * samples) @ E.T / m, basis.tag, basis.tag)


def _require_zero_at_origin(B: BlaschkeProduct, what: str):
    if B.degree == 0 or float(np.abs(B.zeros).min()) > 1e-12:
        raise ValueError("%s requires B(0) = 0 (a zero at the origin)" % what)


def _constant_coefficients(basis: ModelBasis) -> np.ndarray:
    """Coefficients of the constant function 1 (valid when B(0) = 0).

    <1, e_j> = conj(e_j(0)) because the mean of an analytic function over
    the circle is its value at the origin.
    """
    return np.conj(basis.evaluate(0.0)[:, 0])


def modified_shift(basis: ModelBasis, alpha) -> OperatorMatrix:
    """Unitary rank-one modification of the compressed shift.

    S^alpha = T[z] + alpha (1 (x) B/z); requires B(0) = 0 and |alpha| = 1.
    Its eigenvalues are the Clark atoms at parameter alpha, with the
    corresponding boundary kernels as eigenvectors.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise ValueError("shift parameter must be unimodular")
    B = basis.blaschke
    _require_zero_at_origin(B, "modified_shift")
    shift = build_tto(basis, lambda th: np.exp(1j * th))
    c_one = _constant_coefficients(basis)
    c_bhat = basis.expand(lambda th: B.eval(np.exp(1j * th)) * np.exp(-1j * th)).coefficients
    rank_one = np.outer(c_one, c_bhat.conj())
    return OperatorMatrix(shift.mat + alpha * rank_one, basis.tag, basis.tag)


def sedlock_element(basis: ModelBasis, alpha, phi_coefficients) -> OperatorMatrix:
    """Commutant-algebra element with analytic data phi (coefficients in the basis).

    Builds the truncated Toeplitz operator with symbol
    phi + alpha conj(B) (phi - phi(0)); requires B(0) = 0, |alpha| = 1.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise ValueError("algebra parameter must be unimodular")
    B = basis.blaschke
    _require_zero_at_origin(B, "sedlock_element")
    c = np.asarray(phi_coefficients, dtype=complex)
    if c.shape != (basis.dimension,):
        raise ValueError("phi coefficient vector must have length %d" % basis.dimension)
    phi0 = basis.synthesize(c, 0.0)

    def symbol(theta):
        z = np.exp(1j * theta)
        phi = c @ basis.evaluate(z)
        return phi + alpha * np.conj(B.eval(z)) * (phi - phi0)

    return build_tto(basis, symbol)


def _kernel_frame(basis: ModelBasis, alpha):
    """Clark measure and the unitary frame of normalized boundary kernels.

    Column k of the frame holds the basis coefficients of
    k_{atom_k}/||k_{atom_k}||; the coefficients are conj(e_j(atom_k))
    scaled by the square root of the Clark weight.
    """
    mu = clark_measure(basis.blaschke, alpha)
    at_atoms = basis.evaluate(mu.atoms)
    frame = at_atoms.conj() * np.sqrt(mu.weights)
    return mu, frame


def sedlock_spectral(basis: ModelBasis, alpha, phi) -> OperatorMatrix:
    """Spectral form sum_k phi(atom_k) P_k over normalized boundary kernels.

    `phi` is a coefficient vector in the basis or a callable on circle
    points.  Equals `sedlock_element` for the same data; the eigenvalues
    are exactly the values of phi at the Clark atoms.
    """
    B = basis.blaschke
    _require_zero_at_origin(B, "sedlock_spectral")
    mu, frame = _kernel_frame(basis, alpha)
    if callable(phi):
        vals = np.asarray(phi(mu.atoms), dtype=complex)
        if vals.shape != mu.atoms.shape:
            raise ValueError("phi must return one value per Clark atom")
    else:
        c = np.asarray(phi, dtype=complex)
        if c.shape != (basis.dimension,):
            raise ValueError("phi coefficient vector must have length %d" % basis.dimension)
        vals = c @ basis.evaluate(mu.atoms)
    return OperatorMatrix((frame * vals) @ frame.conj().T, basis.tag, basis.tag)


def diag_operator(basis: ModelBasis, alpha, weights) -> OperatorMatrix:
    """sum_k nu_k (k-hat_k (x) k-hat_k) over the Clark atoms at alpha.

    `weights` are listed in the canonical atom order (increasing
    argument).  With all weights equal to one this is the identity, the
    normalized kernels being an orthonormal basis.
    """
    mu, frame = _kernel_frame(basis, alpha)
    nu = np.asarray(weights, dtype=float)
    if nu.shape != mu.atoms.shape:
        raise ValueError("need exactly one weight per Clark atom (%d)" % mu.atoms.size)
    return OperatorMatrix((frame * nu) @ frame.conj().T, basis.tag, basis.tag)


def delta_operator(basis: ModelBasis, alpha) -> OperatorMatrix:
    """Diagonal operator with the Clark weights themselves: the trace weight.

    Positive semidefinite with trace norm equal to the Clark mass, which
    is 1 whenever B(0) = 0.
    """
    mu, frame = _kernel_frame(basis, alpha)
    return OperatorMatrix((frame * mu.weights) @ frame.conj().T, basis.tag, basis.tag)


def transplant_unitary(from_basis: ModelBasis, a, to_basis: ModelBasis) -> OperatorMatrix:
    """Matrix of f -> sqrt(b_a') * (f o b_a) from the space of B to that of B o b_a.

    `to_basis` must be built on compose_with_automorphism(B, a); the map
    is unitary, sends boundary kernels to scaled boundary kernels, and
    conjugates T_B[phi] into T_{B^a}[phi o b_a].
    """
    a = complex(a)
    B = from_basis.blaschke
    expected = B.compose_with_automorphism(a)
    got = to_basis.blaschke
    key = lambda zs: np.sort_complex(np.round(np.asarray(zs), 9))
    if expected.degree != got.degree or np.abs(key(expected.zeros) - key(got.zeros)).max() > 1e-9:
        raise BasisMismatchError("to_basis is not built on the composed Blaschke product")
    n = from_basis.dimension
    m = to_basis.quadrature_points
    acc = np.zeros((n, n), dtype=complex)
    root = np.sqrt(1.0 - abs(a) ** 2)
    for theta, z, block in to_basis.iter_chunks():
        weight = root / (1.0 - np.conjugate(a) * z)
        transported = from_basis.evaluate(mobius(a, z)) * weight
        acc += block.conj() @ transported.T
    return OperatorMatrix(acc / m, to_basis.tag, from_basis.tag)


# -- standard symbols and circulant approximation ----------------------------


class StandardSymbol:
    """Unique decomposition psi = psi_plus + conj(B) psi_minus of a bounded symbol.

    `basis` is a ModelBasis whose Blaschke product has its origin zero
    listed first, so that e_0 = 1 and e_1, ..., e_{N-1} span the
    functions in the model space vanishing at 0.  psi_plus lives in the
    full space (N coefficients); psi_minus in that subspace (N - 1
    coefficients against e_1, ..., e_{N-1}), which forces
    psi_minus(0) = 0.
    """

    def __init__(self, basis: ModelBasis, plus_coefficients, minus_coefficients, evaluator=None):
        B = basis.blaschke
        if B.degree < 1 or abs(B.zeros[0]) > 1e-12:
            raise ValueError("standard symbols require the origin zero listed first (B(0) = 0)")
        plus = np.asarray(plus_coefficients, dtype=complex)
        minus = np.asarray(minus_coefficients, dtype=complex)
        if plus.shape != (basis.dimension,):
            raise ValueError("plus part needs %d coefficients" % basis.dimension)
        if minus.shape != (basis.dimension - 1,):
            raise ValueError("minus part needs %d coefficients" % (basis.dimension - 1))
        self.basis = basis
        self.plus_coefficients = plus
        self.minus_coefficients = minus
        self.evaluator = evaluator
        if evaluator is not None:
            theta = 2.0 * np.pi * np.arange(64) / 64
            err = float(np.abs(self.boundary_values(theta) - np.asarray(evaluator(theta), dtype=complex)).max())
            if err > 1e-9:
                raise ValueError("evaluator disagrees with the reconstruction (max err %.3e)" % err)

    def psi_plus(self, z):
        return self.basis.synthesize(self.plus_coefficients, z)

    def psi_minus(self, z):
        E = self.basis.evaluate(z)
        vals = self.minus_coefficients @ E[1:]
        return vals if np.ndim(z) else complex(vals[0])

    @property
    def psi_plus_at_origin(self) -> complex:
        return complex(self.basis.synthesize(self.plus_coefficients, 0.0))

    def boundary_values(self, theta):
        """psi = psi_plus + conj(B) psi_minus on the circle."""
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return self.psi_plus(z) + np.conj(self.basis.blaschke.eval(z)) * self.psi_minus(z)


def extract_standard_symbol(basis: ModelBasis, boundary_function):
    """Project a boundary function onto its standard-symbol parts.

    Returns (StandardSymbol, residual): psi_plus is the projection onto
    the model space; psi_minus is recovered by projecting B * (psi -
    psi_plus) onto the subspace vanishing at the origin.  The residual is
    the quadrature norm of what neither part captures.
    """
    B = basis.blaschke
    plus = basis.expand(boundary_function).coefficients

    def leftover(theta):
        z = np.exp(1j * theta)
        return B.eval(z) * (np.asarray(boundary_function(theta), dtype=complex) - plus @ basis.evaluate(z))

    minus_full = basis.expand(leftover).coefficients
    sym = StandardSymbol(basis, plus, minus_full[1:])
    resid_fn = lambda theta: np.asarray(boundary_function(theta), dtype=complex) - sym.boundary_values(theta)
    res2 = 0.0
    count = 0
    for theta, _, _ in basis.iter_chunks():
        vals = resid_fn(theta)
        res2 += float(np.sum(np.abs(vals) ** 2))
        count += theta.size
    return sym, float(np.sqrt(res2 / count))


@dataclass(frozen=True)
class CirculantApproximation:
    """Circulant approximant of T[psi] on the enlarged model space of u = B v.

    sedlock_op - tto_op = conj(alpha) corner_minus + alpha corner_plus
    holds as matrices; the Schatten norms of both corners do not depend
    on the enlarging factor v.
    """

    alpha: complex
    enlarged_basis: ModelBasis
    phi_coefficients: np.ndarray
    sedlock_op: OperatorMatrix
    tto_op: OperatorMatrix
    corner_minus: OperatorMatrix
    corner_plus: OperatorMatrix

    @property
    def identity_residual(self) -> float:
        """Frobenius norm of (sedlock - tto) - (conj(alpha) c_minus + alpha c_plus)."""
        gap = (self.sedlock_op - self.tto_op).mat - (
            np.conjugate(self.alpha) * self.corner_minus.mat + self.alpha * self.corner_plus.mat
        )
        return float(np.linalg.norm(gap))


def circulant_approximant(B: BlaschkeProduct, v: BlaschkeProduct, alpha, symbol: StandardSymbol,
                          quadrature_points=None) -> CirculantApproximation:
    """Approximate T[psi] on the model space of u = B v by a commutant element.

    With psi = psi_plus + conj(B) psi_minus on the space of B and
    phi = psi_plus + conj(alpha) v psi_minus, returns the algebra element
    for phi at parameter alpha, the compression T_u[psi], and the two
    corner operators T_u[v psi_minus] and T_u[conj(u)(psi_plus -
    psi_plus(0))] whose combination reproduces the difference exactly.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise ValueError("algebra parameter must be unimodular")
    if symbol.basis.blaschke is not B:
        zb = np.sort_complex(np.round(symbol.basis.blaschke.zeros, 12))
        if zb.size != B.degree or np.abs(zb - np.sort_complex(np.round(B.zeros, 12))).max() > 1e-12:
            raise BasisMismatchError("standard symbol is not expressed on the model space of B")
    u = blaschke_multiply(B, v)
    _require_zero_at_origin(u, "circulant_approximant")
    u_basis = tm_basis(u, quadrature_points=quadrature_points)

    psi_plus0 = symbol.psi_plus_at_origin

    def phi_fn(theta):
        z = np.exp(1j * theta)
        return symbol.psi_plus(z) + np.conjugate(alpha) * v.eval(z) * symbol.psi_minus(z)

    def psi_fn(theta):
        return symbol.boundary_values(theta)

    def corner_minus_fn(theta):
        z = np.exp(1j * theta)
        return v.eval(z) * symbol.psi_minus(z)

    def corner_plus_fn(theta):
        z = np.exp(1j * theta)
        return np.conj(u.eval(z)) * (symbol.psi_plus(z) - psi_plus0)

    phi = u_basis.expand(phi_fn)
    sedlock_op = sedlock_element(u_basis, alpha, phi.coefficients)
    tto_op = build_tto(u_basis, psi_fn)
    corner_minus = build_tto(u_basis, corner_minus_fn)
    corner_plus = build_tto(u_basis, corner_plus_fn)
    return CirculantApproximation(alpha, u_basis, phi.coefficients, sedlock_op, tto_op,
                                  corner_minus, corner_plus)


# -- norms and functional calculus -------------------------------------------


def schatten_norm(A, p) -> float:
    """Schatten p-norm from the singular values; p = inf gives the largest one."""
    mat = A.mat if isinstance(A, OperatorMatrix) else np.asarray(A, dtype=complex)
    sv = np.linalg.svd(mat, compute_uv=False)
    if p == np.inf or p == "inf":
        return float(sv[0]) if sv.size else 0.0
    p = float(p)
    if p <= 0:
        raise ValueError("Schatten norm requires p > 0")
    return float(np.sum(sv ** p) ** (1.0 / p))


def functional_calculus(A: OperatorMatrix, g, hermitian_tol=1e-8) -> OperatorMatrix:
    """Apply a scalar function to a (numerically) self-adjoint operator.

    The input is symmetrized to (A + A*)/2 before the eigendecomposition;
    a deviation from self-adjointness beyond `hermitian_tol` (spectral
    norm) is rejected.
    """
    mat = A.mat
    defect = schatten_norm(mat - mat.conj().T, np.inf)
    if defect > hermitian_tol:
        raise ValueError("operator is not self-adjoint within %.1e (defect %.3e)" % (hermitian_tol, defect))
    sym = 0.5 * (mat + mat.conj().T)
    eigvals, eigvecs = np.linalg.eigh(sym)
    gvals = np.asarray(g(eigvals), dtype=complex)
    return OperatorMatrix((eigvecs * gvals) @ eigvecs.conj().T, A.row_tag, A.col_tag)


def rank_one_special(basis: ModelBasis) -> OperatorMatrix:
    """The rank-one operator (B/z) (x) 1 on a model space with B(0) = 0.

    Coincides with the compression of multiplication by B(z)/z; its trace
    is the inner product <B/z, 1>, i.e. the linear Taylor coefficient of B.
    """
    B = basis.blaschke
    _require_zero_at_origin(B, "rank_one_special")
    c_bz = basis.expand(lambda th: B.eval(np.exp(1j * th)) * np.exp(-1j * th)).coefficients
    c_one = _constant_coefficients(basis)
    return OperatorMatrix(np.outer(c_bz, c_one.conj()), basis.tag, basis.tag)
