"""Orthonormal bases, reproducing kernels, and circle quadrature for model spaces.

The model space of a finite Blaschke product B of degree N is the
N-dimensional space of rational functions orthogonal to B*H^2 inside H^2.
We realize it through the Takenaka-Malmquist basis

    e_k(z) = sqrt(1 - |lam_{k+1}|^2)/(1 - conj(lam_{k+1}) z) * prod_{j<=k} b_{lam_j}(z)

which is orthonormal by construction and reduces to the monomials z^k
when every zero sits at the origin.  Inner products are equal-weight
averages over M equispaced boundary nodes; for the rational integrands
that arise here this rule is spectrally accurate, with aliasing decaying
like (max |lam_j|)^M.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct

_TWO_PI = 2.0 * math.pi

#: Chunk length for streaming quadrature when the sample matrix is too
#: large to keep in memory.
CHUNK = 1 << 16

#: Largest N*M sample matrix kept dense (complex128 entries).
_CACHE_LIMIT = 1 << 22

_tag_counter = itertools.count()


class QuadratureError(RuntimeError):
    """Circle quadrature too coarse for the requested accuracy."""


def default_quadrature_points(B: BlaschkeProduct, minimum: int = 1024) -> int:
    """Default node count: max(1024, 64 N, ceil(16/(1 - max|lam|))).

    Poles of the basis sit at 1/conj(lam); resolving them needs nodes
    scaling like the reciprocal distance of the outermost zero to the
    circle.
    """
    n = max(B.degree, 1)
    rmax = float(np.abs(B.zeros).max()) if B.degree else 0.0
    return int(max(minimum, 64 * n, math.ceil(16.0 / (1.0 - rmax))))


def inner_product(f, g):
    """H^2 inner product of two boundary sample arrays: mean(f * conj(g))."""
    farr = np.asarray(f, dtype=complex)
    garr = np.asarray(g, dtype=complex)
    if farr.shape != garr.shape:
        raise ValueError("sample counts differ: %s vs %s" % (farr.shape, garr.shape))
    return complex(np.mean(farr * np.conj(garr)))


@dataclass(frozen=True)
class Expansion:
    """Coefficients of a boundary function against a ModelBasis.

    `residual` is the quadrature norm of the part orthogonal to the
    basis span; it is diagnostic, not an error.
    """

    coefficients: np.ndarray
    residual: float


class ModelBasis:
    """Takenaka-Malmquist basis of the model space of a finite Blaschke product.

    Stores the quadrature grid (and the sampled basis matrix when it fits
    in memory), verifies discrete orthonormality at construction, and
    provides evaluation, expansion, and inner products.  Immutable after
    construction; all methods are pure.
    """

    def __init__(self, blaschke: BlaschkeProduct, quadrature_points=None, gram_tol=1e-8):
        n = blaschke.degree
        if n < 1:
            raise ValueError("model space requires a Blaschke product of degree >= 1")
        if quadrature_points:
            candidates = [int(quadrature_points)]
        else:
            # a defaulted grid may double a few times: the heuristic count is
            # marginal against the Gram threshold when zeros hug the circle
            base = default_quadrature_points(blaschke)
            candidates = [base, 2 * base, 4 * base, 8 * base]
        if candidates[0] < 8 * n:
            raise ValueError(
                "quadrature_points must be at least 8 * degree (got %d < %d)" % (candidates[0], 8 * n)
            )
        self.blaschke = blaschke
        self.dimension = n
        self.tag = "modelbasis-%d(deg=%d)" % (next(_tag_counter), n)
        err = float("inf")
        for m in candidates:
            self.quadrature_points = m
            self._cached = n * m <= _CACHE_LIMIT
            if self._cached:
                self.thetas = _TWO_PI * np.arange(m) / m
                self.points = np.exp(1j * self.thetas)
                self._samples = self.evaluate(self.points)
                gram = (self._samples @ self._samples.conj().T) / m
            else:
                self.thetas = None
                self.points = None
                self._samples = None
                gram = np.zeros((n, n), dtype=complex)
                for _, _, block in self.iter_chunks():
                    gram += block @ block.conj().T
                gram /= m
            err = float(np.abs(gram - np.eye(n)).max())
            if err <= gram_tol:
                break
        if err > gram_tol:
            raise QuadratureError(
                "Gram deviation %.3e exceeds %.1e; increase quadrature_points (M = %d)"
                % (err, gram_tol, self.quadrature_points)
            )
        self.gram_error = err

    def __repr__(self):
        return "ModelBasis(%s, M=%d, gram_error=%.2e)" % (self.tag, self.quadrature_points, self.gram_error)

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, z):
        """Basis values as an (N, len(z)) matrix; z scalar gives shape (N, 1)."""
        zarr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty((self.dimension, zarr.size), dtype=complex)
        carry = np.ones(zarr.size, dtype=complex)
        for k, lam in enumerate(self.blaschke.zeros):
            out[k] = math.sqrt(1.0 - abs(lam) ** 2) / (1.0 - np.conjugate(lam) * zarr) * carry
            carry = carry * (zarr - lam) / (1.0 - np.conjugate(lam) * zarr)
        return out

    def synthesize(self, coefficients, z):
        """Evaluate sum_k c_k e_k at points z."""
        c = np.asarray(coefficients, dtype=complex)
        if c.shape != (self.dimension,):
            raise ValueError("coefficient vector must have length %d" % self.dimension)
        vals = c @ self.evaluate(z)
        return vals if np.ndim(z) else complex(vals[0])

    def iter_chunks(self):
        """Yield (theta, z, E) blocks covering the quadrature grid."""
        m = self.quadrature_points
        if self._cached:
            for lo in range(0, m, CHUNK):
                hi = min(lo + CHUNK, m)
                yield self.thetas[lo:hi], self.points[lo:hi], self._samples[:, lo:hi]
        else:
            for lo in range(0, m, CHUNK):
                hi = min(lo + CHUNK, m)
                theta = _TWO_PI * np.arange(lo, hi) / m
                z = np.exp(1j * theta)
                yield theta, z, self.evaluate(z)

    @property
    def sample_matrix(self):
        """Dense (N, M) sample matrix; only available for cached bases."""
        if self._samples is None:
            raise QuadratureError("sample matrix too large to cache; use iter_chunks()")
        return self._samples

    # -- projections --------------------------------------------------------

    def _samples_of(self, f, theta, z):
        if callable(f):
            vals = np.asarray(f(theta), dtype=complex)
            if vals.shape != theta.shape:
                raise ValueError("boundary function must return one value per node")
            return vals
        raise TypeError("streaming expansion requires a callable boundary function")

    def expand(self, f) -> Expansion:
        """Project a boundary function onto the basis.

        `f` is either a callable of theta (radians, vectorized) or an
        array of samples on the basis grid.  Returns coefficients
        c_k = <f, e_k> and the quadrature norm of f - sum c_k e_k.
        """
        m = self.quadrature_points
        if not callable(f):
            farr = np.asarray(f, dtype=complex)
            if farr.shape != (m,):
                raise ValueError("sample array must match the quadrature grid (length %d)" % m)
            if not self._cached:
                raise QuadratureError("pass a callable for streamed quadrature")
            coeff = (self._samples.conj() @ farr) / m
            resid = farr - coeff @ self._samples
            return Expansion(coeff, float(np.sqrt(np.mean(np.abs(resid) ** 2))))
        coeff = np.zeros(self.dimension, dtype=complex)
        for theta, z, block in self.iter_chunks():
            coeff += block.conj() @ self._samples_of(f, theta, z)
        coeff /= m
        res2 = 0.0
        for theta, z, block in self.iter_chunks():
            diff = self._samples_of(f, theta, z) - coeff @ block
            res2 += float(np.sum(np.abs(diff) ** 2))
        return Expansion(coeff, math.sqrt(res2 / m))


def tm_basis(B: BlaschkeProduct, quadrature_points=None, gram_tol=1e-8) -> ModelBasis:
    """Construct the Takenaka-Malmquist ModelBasis for B."""
    return ModelBasis(B, quadrature_points=quadrature_points, gram_tol=gram_tol)


def reproducing_kernel(B: BlaschkeProduct, w, z):
    """Kernel k_w(z) = (1 - conj(B(w)) B(z))/(1 - conj(w) z).

    `w` may lie inside the disk or on the circle (finite Blaschke products
    are smooth up to the boundary).  Near the diagonal the quotient
    switches to the difference form w conj(B(w)) (B(w) - B(z))/(w - z),
    and at exact boundary coincidence it returns |B'(w)|.
    """
    w = complex(w)
    if abs(w) > 1.0 + 1e-9:
        raise ValueError("kernel base point must lie in the closed unit disk")
    zarr = np.atleast_1d(np.asarray(z, dtype=complex))
    bw = B.eval(w)
    bz = B.eval(zarr)
    denom = 1.0 - np.conjugate(w) * zarr
    out = np.empty(zarr.shape, dtype=complex)
    near = np.abs(denom) < 1e-9
    far = ~near
    out[far] = (1.0 - np.conjugate(bw) * bz[far]) / denom[far]
    if near.any():
        # |denom| small forces both points onto the circle near each other
        zn = zarr[near]
        gaps = w - zn
        quot = np.empty(zn.shape, dtype=complex)
        tiny = np.abs(gaps) < 1e-12
        quot[~tiny] = w * np.conjugate(bw) * (bw - bz[near][~tiny]) / gaps[~tiny]
        if tiny.any():
            quot[tiny] = B.boundary_derivative_modulus(float(np.angle(w)))
        out[near] = quot
    return out if np.ndim(z) else complex(out[0])
