"""Trace asymptotics of truncated Toeplitz operators over growing model spaces.

Drives the convergence experiments: for a sequence of disk zeros, the
compressions act on the model space of the degree-n partial product B_n,
and the weighted traces

    Tr( T[1/|B_n'|] T[psi]^p )      and      Tr( Delta_n^alpha T[psi]^p )

are compared against circle integrals of psi^p.  When the zero radii
approach the boundary slowly enough that sum (1 - |lam_j|) diverges, the
traces converge to the Lebesgue integral; Blaschke sequences may fail to
converge, which the two constructive examples exhibit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blaschke import BlaschkeProduct, normalized_product
from .clark import clark_measure
from .modelspace import ModelBasis, tm_basis
from . import tto

_TWO_PI = 2.0 * math.pi

#: Largest model-space dimension accepted by the sweeps (dense spectral
#: work is cubic in n).
MAX_DIMENSION = 400

#: Node count for the high-resolution limit quadrature.
LIMIT_QUADRATURE = 1 << 16

GOLDEN_ANGLE = math.pi * (math.sqrt(5.0) - 1.0)


class HypothesisSearchError(RuntimeError):
    """No admissible zero sequence found within the trial budget."""


@dataclass(frozen=True)
class ZeroSequence:
    """Recipe for the first n zeros of a growing Blaschke product.

    kind is one of:

    * ``constant_zero``   -- all zeros at the origin (classical Toeplitz case);
    * ``radial_harmonic`` -- |lam_j| = 1 - 1/(j+1) with golden-angle
      arguments; the radii deficits form the harmonic series, so the
      sequence is never Blaschke;
    * ``circles``         -- m^2 equispaced points on the circle of radius
      1 - 1/m^4 for m = 1..m_max (a Blaschke sequence);
    * ``real_fast``       -- lam_1 = 0 then real lam_j = 1 - c q^j increasing
      to 1 geometrically fast (a Blaschke sequence);
    * ``explicit``        -- a fixed list.
    """

    kind: str
    params: tuple = ()

    @property
    def is_blaschke(self) -> bool:
        # decided per kind: sum (1 - |lam_j|) is the harmonic series for
        # radial_harmonic and n for constant_zero (divergent); circles are
        # dominated by sum 1/m^2 and real_fast by a geometric series.
        if self.kind in ("constant_zero", "radial_harmonic"):
            return False
        if self.kind in ("circles", "real_fast"):
            return True
        if self.kind == "explicit":
            return bool(self.params[1])
        raise ValueError("unknown sequence kind %r" % self.kind)

    def available(self) -> int | None:
        """Number of zeros the recipe can produce (None if unbounded)."""
        if self.kind == "circles":
            m_max = self.params[0]
            return sum(m * m for m in range(1, m_max + 1))
        if self.kind == "explicit":
            return len(self.params[0])
        return None

    def zeros(self, n: int) -> np.ndarray:
        if n < 1:
            raise ValueError("need at least one zero")
        cap = self.available()
        if cap is not None and n > cap:
            raise ValueError("sequence provides only %d zeros (asked for %d)" % (cap, n))
        if self.kind == "constant_zero":
            return np.zeros(n, dtype=complex)
        if self.kind == "radial_harmonic":
            j = np.arange(1, n + 1)
            return (1.0 - 1.0 / (j + 1)) * np.exp(1j * GOLDEN_ANGLE * j)
        if self.kind == "circles":
            out = []
            m = 1
            while len(out) < n:
                radius = 1.0 - 1.0 / m ** 4
                pts = radius * np.exp(2j * np.pi * (np.arange(m * m) + 0.5 * (m % 2)) / (m * m))
                out.extend(pts)
                m += 1
            return np.asarray(out[:n], dtype=complex)
        if self.kind == "real_fast":
            c, q = self.params
            j = np.arange(2, n + 1)
            lam = 1.0 - c * q ** j
            return np.concatenate([[0.0], lam]).astype(complex)
        if self.kind == "explicit":
            return np.asarray(self.params[0][:n], dtype=complex)
        raise ValueError("unknown sequence kind %r" % self.kind)

    def blaschke(self, n: int) -> BlaschkeProduct:
        return normalized_product(self.zeros(n))


def constant_zero() -> ZeroSequence:
    return ZeroSequence("constant_zero")


def radial_harmonic() -> ZeroSequence:
    return ZeroSequence("radial_harmonic")


def circle_layers(m_max: int) -> ZeroSequence:
    if m_max < 1:
        raise ValueError("need at least one circle layer")
    if 1.0 / m_max ** 4 < 1e-8:
        raise ValueError("layer %d would violate the boundary guard (radius too close to 1)" % m_max)
    return ZeroSequence("circles", (int(m_max),))


def real_fast(c: float, q: float) -> ZeroSequence:
    if not (0.0 < q < 1.0 and c > 0.0):
        raise ValueError("real_fast requires c > 0 and 0 < q < 1")
    return ZeroSequence("real_fast", (float(c), float(q)))


def explicit(zeros, blaschke_kind: bool = True) -> ZeroSequence:
    return ZeroSequence("explicit", (tuple(np.asarray(zeros, dtype=complex)), bool(blaschke_kind)))


@dataclass(frozen=True)
class ConvergenceRow:
    """One sweep entry: the weighted trace at dimension n against its limit."""

    n: int
    trace_value: complex
    limit_value: complex
    abs_error: float
    delta_norm: float | None = None


def _make_row(n, trace_value, limit_value, delta_norm=None) -> ConvergenceRow:
    trace_value = complex(trace_value)
    limit_value = complex(limit_value)
    return ConvergenceRow(int(n), trace_value, limit_value, abs(trace_value - limit_value), delta_norm)


def _check_ns(ns):
    ns = [int(n) for n in ns]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be a nonempty strictly increasing list")
    if ns[-1] > MAX_DIMENSION:
        raise ValueError("largest n exceeds the dense-solver cap %d" % MAX_DIMENSION)
    return ns


def circle_mean(f, p: int = 1, nodes: int = LIMIT_QUADRATURE) -> complex:
    """High-resolution equispaced quadrature of f(theta)^p over the circle."""
    theta = _TWO_PI * np.arange(nodes) / nodes
    return complex(np.mean(np.asarray(f(theta), dtype=complex) ** p))


def weight_operator(basis: ModelBasis) -> tto.OperatorMatrix:
    """Compression of multiplication by 1/|B'| on the boundary.

    Reduces to (1/n) I in the classical all-zeros-at-origin case, and
    equals the average of the Clark-weight diagonal operators over the
    unimodular parameter.
    """
    B = basis.blaschke
    return tto.build_tto(basis, lambda th: 1.0 / B.boundary_derivative_modulus(th))


def szego_power_sweep(seq: ZeroSequence, symbol, p: int, ns, quadrature_points=None) -> list[ConvergenceRow]:
    """Rows of Tr(weight * T[symbol]^p) against the circle mean of symbol^p."""
    ns = _check_ns(ns)
    p = int(p)
    limit = circle_mean(symbol, p)
    rows = []
    for n in ns:
        basis = tm_basis(seq.blaschke(n), quadrature_points=quadrature_points)
        W = weight_operator(basis)
        T = tto.build_tto(basis, symbol)
        rows.append(_make_row(n, (W @ T.power(p)).trace(), limit))
    return rows


def szego_g_sweep(seq: ZeroSequence, symbol, g, ns, quadrature_points=None) -> list[ConvergenceRow]:
    """Rows of Tr(weight * g(T[symbol])) for real symbols and continuous g."""
    ns = _check_ns(ns)
    theta_probe = _TWO_PI * np.arange(512) / 512
    if float(np.abs(np.imag(np.asarray(symbol(theta_probe), dtype=complex))).max()) > 1e-10:
        raise ValueError("g-sweeps require a real-valued symbol (self-adjoint compression)")

    def g_of_symbol(theta):
        return np.asarray(g(np.real(np.asarray(symbol(theta), dtype=complex))), dtype=complex)

    limit = circle_mean(g_of_symbol, 1)
    rows = []
    for n in ns:
        basis = tm_basis(seq.blaschke(n), quadrature_points=quadrature_points)
        W = weight_operator(basis)
        T = tto.build_tto(basis, symbol)
        G = tto.functional_calculus(T, g)
        rows.append(_make_row(n, (W @ G).trace(), limit))
    return rows


def fixed_alpha_sweep(seq: ZeroSequence, alpha, symbol, p: int, ns,
                      quadrature_points=None) -> list[ConvergenceRow]:
    """Rows of Tr(Delta_n^alpha T[symbol]^p), reporting ||Delta_n^alpha|| per row.

    The limit is the circle mean of symbol^p for non-Blaschke recipes; for
    Blaschke recipes it is the integral against the Clark measure of the
    largest prefix, the finite stand-in for the limiting product.
    """
    ns = _check_ns(ns)
    p = int(p)
    alpha = complex(alpha)
    if seq.is_blaschke:
        mu_limit = clark_measure(seq.blaschke(ns[-1]), alpha)
        limit = mu_limit.integrate(lambda z: np.asarray(symbol(np.mod(np.angle(z), _TWO_PI)), dtype=complex) ** p)
    else:
        limit = circle_mean(symbol, p)
    rows = []
    for n in ns:
        basis = tm_basis(seq.blaschke(n), quadrature_points=quadrature_points)
        mu = clark_measure(basis.blaschke, alpha)
        D = tto.delta_operator(basis, alpha)
        T = tto.build_tto(basis, symbol)
        rows.append(_make_row(n, (D @ T.power(p)).trace(), limit, delta_norm=float(mu.weights.max())))
    return rows


# -- Blaschke-sequence example 1: circle layers ------------------------------


@dataclass(frozen=True)
class CircleLayerLevel:
    """Prefix of the circle-layer sequence through one radius level."""

    level: int
    n_zeros: int
    min_boundary_derivative: float
    lower_bound: float
    delta_norm: float


def example1_zeros(m_max: int) -> ZeroSequence:
    """Circle-layer Blaschke sequence: m^2 points at radius 1 - 1/m^4 per level."""
    return circle_layers(m_max)


def example1_profile(m_max: int, boundary_samples: int = 4096, alpha=1.0) -> list[CircleLayerLevel]:
    """Per-level minima of |B_n'| (with the N/100 lower bound) and ||Delta||.

    Every boundary point sits within 10/m^2 of some level-m zero, whose
    Poisson term then contributes at least 1/100; stacking the levels
    pushes min |B_n'| above level/100 and drives the largest Clark weight
    down.
    """
    seq = example1_zeros(m_max)
    theta = _TWO_PI * np.arange(boundary_samples) / boundary_samples
    levels = []
    count = 0
    for m in range(1, m_max + 1):
        count += m * m
        B = seq.blaschke(count)
        min_deriv = float(B.boundary_derivative_modulus(theta).min())
        mu = clark_measure(B, alpha)
        levels.append(CircleLayerLevel(m, count, min_deriv, m / 100.0, float(mu.weights.max())))
    return levels


# -- Blaschke-sequence example 2: real zeros rushing to 1 --------------------


@dataclass(frozen=True)
class Example2Result:
    """Non-convergence witness: the weighted trace of the rank-one compression.

    `trace_direct` comes from matrix arithmetic, `trace_formula` from the
    closed form sum conj(atom)/|B'(atom)|^2; both stay bounded away from
    zero (|trace| > 1/3) although the symbol's Clark integral vanishes.
    """

    zeros: np.ndarray
    c: float
    q: float
    trials: int
    trace_direct: complex
    trace_formula: complex
    bound_ok: bool
    b_prime_at_minus1: float
    min_bprime_off_arc: float
    arc_max_bprime: float


#: Example-2 admissibility thresholds, from the constructive argument:
#: |B_n'(-1)| <= 3/2 and |B_n'| <= 11/10 on the long arc between
#: e^{+-i/10} through -1, which forces |B_n'| >= 9 pi at every other atom.
_EX2_MINUS1_BOUND = 1.5
_EX2_ARC_BOUND = 1.1

#: Keep 1 - lam_n large enough that the enlarged quadrature stays feasible.
_EX2_RADIAL_FLOOR = 4e-6


def _example2_hypotheses(B: BlaschkeProduct, arc_samples: int = 4096):
    t = np.linspace(0.1, _TWO_PI - 0.1, arc_samples)
    arc_max = float(B.boundary_derivative_modulus(t).max())
    at_minus1 = float(B.boundary_derivative_modulus(math.pi))
    return at_minus1, arc_max


def example2_run(n: int = 5, c0: float = 0.02, q: float = 0.5, budget: int = 40,
                 quadrature_points=None) -> Example2Result:
    """Search for an admissible real_fast sequence and evaluate both traces.

    Starting from lam_j = 1 - c0 q^j (j >= 2), the scale c is halved until
    the sampled hypotheses hold; the budget caps the number of trials.
    Raises HypothesisSearchError when no admissible scale is found.
    """
    if n < 2:
        raise ValueError("example needs degree at least 2")
    c = float(c0)
    for trial in range(1, budget + 1):
        if c * q ** 2 >= 0.5:
            c *= 0.5
            continue
        if c * q ** n < _EX2_RADIAL_FLOOR:
            raise HypothesisSearchError(
                "hypotheses unmet before the zero radii hit the quadrature floor (c = %.3e)" % c
            )
        seq = real_fast(c, q)
        B = seq.blaschke(n)
        at_minus1, arc_max = _example2_hypotheses(B)
        if at_minus1 <= _EX2_MINUS1_BOUND and arc_max <= _EX2_ARC_BOUND:
            break
        c *= 0.5
    else:
        raise HypothesisSearchError(
            "no admissible sequence within %d trials (last c = %.3e)" % (budget, c * 2)
        )

    mu = clark_measure(B, 1.0)
    deriv = 1.0 / mu.weights
    near_minus1 = int(np.argmin(np.abs(mu.atoms + 1.0)))
    off = np.ones(mu.atoms.size, dtype=bool)
    off[near_minus1] = False
    trace_formula = complex(np.sum(np.conj(mu.atoms) * mu.weights ** 2))

    eps = float(1.0 - np.abs(B.zeros).max())
    m = quadrature_points or max(1024, 64 * n, math.ceil(30.0 / eps))
    basis = tm_basis(B, quadrature_points=m)
    trace_direct = (tto.delta_operator(basis, 1.0) @ tto.rank_one_special(basis)).trace()

    return Example2Result(
        zeros=B.zeros,
        c=c,
        q=q,
        trials=trial,
        trace_direct=trace_direct,
        trace_formula=trace_formula,
        bound_ok=bool(abs(trace_direct) > 1.0 / 3.0),
        b_prime_at_minus1=float(deriv[near_minus1]),
        min_bprime_off_arc=float(deriv[off].min()) if off.any() else math.inf,
        arc_max_bprime=arc_max,
    )
