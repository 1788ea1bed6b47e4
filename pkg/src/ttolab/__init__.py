"""Truncated Toeplitz operators on finite-dimensional model spaces.

Construct finite Blaschke products and their model spaces, compress
multiplication operators to them, decompose the commutant "circulants"
through Clark measures, and drive trace-asymptotic experiments over
growing zero sequences.
"""

__version__ = "0.1.0"

from .blaschke import (
    BlaschkeProduct,
    BoundaryGuardError,
    blaschke_multiply,
    mobius,
    mobius_derivative,
    normalized_product,
)
from .modelspace import (
    ModelBasis,
    QuadratureError,
    default_quadrature_points,
    inner_product,
    reproducing_kernel,
    tm_basis,
)
from .clark import (
    ClarkMeasure,
    RootFindingError,
    aleksandrov_average,
    alpha_nodes,
    clark_measure,
    herglotz_real,
    integrate,
    level_set,
    poisson_integral,
    pushforward,
    weak_star_gap,
)
from .tto import (
    BasisMismatchError,
    CirculantApproximation,
    OperatorMatrix,
    StandardSymbol,
    build_tto,
    circulant_approximant,
    delta_operator,
    diag_operator,
    extract_standard_symbol,
    functional_calculus,
    identity_operator,
    modified_shift,
    rank_one_special,
    schatten_norm,
    sedlock_element,
    sedlock_spectral,
    transplant_unitary,
)
from .szego import (
    ConvergenceRow,
    HypothesisSearchError,
    ZeroSequence,
    circle_layers,
    constant_zero,
    example1_profile,
    example1_zeros,
    example2_run,
    explicit,
    fixed_alpha_sweep,
    radial_harmonic,
    real_fast,
    szego_g_sweep,
    szego_power_sweep,
    weight_operator,
)
