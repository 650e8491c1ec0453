"""Numerical ranges and restricted numerical shadows of complex matrices.

The shadow of an operator is the probability density of its expectation
value over random pure states; restricting the states to a submanifold
(real states, product states, maximally entangled states, local orbits of
three-qubit seeds) probes the geometry of that submanifold. This package
provides the Monte Carlo estimator, the closed-form moment and density
layer it is validated against, numerical-range geometry, and a two-qubit
entanglement-dynamics simulator.
"""

__version__ = "0.1.0"

from .backend import COMPILED
from .catalog import get as catalog_get, matrix_from_json, matrix_to_json, names as catalog_names
from .dynamics import DynamicsConfig, bell_state, is_separable_2x2, trajectory
from .engine import (
    GridSpec,
    MomentEstimate,
    ShadowHistogram,
    auto_grid,
    diag_fast_sample,
    estimate_moments,
    estimate_shadow,
    sample_values,
    tensor_shadow_compose,
)
from .linalg import expectation, hermitian_eigensystem, kron, partial_trace, partial_transpose
from .moments import (
    MomentReport,
    collins_sniady_coeffs,
    complex_shadow_variance,
    entangled_moments,
    g3_density,
    g3_moment,
    hyp2f1,
    real_shadow_cdf,
    real_shadow_variance,
    separable_moments,
    sphere_monomial,
)
from .ranges import RangePolygon, minkowski_product, numerical_range_boundary, restricted_support
from .sampling import (
    PureState,
    Restriction,
    RngStream,
    SchmidtSpec,
    full_complex,
    full_real,
    ghz_orbit,
    max_entangled,
    parse_restriction,
    product,
    sample_dirichlet,
    sample_haar_unitary,
    sample_pure,
    sample_schmidt_state,
    w_orbit,
)
