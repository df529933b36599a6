"""Isometric embeddings of model spaces of finite Blaschke products.

Schur parameters <-> atomic embedding measures, Gram-matrix verification,
Pick interpolation and extreme-point classification.
"""
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .rational import (
    BlaschkeProduct,
    Polynomial,
    RationalSchur,
    as_rational,
    circle_grid,
    mobius_precompose,
    multiply,
    reverse_polynomial,
    schur_check,
    to_quotient,
)
from .clark import (
    AtomicMeasure,
    HerglotzData,
    beta_of,
    clark_measure,
    max_mass,
    measure_from_schur,
    measures_match,
    schur_from_measure,
    shared_support,
    support_points,
    weights,
)
from .model_space import (
    IsometryCertificate,
    ModelBasis,
    e_space_functions,
    e_space_matrix,
    gram_lebesgue,
    gram_measure,
    model_basis,
    verify_isometry,
)
from .pick import (
    PickSystem,
    boundary_fbp_interpolation,
    numerical_rank,
    pick_matrix,
    recover_fbp,
    solvability,
    uniqueness,
)
from .extremal import (
    ExtremalityReport,
    Primality,
    Verdict,
    decomposition_oracle,
    factor_witness,
    is_extreme,
    mobius_reduce,
    oracle_verdict,
    theta_prime_fbp,
    theta_product,
)

__version__ = "0.1.0"
