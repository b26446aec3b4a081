"""Polynomial projections on the unit sphere from positive quadrature rules:
hyperinterpolation, discrete least squares, Lebesgue-constant estimation,
and node-set uniformity diagnostics."""

__version__ = "0.1.0"

from .backend import backend_name
from .errors import (
    ConfigurationError,
    DegenerateNodeSetError,
    DimensionMismatchError,
    DomainError,
    EvaluationError,
    InvariantViolationError,
    NumericalError,
    RuleFormatError,
    SphereProjError,
)
from .geometry import (
    EvaluationSet,
    geodesic_distance,
    load_points,
    normalize,
    random_rotation,
    random_unit_points,
    save_points,
    surface_area,
)
from .harmonics import basis_dimension, eval_harmonic_basis, harmonic_basis_matrix, harmonic_orders
from .orthopoly import (
    DarbouxKernel,
    GaussLegendreRule,
    darboux_kernel_build,
    fourier_lebesgue_constant,
    gauss_legendre_rule,
    legendre_eval,
)
from .pointsets import (
    CertificateReport,
    MeshStats,
    cap_count,
    cap_count_certificate,
    certificate_report,
    mesh_norm,
    mesh_stats,
    separation,
    spiral_points,
    weight_ratio_certificate,
)
from .projections import (
    DiscreteOrthonormalBasis,
    FourierProjectionOperator,
    HyperinterpolationOperator,
    LeastSquaresOperator,
    LebesgueReport,
    build_ls_basis,
    lebesgue_constant_estimate,
    ls_lebesgue_function,
    ls_project,
    uniform_error_estimate,
)
from .quadrature import (
    QuadratureRule,
    integrate,
    load_rule,
    monomial_sphere_integral,
    save_rule,
    tensor_gl_rule,
    verify_exactness,
)
