"""Smoothed Brownian motion limit theorems: scalar, free and Hermitian-matrix
regimes, backed by an exact trace-polynomial combinatorics engine."""

__version__ = "0.1.0"

from .exactalg import LaurentN, UNPoly
from .kernels import (
    Autocorrelation,
    Kernel,
    autocorrelation,
    kernel_from_json,
    kernel_from_values,
    make_difference_kernel,
    make_indicator_kernel,
    sigma_q_squared,
)
from .permutations import Perm, compose, restrict_relabel
from .pairings import (
    Partition12,
    catalan,
    contract,
    enumerate_inhomogeneous_pairings,
    enumerate_partition12,
    is_block_rigid_noncrossing,
)
from .tracepoly import (
    TracePolynomial,
    eval_hermite,
    eval_trace_monomial,
    full_cycle,
    hermite_trace_polynomial,
    mixed_moment,
    product_moment,
)
from .constants import (
    ab_coefficients,
    classify_pairing,
    k_constant,
    k_limit,
    leading_pairing_counts,
    variance_functional,
)
from .scalar import (
    BrownianPath,
    HermiteCoeffs,
    MCEstimate,
    fluctuation_statistic,
    mollify,
    occupation_moment,
    sigma_w_squared,
    simulate_bilateral_bm,
)
from .matrixsim import (
    HermitianPath,
    chebyshev_U,
    fluctuation_matrix,
    free_limit_checks,
    gue_moment_exact,
    martingale_diagnostics,
    matrix_lln_estimate,
    mollify_matrix,
    simulate_hermitian_bm,
)
from .mvariate import (
    dumitriu_reference,
    hermite_kappa,
    hermite_tilde_sigma_hat,
    mc_orthogonality,
    proportionality_check,
    rect_covariance,
    rect_process_covariance_check,
)
from .golden import golden_report
from .harness import ExperimentConfig, ResultRecord, golden_suite, run
