"""Bell-CHSH function, concurrence and quantum discord on two-qubit
reduced density matrices of matrix product states, with parameter sweeps
that locate MPS quantum phase transitions and separate them from
artifacts of the measures' max-function definitions."""

from .numerics import (
    DEGENERACY_TOL,
    EIGEN_RESIDUAL_TOL,
    HERMITICITY_TOL,
    POSITIVITY_TOL,
    TRACE_TOL,
    EigenSolverError,
    eig_general,
    eig_hermitian,
    kron,
    matmul,
)
from .mps import (
    INFINITE,
    DegenerateTransferSpectrum,
    MPSModel,
    TransferSpectrum,
    correlation_length,
    level_crossing_scan,
    rdm_adjacent,
    rdm_adjacent_auto,
    rdm_pair,
    rdm_pair_auto,
    suggested_n_sites,
    transfer_matrix,
    transfer_spectrum,
)
from .models import (
    BUILTIN_FAMILIES,
    RUNG,
    ModelFamily,
    closed_form_rdm,
    hamiltonian_coefficients,
    ladder_family,
    three_body_family,
    xyz_family,
)
from .correlations import (
    CorrelationReport,
    InvalidStateError,
    bcf,
    bcf_bruteforce,
    chsh_expectation,
    classical_correlation,
    classify,
    concurrence,
    correlation_tensor,
    discord,
    mutual_information,
    partial_trace,
    spin_flip,
    von_neumann_entropy,
)
from .sweep import (
    MATHEMATICAL,
    PHYSICAL,
    SingularityReport,
    SweepResult,
    SweepRow,
    SweepSpec,
    classify_singularity,
    detect_kinks,
    find_singularities,
    run_sweep,
    threshold_crossing,
)
from .config import (
    ConfigError,
    ExprEvalError,
    ExprSyntaxError,
    eval_expr,
    load_model_config,
    parse_expr,
    parse_model_config,
    print_expr,
)

__version__ = "0.1.0"
