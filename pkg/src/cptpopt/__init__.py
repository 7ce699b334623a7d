"""Optimal completely positive trace-preserving maps by semidefinite programming.

Build the fidelity operator of a desired transformation, solve for the best
physical channel with certified primal/dual bounds, derive fidelity upper
bounds from reduced dual certificates, and verify closed-form candidates via
complementary slackness.  Includes the qubit polar-angle shifter case study
end to end.
"""

from .certify import (
    CERTIFIED_OPTIMAL,
    FEASIBLE_NOT_CERTIFIED,
    INFEASIBLE,
    CertReport,
    CertTolerances,
    SlacknessSolution,
    certificate_from_slackness,
    certify,
)
from .dual import (
    CertificateError,
    DualCertificate,
    certificate_matrix,
    extract_certificate,
    fidelity_upper_bound,
    min_dual_shift,
    optimal_certificate,
    subgradient_certificate,
)
from .linalg import (
    DimensionError,
    EigenDecomposition,
    NumericalError,
    as_hermitian,
    eigh,
    hermitian_basis,
    is_psd,
    kron,
    max_eigenvalue,
    min_eigenvalue,
    partial_trace_out,
    real_embed,
)
from .model import (
    ChoiOperator,
    EnsembleError,
    NotTracePreservingError,
    SDPProblem,
    TransformationEnsemble,
    apply_channel,
    assemble_operator,
    build_sdp,
    extract_coefficients,
    fidelity,
    fidelity_from_primal,
    fidelity_operator,
    pure_state,
)
from .shifter import (
    ALPHA0,
    SweepRecord,
    analytic_fidelity,
    cos_beta,
    dual_ansatz,
    in_first_regime,
    primal_ansatz,
    shift_coefficients,
    shifter_fidelity_operator,
    sweep,
)
from .solver import (
    CONVERGED,
    ITERATION_LIMIT,
    NUMERICAL_FAILURE,
    FeasibilityReport,
    SDPSolution,
    SolverConvergenceError,
    SolverOptions,
    check_dual_feasible,
    check_primal_feasible,
    solve,
)

__version__ = "0.1.0"
