"""Entanglement quasiprobabilities of (dephased) two-mode squeezed vacuum states."""

from .errors import (
    ConsistencyError,
    DegenerateDeltaError,
    MatrixParseError,
    ParameterDomainError,
    ResourceLimitError,
    UndefinedErrorMetric,
    ValidationError,
)
from .quasiprob import (
    AnalysisReport,
    GramSystem,
    QuasiprobDistribution,
    ReconstructionReport,
    analyze,
    build_gram,
    ppt_check,
    reconstruct_state,
    reconstruction_error,
    solve_quasiprob,
)
from .solver import (
    SESolution,
    enumerate_solutions,
    max_se_value,
    reduced_operator_a,
    solve_support,
)
from .state import (
    DELTA,
    CoefficientMatrix,
    PhaseDistribution,
    StateMeta,
    apply_dephasing,
    build_tmsv,
    dephased_tmsv,
    dephasing_factor,
    load_matrix,
    phase_pdf,
    save_matrix,
    zeta_from_db,
)

__version__ = "0.1.0"
