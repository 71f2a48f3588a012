"""Dephasing channels, entanglement decay and decoherence timescales.

Simulates two- and three-qubit registers under local and collective pure
dephasing in the operator-sum picture, tracks coherence and bipartite
entanglement, extracts decay timescales, audits the disentanglement-vs-
decoherence inequality, and cross-checks the channels against a stochastic
Hamiltonian Monte Carlo average.
"""

from .channels import (
    ChannelKind,
    KrausSet,
    Local,
    NoiseScenario,
    PairCollective,
    TripleCollective,
    apply_kraus,
    build_local_kraus,
    build_pair_collective_kraus,
    build_triple_collective_kraus,
    evolve,
    gamma,
    kraus_for,
    omega_factors,
    verify_completeness,
)
from .entanglement import (
    ConcurrenceResult,
    concurrence,
    concurrence_curve,
    entanglement_of_formation,
    spin_flip,
    wootters_lambdas,
)
from .errors import EquivalenceNotEstablishedError, UnsupportedScenarioError
from .linalg import (
    QUBITS,
    frobenius_distance,
    hermitian_eigenvalues,
    kron,
    partial_trace,
)
from .montecarlo import (
    ChannelComparison,
    FieldSpec,
    MonteCarloStats,
    TrajectoryConfig,
    compare_to_channel,
    fields_from_scenario,
    simulate_average,
    simulate_statistics,
)
from .presets import (
    PAPER_MATRIX,
    SCENARIO_LAYOUTS,
    STATE_CLASSES,
    draw_state,
    named_scenario,
)
from .states import (
    DensityMatrix,
    Fragile,
    Fragile2,
    GenericPure,
    GHZState,
    Robust,
    Robust2,
    StateSpec,
    WState,
    analytic_evolved,
    projector,
    reduced_all,
)
from .timescales import (
    AuditResult,
    FitResult,
    PairAudit,
    PaperTau,
    TimeGrid,
    TimescaleReport,
    Trajectory,
    audit_inequality,
    build_report,
    default_grid,
    fit_exponential,
    measure_paper_taus,
    paper_tau_table,
    sample_evolution,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
