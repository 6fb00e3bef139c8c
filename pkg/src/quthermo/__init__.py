"""Precision limits of local temperature estimation and the nonclassical
correlations that govern them, for finite-dimensional thermal states."""

from .asymptotics import (
    AsymptoticCheck,
    IdentityComparison,
    LeadingCoefficients,
    first_order_state,
    high_temperature_regime,
    identity_comparison,
    interaction_correction_a,
    interaction_correction_b,
    order_check_probability_term,
    order_check_qfi,
    sech_squared_loss,
    xstate_leading_terms,
)
from .correlations import (
    DiscordReport,
    classical_correlation,
    classical_correlation_rate,
    conditional_entropy_after_measurement,
    diagonal_discord,
    diagonal_discord_rate,
    discord_report,
    multipartite_diagonal_discord,
    mutual_information,
    mutual_information_rate,
    quantum_discord,
    total_correlation,
)
from .derivatives import central_derivative, scaled_rate
from .errors import (
    DomainError,
    InvariantViolation,
    NumericalError,
    QuthermoError,
    RegimeWarning,
    ResourceError,
    UsageError,
)
from .linalg import (
    DensityMatrix,
    EigenDecomposition,
    HermitianOperator,
    SubsystemLayout,
    eigh,
    fidelity,
    matrix_function,
    partial_trace,
    tensor_product,
    trace_distance,
    von_neumann_entropy,
)
from .measurements import BlochMeasurement, ProjectorSet
from .models import (
    ChainParams,
    PartitionedHamiltonian,
    TwoQubitXYZParams,
    build_chain,
    build_two_qubit,
    build_xy_anisotropy,
)
from .thermometry import (
    GibbsEnsemble,
    GreedyScheme,
    classical_fisher,
    conditional_state,
    gibbs,
    greedy_locc_qfi,
    greedy_scheme,
    heat_capacity,
    local_qfi,
    optimal_local_measurement,
    precision_loss,
    qfi_fidelity_difference,
    qfi_general,
    qfi_gibbs,
)

__version__ = "0.1.0"
