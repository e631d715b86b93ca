"""Two-copy entanglement estimation via antisymmetric-subspace projection.

A numerical library and scenario CLI for the protocol that estimates the
concurrence of a bipartite state from the probability of projecting two
presumed-identical copies onto the local antisymmetric subspaces, together
with exact constructions of the state families on which the estimate is
correct, falsely positive, inflated, or adversarially pinned.
"""

from .linalg import (
    DensityOperator,
    DensityValidation,
    Ket,
    Operator,
    QubitLayout,
    basis_ket,
    expectation_value,
    hermitian_eigenvalues,
    identity_operator,
    partial_trace,
    permute_subsystems,
    relabel,
    tensor_product,
    validate_density,
)
from .measures import (
    PureEnsemble,
    decomposition_infimum_oracle,
    ensemble_average_concurrence,
    ensemble_upper_bound_entanglement,
    entanglement_entropy,
    eof_from_concurrence,
    pure_concurrence,
    von_neumann_entropy,
    wootters_concurrence,
)
from .projectors import (
    ANTISYMMETRIC,
    SYMMETRIC,
    PairProjector,
    embed_pair_projector,
    pair_projector,
    swap_operator,
)
from .protocol import (
    EstimateVerdict,
    OutcomeDistribution,
    ShotRecord,
    antisym_probability,
    disagreement_probability,
    evaluate_scenario,
    joint_outcome_distribution,
    naive_concurrence_estimate,
    sample_outcomes,
)
from .scenarios import (
    ConfigError,
    ScenarioConfig,
    ScenarioReport,
    emit_report,
    parse_config,
    report_from_json,
    report_to_json,
    run,
)
from .states import (
    ALICE_PAIR,
    BOB_PAIR,
    COPY_MAJOR,
    SIDE_MAJOR,
    DeFinettiEnsemble,
    TwoCopyState,
    custom_state,
    de_finetti_state,
    eve_state,
    identical_pure_copies,
    logical_bell_state,
    phase_averaged_decomposition,
    phase_averaged_state,
    phase_ensemble,
    pure_de_finetti_state,
    single_copy_marginal,
)

__version__ = "0.1.0"
