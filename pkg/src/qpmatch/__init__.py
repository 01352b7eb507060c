"""Exact simulation and circuit synthesis for Grover-style closest pattern matching."""

__version__ = "0.1.0"

from .errors import DomainError, ResourceError
from .text import (
    SENTINEL,
    ClassicalMatchResult,
    OracleIndex,
    Pattern,
    SymbolIndicator,
    Text,
    build_index,
    closest_match_classical,
    f_sigma,
    hamming_score,
    pad_to_power_of_two,
    recode_kgrams,
)
from .simulation import (
    FullStateReference,
    MatchDistribution,
    TailEntangledState,
    apply_diffusion,
    apply_query_phase,
    embed_full,
    export_snapshot_csv,
    full_apply_diffusion,
    full_apply_query,
    full_init_state,
    full_reference_apply,
    init_state,
    measure_first_register,
)
from .search import (
    GroverSchedule,
    RunConfig,
    RunOutcome,
    SuccessEstimate,
    draw_schedule,
    estimate_distribution,
    grover_step,
    max_iterations,
    run_once,
    success_probability,
    wilson_interval,
)
from .circuits import (
    Circuit,
    Gate,
    GateCountReport,
    GrayCodePath,
    Permutation,
    Transposition,
    emit_circuit,
    expand_mcx,
    gate_count,
    gray_code,
    init_state_target,
    lift_boolean,
    parse_circuit,
    permutation_action,
    permutation_to_transpositions,
    simulate_dense,
    simulate_statevector,
    simulate_unitary,
    synth_boolean_oracle,
    synth_init_state_circuit,
    synth_permutation,
    synth_phase_oracle,
    synth_transposition,
)
