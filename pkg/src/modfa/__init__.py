"""Acceptors for the unary language {a^j : j = 0 mod p}: automaton
constructions, basis-gate circuit compilation, exact and noisy simulation.
"""

from .circuit import (
    Circuit,
    CircuitError,
    CircuitParseError,
    Gate,
    depth,
    equiv_global_phase,
    gate_counts,
    parse,
    serialize,
    unitary_of,
)
from .compiler import (
    CostReport,
    LoweringRequest,
    SCHEMES,
    compile_request,
    cost_report,
    effective_multipliers,
    lower,
    optimize,
    transpile,
    verify_rewrite_rules,
)
from .ksearch import search_k
from .noise import (
    NoiseConfigError,
    NoiseModel,
    ThermalRelaxation,
    ZERO_NOISE,
    load_noise_config,
    parse_noise_config,
)
from .qfa import (
    ConstructionError,
    Mcqfa,
    ParallelSpec,
    VARIANTS,
    acceptance_probability,
    build_parallel,
    build_two_state,
    mean_square_closed_form,
    parallel_interference_form,
    run_word,
    states_for_error,
    trace_states,
    two_state_closed_form,
)
from .sim import (
    Counts,
    SweepRow,
    density_outcome_probs,
    fidelity,
    fidelity_general,
    physical_gate_count,
    readout_adjusted_probs,
    rows_to_csv,
    rows_to_jsonl,
    sample_counts,
    simulate_density,
    simulate_state,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitError", "CircuitParseError", "Gate", "depth",
    "equiv_global_phase", "gate_counts", "parse", "serialize", "unitary_of",
    "CostReport", "LoweringRequest", "SCHEMES", "compile_request",
    "cost_report", "effective_multipliers", "lower", "optimize", "transpile",
    "verify_rewrite_rules", "search_k",
    "NoiseConfigError", "NoiseModel", "ThermalRelaxation", "ZERO_NOISE",
    "load_noise_config", "parse_noise_config",
    "ConstructionError", "Mcqfa", "ParallelSpec", "VARIANTS",
    "acceptance_probability", "build_parallel", "build_two_state",
    "mean_square_closed_form", "parallel_interference_form", "run_word",
    "states_for_error", "trace_states", "two_state_closed_form",
    "Counts", "SweepRow", "density_outcome_probs", "fidelity",
    "fidelity_general", "physical_gate_count", "readout_adjusted_probs",
    "rows_to_csv", "rows_to_jsonl", "sample_counts", "simulate_density",
    "simulate_state", "sweep",
    "__version__",
]
