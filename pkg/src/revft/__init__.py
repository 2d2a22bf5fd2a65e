"""Fault-tolerant reversible circuits.

Builders for repetition-code error-recovery circuits (non-local, 2D-lattice,
and 1D nearest-neighbor forms), recursive concatenated compilation, Monte
Carlo fault injection with exhaustive single-fault verification, and the
closed-form threshold / blowup / entropy calculators.
"""

from .analysis import (
    Blowup,
    EntropyReport,
    KAPPA,
    MixedThreshold,
    blowup,
    entropy_bounds,
    landauer_energy,
    logical_error_bound,
    max_useful_level,
    min_concat_level,
    mixed_threshold,
    table2_ratios,
    threshold,
)
from .builders import (
    CompiledCycle,
    LayoutStrategy,
    NONLOCAL,
    ONE_D,
    TWO_D,
    build_interleave_1d,
    build_interleave_2d,
    build_recovery_1d,
    build_recovery_nonlocal,
    compile_cycle,
    data_positions,
    encode_value,
    ideal_decode,
    predicted_counts,
)
from .circuit import (
    BitState,
    Census,
    Circuit,
    Gate,
    GateKind,
    Lattice2D,
    Line1D,
    NonLocal,
    Topology,
    apply_gate,
    check_locality,
    circuit_from_dict,
    circuit_to_dict,
    evaluate,
    gate_census,
    grid_topology,
    invert,
    is_permutation,
    load_circuit,
    save_circuit,
)
from .sim import (
    FaultEvent,
    FaultScan,
    NoiseModel,
    SimReport,
    backend_name,
    enumerate_single_faults,
    estimate_pbit,
    evaluate_with_fault,
    noisy_apply,
    run_trials,
    simulate_encoded,
    sweep_threshold,
    sweep_to_csv,
)

__version__ = "0.1.0"
