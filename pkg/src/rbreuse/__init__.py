"""Randomized benchmarking with circuit reusing.

Simulates the standard benchmarking protocol over 1- and 2-qubit Clifford
groups under configurable noise, estimates the variance coefficients that
govern estimator quality, and solves for the reuse count that minimizes
variance under constant, ladder, and bounded cost models.
"""

from .calibrate import (
    CalibrationError,
    LadderFit,
    RuntimeRecord,
    allocate_sequences,
    fit_ladder,
    ladder_bounds,
    predict_T0,
)
from .cliffords import (
    CliffordGate,
    GateSequence,
    clifford_group_order,
    enumerate_group,
    gate_from_index,
    identity_gate,
    sample_uniform,
    sequence_inverse,
)
from .liouville import (
    EffectVec,
    KrausSet,
    PauliTransferMatrix,
    StateVec,
    apply,
    avg_fidelity,
    compose,
    expectation,
    ptm_from_kraus,
    ptm_from_unitary,
    quality_parameter,
    zeros_effect,
    zeros_state,
)
from .noise import (
    Composite,
    GlobalDepolarizing,
    LocalAmplitudeDamping,
    LocalPhaseDamping,
    LocalZRotation,
    NoiseSpec,
    SwapCorrelation,
    build,
    fidelity_of,
    format_noise,
    parse_noise,
)
from .optimize import (
    BoundedCost,
    ConstantCost,
    LadderCost,
    OptReport,
    grid_search_R,
    near_optimal,
    optimal_R_constant,
    optimal_R_ladder,
    optimal_interval_bounded,
    speedup_vs_one,
    unit_variance,
    variance_at,
)
from .protocol import (
    DecayFit,
    DecayFitError,
    RBConfig,
    RBResult,
    SequenceResult,
    StatPair,
    analytic_A,
    estimate_AB,
    fit_decay,
    run_rb,
    simulate_shots,
    survival_probability,
)

__version__ = "0.1.0"
