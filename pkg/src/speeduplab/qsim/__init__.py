from .amplitude import (
    AmplitudeEstimate,
    BooleanOracle,
    amplitude_estimate_mean,
    estimate_amplitude,
    good_probability,
    grover_iterate,
    outcome_count_for,
    prepared_state,
)
from .phase_estimation import (
    PhaseEstimationConfig,
    PhaseEstimationResult,
    default_evolution_time,
    phase_estimation,
    trotter_ground_energy,
)
from .propagate import (
    dense_propagator,
    dst_apply,
    dst_grid,
    kinetic_propagator,
    potential_phase,
    strang_step,
    trotter_evolve,
    trotter_matrix,
)
from .state import QueryLedger, StateVector, mass_within, report_qubits
