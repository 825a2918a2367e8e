"""hrcslab: simulate holographic random circuit sampling and check the
measured statistics against their closed-form values."""

from .core import (
    QubitSubset,
    Statevector,
    UnitaryMatrix,
    apply_pauli_string,
    apply_unitary,
    collapse,
    measure_probabilities,
    reset_to_zero,
    sample_haar_state,
    sample_haar_unitary,
)
from .circuits import (
    Gate,
    GateSequence,
    HeaParams,
    build_hea,
    gate_sequence_to_unitary,
    hea_gate_count,
    sample_hea_params,
)
from .engine import (
    HrcsConfig,
    JointDistribution,
    NoiseModel,
    TrajectoryBatch,
    TrajectoryRecord,
    enumerate_joint_distribution,
    enumerate_noisy_joint_distribution,
    ideal_probability,
    instantiate_circuit,
    marginalize,
    replay_no_reset_equivalence,
    run_trajectory,
    sample_trajectories,
)
from .errors import CapacityError, ConfigurationError, DegenerateBranchError
from .estimators import (
    EnsembleStats,
    PopHistogram,
    ensemble_aggregate,
    merge_stats,
    pop_histogram,
    power_sum_exact,
    power_sum_mc,
    tvd_exact,
    xeb_estimate,
)
from .runner import ExperimentSpec, ResultRecord, run_experiment, write_records
from . import theory

__all__ = [
    "CapacityError",
    "ConfigurationError",
    "DegenerateBranchError",
    "EnsembleStats",
    "ExperimentSpec",
    "Gate",
    "GateSequence",
    "HeaParams",
    "HrcsConfig",
    "JointDistribution",
    "NoiseModel",
    "PopHistogram",
    "QubitSubset",
    "ResultRecord",
    "Statevector",
    "TrajectoryBatch",
    "TrajectoryRecord",
    "UnitaryMatrix",
    "apply_pauli_string",
    "apply_unitary",
    "build_hea",
    "collapse",
    "ensemble_aggregate",
    "enumerate_joint_distribution",
    "enumerate_noisy_joint_distribution",
    "gate_sequence_to_unitary",
    "hea_gate_count",
    "ideal_probability",
    "instantiate_circuit",
    "marginalize",
    "measure_probabilities",
    "merge_stats",
    "pop_histogram",
    "power_sum_exact",
    "power_sum_mc",
    "replay_no_reset_equivalence",
    "reset_to_zero",
    "run_experiment",
    "run_trajectory",
    "sample_haar_state",
    "sample_haar_unitary",
    "sample_hea_params",
    "sample_trajectories",
    "theory",
    "tvd_exact",
    "write_records",
    "xeb_estimate",
]
