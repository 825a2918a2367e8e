"""Protocol execution: per-step unitary, bath measurement, optional reset,
final system measurement.

Four modes share one circuit description: single-trajectory sampling (and a
vectorized many-shot twin), forced-outcome replay of a recorded path, exact
enumeration of the full joint outcome distribution, and a density-matrix
oracle for the depolarizing-noise variant.

Outcome indexing: a joint outcome (z_1, ..., z_t, x) maps to the integer with
z_1 in the most significant bit block and x in the least significant one.
Within each block the register's own low qubit is the low bit.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

import numpy as np

from . import circuits
from .circuits import GateSequence, apply_gate_sequence, apply_gate_sequence_batch, build_hea, sample_hea_params
from .core import (
    PROB_FLOOR,
    QubitSubset,
    Statevector,
    UnitaryMatrix,
    _apply_unitary_batch,
    apply_pauli_string,
    apply_unitary,
    collapse,
    measure_probabilities,
    pauli_labels_from_index,
    pauli_permutation,
    reset_to_zero,
    sample_haar_unitary,
)
from .errors import CapacityError, ConfigurationError, DegenerateBranchError

TRAJECTORY_MAX_QUBITS = 24
ENUMERATION_MAX_BITS = 22
NOISY_ORACLE_MAX_QUBITS = 8
NOISY_ORACLE_MAX_BITS = 20

BIT_ORDER = "z1..zt|x; z1 most significant, x least significant"

UNITARY_SOURCES = ("haar", "hea")

StepUnitary = UnitaryMatrix | GateSequence


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of primitives (blake2b of their repr)."""
    text = "\x1f".join(repr(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class HrcsConfig:
    """Full protocol description for one circuit family."""

    n_system: int
    n_bath: int
    steps: int
    reset_bath: bool = True
    unitary_source: str = "haar"
    hea_layers: int | None = None
    gamma_system: float = 1.0
    gamma_bath: float = 1.0
    master_seed: int = 0

    def __post_init__(self):
        if self.n_system < 1 or self.n_bath < 1:
            raise ConfigurationError("system and bath need at least one qubit each")
        if self.steps < 1:
            raise ConfigurationError(f"steps must be >= 1, got {self.steps}")
        if self.unitary_source not in UNITARY_SOURCES:
            raise ConfigurationError(
                f"unitary_source must be one of {UNITARY_SOURCES}, got {self.unitary_source!r}"
            )
        if self.unitary_source == "hea" and (self.hea_layers is None or self.hea_layers < 1):
            raise ConfigurationError("hea source needs hea_layers >= 1")
        for name, g in (("gamma_system", self.gamma_system), ("gamma_bath", self.gamma_bath)):
            if not 0.0 <= g <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {g}")

    @property
    def n_qubits(self) -> int:
        return self.n_system + self.n_bath

    @property
    def n_eff(self) -> int:
        return self.n_system + self.steps * self.n_bath

    @property
    def system(self) -> QubitSubset:
        return QubitSubset.range(0, self.n_system)

    @property
    def bath(self) -> QubitSubset:
        return QubitSubset.range(self.n_system, self.n_system + self.n_bath)

    def hash(self) -> str:
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.blake2b(payload.encode("utf-8"), digest_size=8).hexdigest()


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing strengths applied to system and bath after each step unitary.

    gamma = 1 means no noise; gamma = 0 replaces the subsystem by the fully
    mixed state every step.
    """

    gamma_system: float
    gamma_bath: float

    def __post_init__(self):
        for name, g in (("gamma_system", self.gamma_system), ("gamma_bath", self.gamma_bath)):
            if not 0.0 <= g <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {g}")

    @classmethod
    def from_config(cls, config: HrcsConfig) -> "NoiseModel":
        return cls(config.gamma_system, config.gamma_bath)

    @property
    def trivial(self) -> bool:
        return self.gamma_system == 1.0 and self.gamma_bath == 1.0


@dataclass(frozen=True)
class TrajectoryRecord:
    """One sampled outcome path with its Born-probability product."""

    bath_outcomes: tuple[int, ...]
    final_outcome: int
    model_probability: float
    ideal_probability: float | None = None

    def to_json_dict(self, config_hash: str = "", seed: int | None = None) -> dict:
        rec = {
            "config_hash": config_hash,
            "bath_outcomes": [format(z, "#x") for z in self.bath_outcomes],
            "final_outcome": format(self.final_outcome, "#x"),
            "model_probability": self.model_probability,
            "ideal_probability": self.ideal_probability,
        }
        if seed is not None:
            rec["seed"] = seed
        return rec


@dataclass(frozen=True)
class JointDistribution:
    """Exact probability vector over all 2^n_eff spatiotemporal outcomes."""

    probabilities: np.ndarray
    n_eff: int
    bit_order: str = BIT_ORDER

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.size != 1 << self.n_eff:
            raise ConfigurationError(
                f"{p.size} probabilities do not cover {self.n_eff} effective bits"
            )
        if np.any(p < 0):
            raise ConfigurationError("negative probability entry")
        object.__setattr__(self, "probabilities", p)

    def total(self) -> float:
        return float(self.probabilities.sum())

    def to_jsonl_lines(self, config_hash: str = ""):
        for outcome, prob in enumerate(self.probabilities):
            yield json.dumps(
                {
                    "config_hash": config_hash,
                    "n_eff": self.n_eff,
                    "bit_order": self.bit_order,
                    "outcome": format(outcome, "#x"),
                    "probability": float(prob),
                },
                sort_keys=True,
            )


def outcome_index(config: HrcsConfig, bath_outcomes, final_outcome: int) -> int:
    """Pack (z_1..z_t, x) into the joint outcome integer."""
    idx = 0
    for z in bath_outcomes:
        idx = (idx << config.n_bath) | int(z)
    return (idx << config.n_system) | int(final_outcome)


def split_outcome_index(config: HrcsConfig, index: int) -> tuple[tuple[int, ...], int]:
    x = index & ((1 << config.n_system) - 1)
    index >>= config.n_system
    zs = []
    for _ in range(config.steps):
        zs.append(index & ((1 << config.n_bath) - 1))
        index >>= config.n_bath
    return tuple(reversed(zs)), x


def instance_seed(config: HrcsConfig, instance_index: int) -> int:
    """Stream seed of one ensemble member; depends only on the master seed,
    the circuit-defining parameters, and the index, so growing a sweep never
    shifts existing instances."""
    return derive_seed(
        config.master_seed,
        "instance",
        instance_index,
        config.n_system,
        config.n_bath,
        config.steps,
        config.unitary_source,
        config.hea_layers,
    )


def instantiate_circuit(config: HrcsConfig, instance_index: int) -> list[StepUnitary]:
    """Deterministically draw the t step unitaries of one circuit instance."""
    rng = np.random.default_rng(instance_seed(config, instance_index))
    n = config.n_qubits
    if config.unitary_source == "haar":
        return [sample_haar_unitary(1 << n, rng) for _ in range(config.steps)]
    return [
        build_hea(n, sample_hea_params(n, config.hea_layers, rng))
        for _ in range(config.steps)
    ]


def _apply_step(state: Statevector, step: StepUnitary, config: HrcsConfig) -> Statevector:
    if isinstance(step, UnitaryMatrix):
        return apply_unitary(state, step, QubitSubset.range(0, config.n_qubits))
    return apply_gate_sequence(state, step)


def step_matrices(config: HrcsConfig, unitaries: list[StepUnitary]) -> list[np.ndarray]:
    """Dense matrices of the step unitaries (gate sequences get compiled)."""
    out = []
    for step in unitaries:
        if isinstance(step, UnitaryMatrix):
            out.append(step.entries)
        else:
            out.append(circuits.gate_sequence_to_unitary(step, config.n_qubits).entries)
    return out


def _sample_outcome(probs: np.ndarray, rng: np.random.Generator) -> int:
    u = rng.random()
    cum = np.cumsum(probs)
    outcome = int(np.searchsorted(cum, u * cum[-1], side="right"))
    return min(outcome, probs.size - 1)


def _maybe_apply_random_pauli(
    state: Statevector, targets: QubitSubset, gamma: float, rng: np.random.Generator
) -> Statevector:
    """Trajectory unraveling of the depolarizing channel: with probability
    1-gamma, apply a Pauli string drawn uniformly from all 4^m (identity
    included)."""
    if gamma >= 1.0:
        return state
    if rng.random() < 1.0 - gamma:
        labels = pauli_labels_from_index(int(rng.integers(4 ** len(targets))), len(targets))
        state = apply_pauli_string(state, labels, targets)
    return state


def run_trajectory(
    config: HrcsConfig,
    unitaries: list[StepUnitary],
    noise: NoiseModel | None,
    rng: np.random.Generator,
    with_ideal: bool = False,
) -> TrajectoryRecord:
    """Sample one full protocol run and its path probability."""
    _check_trajectory_capacity(config)
    state = Statevector.zero(config.n_qubits)
    system, bath = config.system, config.bath
    noisy = noise is not None and not noise.trivial
    prob_product = 1.0
    bath_outcomes: list[int] = []
    for step in unitaries:
        state = _apply_step(state, step, config)
        if noisy:
            state = _maybe_apply_random_pauli(state, system, noise.gamma_system, rng)
            state = _maybe_apply_random_pauli(state, bath, noise.gamma_bath, rng)
        probs = measure_probabilities(state, bath)
        z = _sample_outcome(probs, rng)
        if probs[z] < PROB_FLOOR:
            raise DegenerateBranchError(f"sampled bath branch {z:#x} below underflow floor")
        state, p_z = collapse(state, bath, z)
        if config.reset_bath:
            state = reset_to_zero(state, bath, z)
        bath_outcomes.append(z)
        prob_product *= p_z
    probs = measure_probabilities(state, system)
    x = _sample_outcome(probs, rng)
    if probs[x] < PROB_FLOOR:
        raise DegenerateBranchError(f"sampled final branch {x:#x} below underflow floor")
    _, p_x = collapse(state, system, x)
    prob_product *= p_x

    ideal: float | None
    if not noisy:
        # the Born-probability product along a noiseless path is the joint
        # probability itself
        ideal = prob_product
    elif with_ideal:
        ideal = ideal_probability(config, unitaries, tuple(bath_outcomes), x)
    else:
        ideal = None
    return TrajectoryRecord(tuple(bath_outcomes), x, prob_product, ideal)


@dataclass
class TrajectoryBatch:
    """Column-wise bundle of many sampled trajectories of one circuit."""

    bath_outcomes: np.ndarray  # (shots, steps) ints
    final_outcomes: np.ndarray  # (shots,) ints
    model_probabilities: np.ndarray  # (shots,)
    ideal_probabilities: np.ndarray | None = None

    def __len__(self) -> int:
        return self.final_outcomes.size

    def record(self, i: int) -> TrajectoryRecord:
        ideal = None if self.ideal_probabilities is None else float(self.ideal_probabilities[i])
        return TrajectoryRecord(
            tuple(int(z) for z in self.bath_outcomes[i]),
            int(self.final_outcomes[i]),
            float(self.model_probabilities[i]),
            ideal,
        )

    def joint_indices(self, config: HrcsConfig) -> np.ndarray:
        idx = np.zeros(len(self), dtype=np.int64)
        for k in range(config.steps):
            idx = (idx << config.n_bath) | self.bath_outcomes[:, k]
        return (idx << config.n_system) | self.final_outcomes


def _batch_random_paulis(
    amps: np.ndarray, targets: QubitSubset, n: int, gamma: float, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized depolarizing unraveling across a (shots, 2^n) batch."""
    if gamma >= 1.0:
        return amps
    shots = amps.shape[0]
    m = len(targets)
    hit = rng.random(shots) < 1.0 - gamma
    codes = np.where(hit, rng.integers(4 ** m, size=shots), 0)
    for code in np.unique(codes):
        if code == 0:
            continue  # all-identity string
        rows = codes == code
        perm, phase = pauli_permutation(pauli_labels_from_index(int(code), m), targets, n)
        amps[rows] = amps[rows][:, perm] * phase
    return amps


def sample_trajectories(
    config: HrcsConfig,
    unitaries: list[StepUnitary],
    n_shots: int,
    noise: NoiseModel | None,
    rng: np.random.Generator,
    with_ideal: bool = False,
) -> TrajectoryBatch:
    """Vectorized twin of run_trajectory: n_shots paths of the same circuit.

    Statistically identical to looping run_trajectory, not bitwise identical
    (the random stream is consumed in a different order).
    """
    _check_trajectory_capacity(config)
    n, n_sys, n_bath = config.n_qubits, config.n_system, config.n_bath
    d_sys, d_bath = 1 << n_sys, 1 << n_bath
    noisy = noise is not None and not noise.trivial

    amps = np.zeros((n_shots, 1 << n), dtype=complex)
    amps[:, 0] = 1.0
    rows = np.arange(n_shots)
    bath_outcomes = np.zeros((n_shots, config.steps), dtype=np.int64)
    model_prob = np.ones(n_shots)

    for k, step in enumerate(unitaries):
        if isinstance(step, UnitaryMatrix):
            amps = _apply_unitary_batch(amps, step.entries, tuple(range(n)), n)
        else:
            amps = apply_gate_sequence_batch(amps, step, n)
        if noisy:
            amps = _batch_random_paulis(amps, config.system, n, noise.gamma_system, rng)
            amps = _batch_random_paulis(amps, config.bath, n, noise.gamma_bath, rng)
        # bath qubits are the high bits: axis 1 of (shots, d_bath, d_sys)
        blocks = amps.reshape(n_shots, d_bath, d_sys)
        probs = np.abs(blocks) ** 2
        bath_probs = probs.sum(axis=2)
        cum = np.cumsum(bath_probs, axis=1)
        u = rng.random(n_shots) * cum[:, -1]
        z = np.minimum((u[:, None] >= cum).sum(axis=1), d_bath - 1)
        p_z = bath_probs[rows, z]
        if np.any(p_z < PROB_FLOOR):
            raise DegenerateBranchError("sampled bath branch below underflow floor")
        picked = blocks[rows, z, :] / np.sqrt(p_z)[:, None]
        model_prob *= p_z
        bath_outcomes[:, k] = z
        amps = np.zeros_like(blocks)
        if config.reset_bath:
            amps[:, 0, :] = picked
        else:
            amps[rows, z, :] = picked
        amps = amps.reshape(n_shots, -1)

    sys_probs = (np.abs(amps) ** 2).reshape(n_shots, d_bath, d_sys).sum(axis=1)
    cum = np.cumsum(sys_probs, axis=1)
    u = rng.random(n_shots) * cum[:, -1]
    x = np.minimum((u[:, None] >= cum).sum(axis=1), d_sys - 1)
    p_x = sys_probs[rows, x]
    if np.any(p_x < PROB_FLOOR):
        raise DegenerateBranchError("sampled final branch below underflow floor")
    model_prob *= p_x

    ideal: np.ndarray | None
    if noise is None or noise.trivial:
        ideal = model_prob.copy()
    elif with_ideal:
        ideal = ideal_probabilities_batch(config, unitaries, bath_outcomes, x)
    else:
        ideal = None
    return TrajectoryBatch(bath_outcomes, x, model_prob, ideal)


def ideal_probability(
    config: HrcsConfig,
    unitaries: list[StepUnitary],
    bath_outcomes,
    final_outcome: int,
) -> float:
    """Joint probability of one forced outcome path under the noiseless circuit.

    Projections are applied without renormalizing, so the squared final
    amplitude is the full product of branch probabilities; an impossible
    branch yields an exact 0.
    """
    bath_outcomes = tuple(int(z) for z in bath_outcomes)
    _validate_outcomes(config, bath_outcomes, final_outcome)
    batch = ideal_probabilities_batch(
        config,
        unitaries,
        np.asarray(bath_outcomes, dtype=np.int64)[None, :],
        np.asarray([final_outcome], dtype=np.int64),
    )
    return float(batch[0])


def ideal_probabilities_batch(
    config: HrcsConfig,
    unitaries: list[StepUnitary],
    bath_outcomes: np.ndarray,
    final_outcomes: np.ndarray,
) -> np.ndarray:
    """Forced-outcome replay for many paths at once; rows index paths."""
    n, n_sys, n_bath = config.n_qubits, config.n_system, config.n_bath
    d_sys, d_bath = 1 << n_sys, 1 << n_bath
    shots = bath_outcomes.shape[0]
    rows = np.arange(shots)

    amps = np.zeros((shots, 1 << n), dtype=complex)
    amps[:, 0] = 1.0
    for k, step in enumerate(unitaries):
        if isinstance(step, UnitaryMatrix):
            amps = _apply_unitary_batch(amps, step.entries, tuple(range(n)), n)
        else:
            amps = apply_gate_sequence_batch(amps, step, n)
        blocks = amps.reshape(shots, d_bath, d_sys)
        z = bath_outcomes[:, k]
        picked = blocks[rows, z, :]
        amps = np.zeros_like(blocks)
        if config.reset_bath:
            amps[:, 0, :] = picked
        else:
            amps[rows, z, :] = picked
        amps = amps.reshape(shots, -1)
    final_amp = amps.reshape(shots, d_bath, d_sys).sum(axis=1)[rows, final_outcomes]
    return np.abs(final_amp) ** 2


def enumerate_joint_distribution(
    config: HrcsConfig, unitaries: list[StepUnitary]
) -> JointDistribution:
    """Depth-first exact evaluation of the full joint outcome distribution.

    States are propagated unnormalized so every leaf value is already the
    product of its branch probabilities; branches of exactly zero weight are
    recorded as 0 and not expanded.
    """
    if config.n_eff > ENUMERATION_MAX_BITS:
        raise CapacityError(
            f"enumeration over {config.n_eff} effective bits exceeds {ENUMERATION_MAX_BITS}"
        )
    n, n_sys, n_bath = config.n_qubits, config.n_system, config.n_bath
    d_sys, d_bath = 1 << n_sys, 1 << n_bath
    t = config.steps
    out = np.zeros(1 << config.n_eff)

    def walk(amps: np.ndarray, k: int, prefix: int) -> None:
        vec = amps
        step = unitaries[k]
        if isinstance(step, UnitaryMatrix):
            vec = _apply_unitary_batch(vec[None, :], step.entries, tuple(range(n)), n)[0]
        else:
            vec = apply_gate_sequence_batch(vec[None, :], step, n)[0]
        blocks = vec.reshape(d_bath, d_sys)
        for z in range(d_bath):
            block = blocks[z]
            weight = float(np.sum(np.abs(block) ** 2))
            child_prefix = (prefix << n_bath) | z
            if weight == 0.0:
                continue
            if k + 1 == t:
                base = child_prefix << n_sys
                out[base : base + d_sys] = np.abs(block) ** 2
            else:
                child = np.zeros(1 << n, dtype=complex)
                if config.reset_bath:
                    child[:d_sys] = block
                else:
                    child[z * d_sys : (z + 1) * d_sys] = block
                walk(child, k + 1, child_prefix)

    root = np.zeros(1 << n, dtype=complex)
    root[0] = 1.0
    walk(root, 0, 0)
    return JointDistribution(out, config.n_eff)


def marginalize(
    dist: JointDistribution, config: HrcsConfig, kind: str, step: int | None = None
) -> np.ndarray:
    """Exact marginal of the joint distribution.

    ``spatial`` keeps the final system outcome, ``temporal`` keeps all bath
    outcomes, ``per_step`` keeps a single 1-based bath step.
    """
    if dist.n_eff != config.n_eff:
        raise ConfigurationError("distribution does not match config dimensions")
    t = config.steps
    shaped = dist.probabilities.reshape((1 << config.n_bath,) * t + (1 << config.n_system,))
    if kind == "spatial":
        return shaped.sum(axis=tuple(range(t)))
    if kind == "temporal":
        return shaped.sum(axis=t).reshape(-1)
    if kind == "per_step":
        if step is None or not 1 <= step <= t:
            raise ConfigurationError(f"per_step needs a step index in [1, {t}], got {step}")
        axes = tuple(a for a in range(t + 1) if a != step - 1)
        return shaped.sum(axis=axes)
    raise ConfigurationError(f"unknown marginal kind {kind!r}")


def depolarize_density(rho: np.ndarray, d_low: int, d_high: int, which: str, gamma: float) -> np.ndarray:
    """Exact depolarizing channel on one factor of a (high (x) low) bipartite
    density matrix: rho -> gamma rho + (1-gamma) (I/d_sub) (x) tr_sub(rho).

    ``which`` names the depolarized factor; "low" is the low-bit register
    (the system in this package's layout), "high" the high-bit one (the bath).
    """
    if gamma == 1.0:
        return rho
    shaped = rho.reshape(d_high, d_low, d_high, d_low)
    if which == "low":
        traced = np.einsum("iaja->ij", shaped)
        replacement = np.einsum("ij,ab->iajb", traced, np.eye(d_low) / d_low)
    elif which == "high":
        traced = np.einsum("iaib->ab", shaped)
        replacement = np.einsum("ij,ab->iajb", np.eye(d_high) / d_high, traced)
    else:
        raise ConfigurationError(f"which must be 'low' or 'high', got {which!r}")
    return gamma * rho + (1.0 - gamma) * replacement.reshape(rho.shape)


def enumerate_noisy_joint_distribution(
    config: HrcsConfig, unitaries: list[StepUnitary], noise: NoiseModel
) -> JointDistribution:
    """Density-matrix oracle for the joint distribution under depolarizing noise.

    Evolution is kept unnormalized: the diagonal entries surviving at the end
    of each forced branch are exactly the joint outcome probabilities.
    """
    if config.n_qubits > NOISY_ORACLE_MAX_QUBITS:
        raise CapacityError(
            f"density-matrix oracle limited to {NOISY_ORACLE_MAX_QUBITS} qubits, "
            f"got {config.n_qubits}"
        )
    if config.n_eff > NOISY_ORACLE_MAX_BITS:
        raise CapacityError(
            f"noisy enumeration over {config.n_eff} effective bits exceeds {NOISY_ORACLE_MAX_BITS}"
        )
    n, n_sys, n_bath = config.n_qubits, config.n_system, config.n_bath
    d, d_sys, d_bath = 1 << n, 1 << n_sys, 1 << n_bath
    t = config.steps
    mats = step_matrices(config, unitaries)
    out = np.zeros(1 << config.n_eff)

    def walk(rho_sys: np.ndarray, bath_state: int, k: int, prefix: int) -> None:
        rho = np.zeros((d, d), dtype=complex)
        lo = bath_state * d_sys
        rho[lo : lo + d_sys, lo : lo + d_sys] = rho_sys
        u = mats[k]
        rho = u @ rho @ u.conj().T
        rho = depolarize_density(rho, d_sys, d_bath, "low", noise.gamma_system)
        rho = depolarize_density(rho, d_sys, d_bath, "high", noise.gamma_bath)
        for z in range(d_bath):
            block = rho[z * d_sys : (z + 1) * d_sys, z * d_sys : (z + 1) * d_sys]
            weight = float(np.trace(block).real)
            child_prefix = (prefix << n_bath) | z
            if weight == 0.0:
                continue
            if k + 1 == t:
                base = child_prefix << n_sys
                out[base : base + d_sys] = np.diagonal(block).real
            else:
                walk(block, 0 if config.reset_bath else z, k + 1, child_prefix)

    rho0 = np.zeros((d_sys, d_sys), dtype=complex)
    rho0[0, 0] = 1.0
    walk(rho0, 0, 0, 0)
    return JointDistribution(np.maximum(out, 0.0), config.n_eff)


def replay_no_reset_equivalence(
    config: HrcsConfig, unitaries: list[StepUnitary]
) -> tuple[JointDistribution, JointDistribution]:
    """Exact joint distributions of the same circuit with reset on and off.

    Equality of CP and power sums holds only after ensemble averaging, not
    per instance; callers compare aggregates.
    """
    with_reset = enumerate_joint_distribution(
        dataclasses.replace(config, reset_bath=True), unitaries
    )
    without_reset = enumerate_joint_distribution(
        dataclasses.replace(config, reset_bath=False), unitaries
    )
    return with_reset, without_reset


def _check_trajectory_capacity(config: HrcsConfig) -> None:
    if config.n_qubits > TRAJECTORY_MAX_QUBITS:
        raise CapacityError(
            f"trajectory register of {config.n_qubits} qubits exceeds {TRAJECTORY_MAX_QUBITS}"
        )


def _validate_outcomes(config: HrcsConfig, bath_outcomes: tuple[int, ...], final_outcome: int) -> None:
    if len(bath_outcomes) != config.steps:
        raise ConfigurationError(
            f"{len(bath_outcomes)} bath outcomes for {config.steps} steps"
        )
    if any(not 0 <= z < 1 << config.n_bath for z in bath_outcomes):
        raise ConfigurationError("bath outcome out of range")
    if not 0 <= final_outcome < 1 << config.n_system:
        raise ConfigurationError("final outcome out of range")
