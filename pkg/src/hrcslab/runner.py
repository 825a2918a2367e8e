"""Reproducible experiment driver.

A JSON experiment spec fans out into seeded per-instance jobs, aggregates the
per-instance statistics, attaches the matching closed-form value, and writes
JSONL or CSV.  Results are byte-identical across reruns and worker counts:
every instance derives its randomness from (master_seed, parameter point,
instance index) alone, and records are emitted in parameter order.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import hashlib
import json
import time
from dataclasses import dataclass

import numpy as np

from . import estimators, theory
from .engine import (
    ENUMERATION_MAX_BITS,
    TRAJECTORY_MAX_QUBITS,
    HrcsConfig,
    NoiseModel,
    derive_seed,
    enumerate_joint_distribution,
    ideal_probabilities_batch,
    instance_seed,
    instantiate_circuit,
    marginalize,
    replay_no_reset_equivalence,
    sample_trajectories,
)
from .core import sample_haar_state
from .errors import CapacityError, ConfigurationError

SCHEMA_VERSION = 1

EXPERIMENT_KINDS = (
    "cp_sweep",
    "ps_sweep",
    "marginal_sweep",
    "pop_hist",
    "tvd",
    "xeb",
    "noisy_xeb",
    "theory_table",
    "reset_check",
)

THEORY_FAMILIES = (
    "haar_power_sum",
    "hrcs_power_sum",
    "marginal_cp_spatial",
    "marginal_cp_temporal",
    "marginal_cp_per_step",
    "ideal_xeb",
    "noisy_xeb_exact",
    "noisy_xeb_asymptotic",
    "tvd_bound_exact",
    "tvd_bound_asymptotic",
    "critical_steps",
)

_SPEC_FIELDS = {
    "schema_version",
    "kind",
    "n_system",
    "n_bath",
    "steps",
    "k_orders",
    "gammas",
    "instances",
    "shots",
    "reset_bath",
    "unitary_source",
    "hea_layers",
    "master_seed",
    "out",
    "format",
    "theory_family",
    "epsilon",
    "pop_bins",
}

CSV_COLUMNS = ("n_A", "n_B", "t", "K", "gamma", "statistic", "mean", "std_error", "theory_value")


@dataclass(frozen=True)
class ExperimentSpec:
    """Validated experiment description."""

    kind: str
    n_system: int
    n_bath: int
    steps: tuple[int, ...]
    k_orders: tuple[int, ...] = (2,)
    gammas: tuple[float, ...] = ()
    instances: int = 100
    shots: int = 1000
    reset_bath: bool = True
    unitary_source: str = "haar"
    hea_layers: int | None = None
    master_seed: int = 0
    out: str | None = None
    format: str = "jsonl"
    theory_family: str | None = None
    epsilon: float = 1.0
    pop_bins: int = estimators.DEFAULT_POP_BINS

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"kind must be one of {EXPERIMENT_KINDS}, got {self.kind!r}")
        if self.instances < 1 or self.shots < 1:
            raise ConfigurationError("instances and shots must be >= 1")
        if not self.steps:
            raise ConfigurationError("steps list is empty")
        if self.format not in ("jsonl", "csv"):
            raise ConfigurationError(f"format must be jsonl or csv, got {self.format!r}")
        if self.kind == "theory_table":
            if self.theory_family not in THEORY_FAMILIES:
                raise ConfigurationError(
                    f"theory_table needs theory_family from {THEORY_FAMILIES}, "
                    f"got {self.theory_family!r}"
                )
        if self.kind in ("ps_sweep",) and any(k < 2 for k in self.k_orders):
            raise ConfigurationError("power-sum orders must be >= 2")
        if self.kind == "noisy_xeb" and not self.gammas:
            raise ConfigurationError("noisy_xeb needs at least one gamma")

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExperimentSpec":
        unknown = set(doc) - _SPEC_FIELDS
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ConfigurationError(
                f"schema_version must be {SCHEMA_VERSION}, got {doc.get('schema_version')!r}"
            )
        required = {"kind", "n_system", "n_bath", "steps"}
        missing = required - set(doc)
        if missing:
            raise ConfigurationError(f"missing config keys: {sorted(missing)}")
        kwargs = {k: v for k, v in doc.items() if k != "schema_version"}
        for key in ("steps", "k_orders", "gammas"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def hash(self) -> str:
        """Identity of the experiment itself; output destination and format
        are presentation choices and stay out of the hash."""
        doc = dataclasses.asdict(self)
        doc.pop("out")
        doc.pop("format")
        payload = json.dumps(doc, sort_keys=True)
        return hashlib.blake2b(payload.encode("utf-8"), digest_size=8).hexdigest()

    def config_for(self, t: int) -> HrcsConfig:
        return HrcsConfig(
            n_system=self.n_system,
            n_bath=self.n_bath,
            steps=t,
            reset_bath=self.reset_bath,
            unitary_source=self.unitary_source,
            hea_layers=self.hea_layers,
            master_seed=self.master_seed,
        )


@dataclass(frozen=True)
class ResultRecord:
    """One aggregated statistic at one parameter point."""

    spec_hash: str
    n_system: int
    n_bath: int
    steps: int
    order: int | None
    gamma: float | None
    statistic: str
    measured: estimators.EnsembleStats
    theory_value: float
    theory_source: str
    wall_time_s: float = 0.0  # informational only, never serialized

    def to_json_dict(self) -> dict:
        return {
            "spec_hash": self.spec_hash,
            "n_A": self.n_system,
            "n_B": self.n_bath,
            "t": self.steps,
            "K": self.order,
            "gamma": self.gamma,
            "statistic": self.statistic,
            "count": self.measured.count,
            "mean": self.measured.mean,
            "std_error": self.measured.std_error,
            "theory_value": self.theory_value,
            "theory_source": self.theory_source,
        }


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def _json_line(doc: dict) -> str:
    parts = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, float):
            encoded = _format_float(value)
        else:
            encoded = json.dumps(value)
        parts.append(f"{json.dumps(key)}: {encoded}")
    return "{" + ", ".join(parts) + "}"


def write_records(records, path: str, format: str = "jsonl") -> None:
    """Persist records; JSONL has sorted keys and 17-significant-digit floats,
    CSV uses the fixed column order documented in CSV_COLUMNS."""
    if format == "jsonl":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for rec in records:
                fh.write(_json_line(rec.to_json_dict()) + "\n")
        return
    if format == "csv":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            for rec in records:
                doc = rec.to_json_dict()
                row = [
                    str(doc["n_A"]),
                    str(doc["n_B"]),
                    str(doc["t"]),
                    "" if doc["K"] is None else str(doc["K"]),
                    "" if doc["gamma"] is None else _format_float(doc["gamma"]),
                    doc["statistic"],
                    _format_float(doc["mean"]),
                    _format_float(doc["std_error"]),
                    _format_float(doc["theory_value"]),
                ]
                fh.write(",".join(row) + "\n")
        return
    raise ConfigurationError(f"format must be jsonl or csv, got {format!r}")


def _check_capacity(spec: ExperimentSpec) -> None:
    """Refuse specs that would exceed an engine mode before any work starts."""
    t_max = max(spec.steps)
    n_eff_max = spec.n_system + t_max * spec.n_bath
    n_phys = spec.n_system + spec.n_bath
    if spec.kind in ("cp_sweep", "ps_sweep", "marginal_sweep", "pop_hist", "tvd", "reset_check"):
        if n_eff_max > ENUMERATION_MAX_BITS:
            raise CapacityError(
                f"{spec.kind} enumerates {n_eff_max} effective bits, limit {ENUMERATION_MAX_BITS}"
            )
    if spec.kind in ("xeb", "noisy_xeb") and n_phys > TRAJECTORY_MAX_QUBITS:
        raise CapacityError(f"{n_phys} physical qubits exceed {TRAJECTORY_MAX_QUBITS}")


# ---------------------------------------------------------------------------
# per-instance worker functions (top level so process pools can pickle them)


def _instance_power_sums(spec_dict: dict, t: int, orders: tuple[int, ...], index: int) -> list[float]:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    dist = enumerate_joint_distribution(config, unitaries)
    return [estimators.power_sum_exact(dist, k) for k in orders]


def _instance_marginal_cps(spec_dict: dict, t: int, index: int) -> list[float]:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    dist = enumerate_joint_distribution(config, unitaries)
    spatial = estimators.power_sum_exact(marginalize(dist, config, "spatial"), 2)
    temporal = estimators.power_sum_exact(marginalize(dist, config, "temporal"), 2)
    per_step = estimators.power_sum_exact(marginalize(dist, config, "per_step", step=t), 2)
    return [spatial, temporal, per_step]


def _instance_probabilities(spec_dict: dict, t: int, index: int) -> np.ndarray:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    return enumerate_joint_distribution(config, unitaries).probabilities


def _instance_tvd(spec_dict: dict, t: int, index: int) -> float:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    dist = enumerate_joint_distribution(config, unitaries)
    rng = np.random.default_rng(derive_seed(spec.master_seed, "haar-partner", t, index))
    haar = np.abs(sample_haar_state(1 << config.n_eff, rng)) ** 2
    return estimators.tvd_exact(dist.probabilities, haar)


def _instance_xeb(spec_dict: dict, t: int, index: int) -> float:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    rng = np.random.default_rng(derive_seed(spec.master_seed, "shots", t, index))
    batch = sample_trajectories(config, unitaries, spec.shots, None, rng)
    return estimators.xeb_estimate(batch.ideal_probabilities, config.n_eff).mean


def _instance_noisy_xeb(spec_dict: dict, t: int, gamma: float, index: int) -> float:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    noise = NoiseModel(gamma, gamma)
    rng = np.random.default_rng(derive_seed(spec.master_seed, "noisy-shots", t, gamma, index))
    batch = sample_trajectories(config, unitaries, spec.shots, noise, rng)
    ideal = ideal_probabilities_batch(config, unitaries, batch.bath_outcomes, batch.final_outcomes)
    return estimators.xeb_estimate(ideal, config.n_eff).mean


def _instance_reset_check(spec_dict: dict, t: int, index: int) -> list[float]:
    spec = ExperimentSpec(**spec_dict)
    config = spec.config_for(t)
    unitaries = instantiate_circuit(config, index)
    with_reset, without_reset = replay_no_reset_equivalence(config, unitaries)
    return [
        estimators.power_sum_exact(with_reset, 2),
        estimators.power_sum_exact(without_reset, 2),
        estimators.power_sum_exact(with_reset, 3),
        estimators.power_sum_exact(without_reset, 3),
    ]


class InstanceFailure(RuntimeError):
    """One ensemble member failed; carries enough context to reproduce it."""


def _failure(args, exc) -> "InstanceFailure":
    spec_dict, t, index = args[0], args[1], args[-1]
    spec = ExperimentSpec(**spec_dict)
    seed = instance_seed(spec.config_for(t), index)
    return InstanceFailure(
        f"instance {index} at t={t} (stream seed {seed:#x}) failed: {exc}"
    )


def _run_instances(fn, args_list, workers: int):
    """Map instance jobs, preserving order; a failing instance aborts the
    whole run with its stream seed reported.  Serial when workers == 1."""
    results = []
    if workers <= 1:
        for args in args_list:
            try:
                results.append(fn(*args))
            except (ConfigurationError, CapacityError):
                raise
            except Exception as exc:  # noqa: BLE001
                raise _failure(args, exc) from exc
        return results
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        for args, fut in zip(args_list, futures):
            try:
                results.append(fut.result())
            except (ConfigurationError, CapacityError):
                raise
            except Exception as exc:  # noqa: BLE001
                raise _failure(args, exc) from exc
        return results


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[ResultRecord]:
    """Execute one experiment spec and return records in parameter order."""
    _check_capacity(spec)
    spec_hash = spec.hash()
    spec_dict = dataclasses.asdict(spec)
    records: list[ResultRecord] = []

    def make_record(t, order, gamma, statistic, measured, theory_value, source, started):
        return ResultRecord(
            spec_hash=spec_hash,
            n_system=spec.n_system,
            n_bath=spec.n_bath,
            steps=t,
            order=order,
            gamma=gamma,
            statistic=statistic,
            measured=measured,
            theory_value=theory_value,
            theory_source=source,
            wall_time_s=time.monotonic() - started,
        )

    if spec.kind == "cp_sweep":
        for t in spec.steps:
            started = time.monotonic()
            args = [(spec_dict, t, (2,), b) for b in range(spec.instances)]
            values = [row[0] for row in _run_instances(_instance_power_sums, args, workers)]
            records.append(
                make_record(
                    t, 2, None, "collision_probability",
                    estimators.ensemble_aggregate(values),
                    theory.hrcs_power_sum(spec.n_system, spec.n_bath, t, 2, "exact"),
                    "hrcs_power_sum_exact", started,
                )
            )
        return records

    if spec.kind == "ps_sweep":
        for t in spec.steps:
            started = time.monotonic()
            args = [(spec_dict, t, spec.k_orders, b) for b in range(spec.instances)]
            rows = _run_instances(_instance_power_sums, args, workers)
            for j, k in enumerate(spec.k_orders):
                records.append(
                    make_record(
                        t, k, None, "power_sum",
                        estimators.ensemble_aggregate([row[j] for row in rows]),
                        theory.hrcs_power_sum(spec.n_system, spec.n_bath, t, k, "exact"),
                        "hrcs_power_sum_exact", started,
                    )
                )
        return records

    if spec.kind == "marginal_sweep":
        stats_and_sources = (
            ("marginal_cp_spatial", "spatial"),
            ("marginal_cp_temporal", "temporal"),
            ("marginal_cp_per_step", "per_step"),
        )
        for t in spec.steps:
            started = time.monotonic()
            args = [(spec_dict, t, b) for b in range(spec.instances)]
            rows = _run_instances(_instance_marginal_cps, args, workers)
            for j, (stat, kind) in enumerate(stats_and_sources):
                records.append(
                    make_record(
                        t, 2, None, stat,
                        estimators.ensemble_aggregate([row[j] for row in rows]),
                        theory.marginal_cp(kind, spec.n_system, spec.n_bath, t),
                        f"marginal_cp_{kind}", started,
                    )
                )
        return records

    if spec.kind == "pop_hist":
        for t in spec.steps:
            started = time.monotonic()
            n_eff = spec.n_system + t * spec.n_bath
            args = [(spec_dict, t, b) for b in range(spec.instances)]
            pooled = np.concatenate(_run_instances(_instance_probabilities, args, workers))
            ks = estimators.ks_distance_to_porter_thomas(pooled, n_eff)
            hist = estimators.pop_histogram(pooled, n_eff, bins=spec.pop_bins)
            records.append(
                make_record(
                    t, None, None, "pop_ks_to_porter_thomas",
                    estimators.EnsembleStats(spec.instances, ks, 0.0),
                    0.0, "porter_thomas_density", started,
                )
            )
            records.append(
                make_record(
                    t, None, None, "pop_density_integral",
                    estimators.EnsembleStats(spec.instances, hist.integral(), 0.0),
                    1.0, "porter_thomas_density", started,
                )
            )
        return records

    if spec.kind == "tvd":
        for t in spec.steps:
            started = time.monotonic()
            args = [(spec_dict, t, b) for b in range(spec.instances)]
            values = _run_instances(_instance_tvd, args, workers)
            records.append(
                make_record(
                    t, None, None, "tvd_to_haar",
                    estimators.ensemble_aggregate(values),
                    theory.tvd_upper_bound(spec.n_system, spec.n_bath, t, "exact"),
                    "tvd_bound_exact", started,
                )
            )
        return records

    if spec.kind == "xeb":
        for t in spec.steps:
            started = time.monotonic()
            args = [(spec_dict, t, b) for b in range(spec.instances)]
            values = _run_instances(_instance_xeb, args, workers)
            records.append(
                make_record(
                    t, None, None, "xeb_fidelity",
                    estimators.ensemble_aggregate(values),
                    theory.ideal_xeb(spec.n_system, spec.n_bath, t),
                    "ideal_xeb", started,
                )
            )
        return records

    if spec.kind == "noisy_xeb":
        for t in spec.steps:
            for gamma in spec.gammas:
                started = time.monotonic()
                args = [(spec_dict, t, gamma, b) for b in range(spec.instances)]
                values = _run_instances(_instance_noisy_xeb, args, workers)
                records.append(
                    make_record(
                        t, None, gamma, "noisy_xeb_fidelity",
                        estimators.ensemble_aggregate(values),
                        theory.noisy_xeb(spec.n_system, spec.n_bath, t, gamma, "exact"),
                        "noisy_xeb_exact", started,
                    )
                )
        return records

    if spec.kind == "reset_check":
        stats = (
            ("collision_probability_reset", 2),
            ("collision_probability_no_reset", 2),
            ("power_sum_reset", 3),
            ("power_sum_no_reset", 3),
        )
        for t in spec.steps:
            started = time.monotonic()
            args = [(spec_dict, t, b) for b in range(spec.instances)]
            rows = _run_instances(_instance_reset_check, args, workers)
            for j, (stat, k) in enumerate(stats):
                records.append(
                    make_record(
                        t, k, None, stat,
                        estimators.ensemble_aggregate([row[j] for row in rows]),
                        theory.hrcs_power_sum(spec.n_system, spec.n_bath, t, k, "exact"),
                        "hrcs_power_sum_exact", started,
                    )
                )
        return records

    # theory_table: pure formula sweep, no engine work
    for t in spec.steps:
        for k in spec.k_orders:
            for gamma in spec.gammas or (None,):
                started = time.monotonic()
                value = _theory_value(spec, t, k, gamma)
                records.append(
                    make_record(
                        t, k, gamma, spec.theory_family,
                        estimators.EnsembleStats(1, value, 0.0),
                        value, spec.theory_family, started,
                    )
                )
    return records


def _theory_value(spec: ExperimentSpec, t: int, k: int, gamma: float | None) -> float:
    fam = spec.theory_family
    n_a, n_b = spec.n_system, spec.n_bath
    if fam == "haar_power_sum":
        return theory.haar_power_sum(n_a + t * n_b, k)
    if fam == "hrcs_power_sum":
        return theory.hrcs_power_sum(n_a, n_b, t, k, "exact")
    if fam == "marginal_cp_spatial":
        return theory.marginal_cp("spatial", n_a, n_b, t)
    if fam == "marginal_cp_temporal":
        return theory.marginal_cp("temporal", n_a, n_b, t)
    if fam == "marginal_cp_per_step":
        return theory.marginal_cp("per_step", n_a, n_b, t)
    if fam == "ideal_xeb":
        return theory.ideal_xeb(n_a, n_b, t)
    if fam == "noisy_xeb_exact":
        return theory.noisy_xeb(n_a, n_b, t, _need_gamma(gamma), "exact")
    if fam == "noisy_xeb_asymptotic":
        return theory.noisy_xeb(n_a, n_b, t, _need_gamma(gamma), "asymptotic")
    if fam == "tvd_bound_exact":
        return theory.tvd_upper_bound(n_a, n_b, t, "exact")
    if fam == "tvd_bound_asymptotic":
        return theory.tvd_upper_bound(n_a, n_b, t, "asymptotic")
    if fam == "critical_steps":
        return theory.critical_steps("joint_ps", n_a, n_b, spec.epsilon, k)
    raise ConfigurationError(f"unknown theory family {fam!r}")


def _need_gamma(gamma: float | None) -> float:
    if gamma is None:
        raise ConfigurationError("this theory family needs a gammas list")
    return gamma
