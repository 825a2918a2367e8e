"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from hrcslab import HrcsConfig, QubitSubset, Statevector, sample_haar_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_state(n_qubits: int, seed: int) -> Statevector:
    """Haar-random pure state on n qubits."""
    gen = np.random.default_rng(seed)
    v = gen.standard_normal(1 << n_qubits) + 1j * gen.standard_normal(1 << n_qubits)
    return Statevector(v / np.linalg.norm(v), n_qubits)


def small_config(**overrides) -> HrcsConfig:
    base = dict(n_system=2, n_bath=1, steps=2, master_seed=7)
    base.update(overrides)
    return HrcsConfig(**base)


def haar_on(n_qubits: int, seed: int):
    return sample_haar_unitary(1 << n_qubits, np.random.default_rng(seed))


def subset(*qubits) -> QubitSubset:
    return QubitSubset.of(*qubits)
