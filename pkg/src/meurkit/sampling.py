"""Random states, observables and scenarios for property tests and fuzzing."""

from __future__ import annotations

import numpy as np

from .qcore import Observable, QuantumState


def random_state(dim: int, rng: np.random.Generator) -> QuantumState:
    """Haar-random pure state."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return QuantumState(v / np.linalg.norm(v))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> Observable:
    """GUE-distributed Hermitian matrix with entries of order ``scale``."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable(scale * (g + g.conj().T) / 2)


def random_observables(dim: int, n: int, rng: np.random.Generator) -> list[Observable]:
    return [random_hermitian(dim, rng) for _ in range(n)]
