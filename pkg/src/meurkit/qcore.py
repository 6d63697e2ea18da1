"""States, observables and the pair statistics every bound is built from.

All quantities are dense double-precision numpy arrays. Objects are validated
on construction and frozen afterwards; nothing is silently repaired.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegenerateVarianceError,
    DimensionError,
    HermiticityError,
    NegativeVarianceError,
    NormalizationError,
    UncertaintyError,
)

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
#: Standard deviations below this are treated as zero by bounds dividing by them.
STD_TOL = 1e-9
VARIANCE_CLAMP = 1e-12


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Unit-norm ket on a finite-dimensional Hilbert space."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1:
            raise DimensionError(f"state must be a 1-d vector, got shape {amps.shape}")
        if amps.size < 2:
            raise DimensionError("state dimension must be at least 2")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def from_unnormalized(cls, vector) -> "QuantumState":
        v = np.asarray(vector, dtype=np.complex128)
        return cls(v / np.linalg.norm(v))

    @classmethod
    def basis(cls, dim: int, index: int) -> "QuantumState":
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"observable must be square, got shape {m.shape}")
        scale = 1.0 + (np.abs(m).max() if m.size else 0.0)
        asym = np.abs(m - m.conj().T).max() if m.size else 0.0
        if asym > HERMITIAN_TOL * scale:
            raise HermiticityError(f"matrix is not Hermitian (max |M - M^dag| = {asym:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def shifted(self, alpha: float) -> "Observable":
        """Return ``M + alpha * I``."""
        return Observable(self.matrix + alpha * np.eye(self.dim))

    def __matmul__(self, other):
        if isinstance(other, QuantumState):
            return self.matrix @ other.amplitudes
        return self.matrix @ other


def check_dims(*objs) -> int:
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def expectation(obs: Observable, psi: QuantumState) -> complex:
    """Return ``<psi|obs|psi>`` as a complex number."""
    check_dims(obs, psi)
    return complex(np.vdot(psi.amplitudes, obs.matrix @ psi.amplitudes))


def variance(obs: Observable, psi: QuantumState) -> float:
    """``<O^2> - <O>^2``, clamped to 0 inside the roundoff band."""
    check_dims(obs, psi)
    mean = expectation(obs, psi).real
    second = float(np.vdot(obs @ psi, obs @ psi).real)
    var = second - mean * mean
    if var < 0.0:
        if var < -VARIANCE_CLAMP:
            raise NegativeVarianceError(f"variance {var!r} is negative")
        var = 0.0
    return var


def hatted_image(obs: Observable, psi: QuantumState) -> np.ndarray:
    """``(O - <O>) |psi>``; orthogonal to ``psi`` for Hermitian ``O``."""
    v = obs @ psi
    return v - np.vdot(psi.amplitudes, v) * psi.amplitudes


@dataclass(frozen=True)
class PairStatistics:
    """Means, standard deviations and the two real correlation coefficients.

    ``c = -i <[A, B]>`` and ``r = <{A_hat, B_hat}>``, so that
    ``<A_hat B_hat> = (r + i c) / 2``.
    """

    mean_a: float
    mean_b: float
    std_a: float
    std_b: float
    c: float
    r: float

    @property
    def product(self) -> float:
        return self.std_a * self.std_b

    @property
    def product_sq(self) -> float:
        return (self.std_a * self.std_b) ** 2

    @property
    def s(self) -> float:
        """Schroedinger lower bound ``(c/2)^2 + (r/2)^2``."""
        return (self.c / 2) ** 2 + (self.r / 2) ** 2

    @property
    def ahat_bhat(self) -> complex:
        return complex(self.r / 2, self.c / 2)

    def swapped(self) -> "PairStatistics":
        return PairStatistics(self.mean_b, self.mean_a, self.std_b, self.std_a, -self.c, self.r)

    def require_nondegenerate(self) -> None:
        if self.std_a <= STD_TOL or self.std_b <= STD_TOL:
            raise DegenerateVarianceError(
                f"standard deviation below {STD_TOL:g} (std_a={self.std_a:.3e}, std_b={self.std_b:.3e})"
            )


@lru_cache(maxsize=4096)
def pair_statistics(a: Observable, b: Observable, psi: QuantumState) -> PairStatistics:
    """Statistics of the pair ``(a, b)`` on ``psi``.

    Cached on object identity; inputs are immutable so this is safe.
    """
    check_dims(a, b, psi)
    p = psi.amplitudes
    av, bv = a.matrix @ p, b.matrix @ p
    mean_a, mean_b = np.vdot(p, av).real, np.vdot(p, bv).real
    ahat, bhat = av - mean_a * p, bv - mean_b * p
    var_a = float(np.vdot(ahat, ahat).real)
    var_b = float(np.vdot(bhat, bhat).real)
    # <A_hat B_hat> = <A_hat psi | B_hat psi>
    z = complex(np.vdot(ahat, bhat))
    stats = PairStatistics(
        mean_a=float(mean_a),
        mean_b=float(mean_b),
        std_a=float(np.sqrt(var_a)),
        std_b=float(np.sqrt(var_b)),
        c=2.0 * z.imag,
        r=2.0 * z.real,
    )
    if stats.s > var_a * var_b + 1e-9 * (1.0 + var_a * var_b):
        raise UncertaintyError("Schroedinger inequality violated; inputs are numerically inconsistent")
    return stats


def commutator(a: Observable, b: Observable) -> np.ndarray:
    return a.matrix @ b.matrix - b.matrix @ a.matrix


def anticommutator(a: Observable, b: Observable) -> np.ndarray:
    return a.matrix @ b.matrix + b.matrix @ a.matrix
