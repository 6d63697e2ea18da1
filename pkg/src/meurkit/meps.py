"""Mutually exclusive physical states: unit vectors orthogonal to a reference state.

Sign convention
---------------
``sign`` is the explicit +/- inside ``A/dA + sign * i sqrt(lam) B/dB``. The
choice that keeps the product bound positive is ``sign = -sign(c)`` with
``c = -i <[A, B]>``; :func:`auto_sign` returns it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError, ZeroVectorError
from .qcore import QuantumState, Observable, check_dims, hatted_image, pair_statistics

ORTHO_TOL = 1e-10
ZERO_VECTOR_TOL = 1e-12
_PHASE_TOL = 1e-12


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so that its first non-negligible component is real-positive."""
    idx = np.flatnonzero(np.abs(v) > _PHASE_TOL * max(1.0, np.abs(v).max()))
    if idx.size == 0:
        return v
    z = v[idx[0]]
    if z.imag == 0 and z.real > 0:
        return v
    out = v * (abs(z) / z)
    # pin the pivot exactly so that canonicalizing again is a no-op
    out[idx[0]] = abs(z)
    return out


@dataclass(frozen=True, eq=False)
class Meps:
    """Unit vector in the hyperplane orthogonal to ``reference``."""

    reference: QuantumState
    vector: np.ndarray

    def __post_init__(self):
        v = np.array(self.vector, dtype=np.complex128)
        if v.shape != (self.reference.dim,):
            raise DimensionError(f"MEPS has shape {v.shape}, reference has dim {self.reference.dim}")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > ORTHO_TOL:
            raise ValidationError(f"MEPS norm is {norm!r}, expected 1")
        overlap = abs(np.vdot(self.reference.amplitudes, v))
        if overlap > ORTHO_TOL:
            raise ValidationError(f"MEPS overlaps the reference state (|<psi|v>| = {overlap:.3e})")
        v = _canonical_phase(v)
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    @property
    def dim(self) -> int:
        return self.vector.size

    def overlap(self, other: "Meps") -> float:
        """Phase-insensitive fidelity ``|<self|other>|``."""
        return float(abs(np.vdot(self.vector, other.vector)))


def project_and_normalize(v, psi: QuantumState) -> Meps:
    """Project ``v`` onto the orthogonal complement of ``psi`` and normalize."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (psi.dim,):
        raise DimensionError(f"vector has shape {v.shape}, state has dim {psi.dim}")
    p = psi.amplitudes
    w = v - np.vdot(p, v) * p
    norm = np.linalg.norm(w)
    if norm < ZERO_VECTOR_TOL:
        raise ZeroVectorError(f"projected vector has norm {norm:.3e}")
    # second Gram-Schmidt pass removes residual overlap from cancellation
    w = w - np.vdot(p, w) * p
    return Meps(psi, w / np.linalg.norm(w))


def orthogonal_meps(psi: QuantumState, avoid=(), seed: int = 0) -> Meps:
    """A unit vector orthogonal to ``psi`` and to every vector in ``avoid``.

    Used to build MEPS with vanishing overlap against a given image vector.
    """
    basis = [psi.amplitudes]
    for a in avoid:
        a = np.asarray(a, dtype=np.complex128)
        for q in basis:
            a = a - np.vdot(q, a) * q
        n = np.linalg.norm(a)
        if n > ZERO_VECTOR_TOL:
            basis.append(a / n)
    if len(basis) >= psi.dim:
        raise ZeroVectorError("no direction left orthogonal to psi and the avoided vectors")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(psi.dim) + 1j * rng.standard_normal(psi.dim)
    for _ in range(2):
        for q in basis:
            v = v - np.vdot(q, v) * q
    return Meps(psi, v / np.linalg.norm(v))


def auto_sign(c: float) -> int:
    """Sign making ``sign * i <[A,B]> = -sign * c`` nonnegative."""
    return -1 if c >= 0 else 1


def _resolve_sign(sign, coefficient: float) -> int:
    if sign in (None, "auto"):
        return auto_sign(coefficient)
    if sign in (1, -1, "+", "-"):
        return {"+": 1, "-": -1}.get(sign, sign)
    raise ValueError(f"sign must be 'auto', +1 or -1, got {sign!r}")


def optimal_meps_product(a: Observable, b: Observable, psi: QuantumState, lam: float, sign="auto") -> Meps:
    """Maximizer of the product bound at weight ``lam``.

    Returns the normalized ``(A_hat/dA - sign * i sqrt(lam) B_hat/dB)|psi>``,
    the direction along which ``|<psi|A/dA + sign i sqrt(lam) B/dB|m>|`` is largest.
    Raises :class:`ZeroVectorError` when that image vanishes, which happens
    exactly when the bound is saturated by every MEPS.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    stats = pair_statistics(a, b, psi)
    stats.require_nondegenerate()
    s = _resolve_sign(sign, stats.c)
    w = hatted_image(a, psi) / stats.std_a - s * 1j * np.sqrt(lam) * hatted_image(b, psi) / stats.std_b
    return project_and_normalize(w, psi)


def optimal_meps_anticommutator(a: Observable, b: Observable, psi: QuantumState, sign="auto") -> Meps:
    """Maximizer of the anticommutator (Hermitian) variant.

    Returns the normalized ``(A_hat/dA + sign * B_hat/dB)|psi>``; the auto sign
    is ``-sign(r)``.
    """
    stats = pair_statistics(a, b, psi)
    stats.require_nondegenerate()
    s = _resolve_sign(sign, stats.r)
    w = hatted_image(a, psi) / stats.std_a + s * hatted_image(b, psi) / stats.std_b
    return project_and_normalize(w, psi)


def sample_meps(psi: QuantumState, seed: int, count: int) -> list[Meps]:
    """Draw ``count`` MEPS uniformly from the unit sphere of the complement of ``psi``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, psi.dim)) + 1j * rng.standard_normal((count, psi.dim))
    return [project_and_normalize(v, psi) for v in g]


def great_circle(start: Meps, end: Meps, t: float) -> Meps:
    """Point at angle ``t`` on the great circle through ``start`` towards ``end``.

    ``t = 0`` gives ``start``; ``t = pi/2`` gives the component of ``end``
    orthogonal to ``start``.
    """
    check_dims(start, end)
    u = start.vector
    v = end.vector - np.vdot(u, end.vector) * u
    n = np.linalg.norm(v)
    if n < ZERO_VECTOR_TOL:
        raise ZeroVectorError("great-circle endpoints are parallel")
    return project_and_normalize(np.cos(t) * u + np.sin(t) * (v / n), start.reference)
