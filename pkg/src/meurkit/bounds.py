"""Closed-form lower (and upper) bounds on variance products.

Every bound returns a :class:`BoundReport` carrying the bound value next to
the quantity it bounds. Functions taking observables recompute the pair
statistics themselves; the ones taking a :class:`PairStatistics` are pure
arithmetic.

Pair conventions: ``c = -i<[A,B]>``, ``r = <{A_hat,B_hat}>``. Where a bound
carries a +/- choice the keyword ``sign`` selects it explicitly; ``"auto"``
picks the branch that yields a valid, nonnegative bound.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateVarianceError,
    DenominatorVanishesError,
    DimensionError,
    EmptyListError,
    InvalidExclusionOperatorError,
    MixedTargetError,
    ValidationError,
    ZeroCommutatorWarning,
)
from .meps import ORTHO_TOL, Meps, _resolve_sign, project_and_normalize
from .qcore import Observable, PairStatistics, QuantumState, check_dims, pair_statistics

DENOM_TOL = 1e-12
SATISFY_TOL = 1e-9
EXCLUSION_TOL = 1e-9
#: |c| or |r| at or below this (relative to dA*dB) counts as exactly zero.
COEFF_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound.

    ``direction="lower"`` asserts ``value <= target``; ``"upper"`` asserts
    ``value >= target``. ``gap`` is positive when the assertion holds.
    """

    name: str
    value: float
    target: float
    direction: str = "lower"
    equality: bool | None = None
    skipped: tuple[str, ...] = field(default=())

    @property
    def gap(self) -> float:
        if self.direction == "upper":
            return self.value - self.target
        return self.target - self.value

    @property
    def satisfied(self) -> bool:
        return self.gap >= -SATISFY_TOL * (1.0 + abs(self.target))

    def squared(self) -> "BoundReport":
        return replace(self, name=f"{self.name}^2", value=self.value**2, target=self.target**2)

    def as_record(self) -> dict:
        rec = {
            "name": self.name,
            "value": self.value,
            "target": self.target,
            "gap": self.gap,
            "satisfied": self.satisfied,
        }
        if self.direction != "lower":
            rec["direction"] = self.direction
        if self.equality is not None:
            rec["equality"] = self.equality
        if self.skipped:
            rec["skipped"] = list(self.skipped)
        return rec


@dataclass(frozen=True)
class WeightParameter:
    """Either a positive weight ``lam`` or a Young exponent pair ``1/p + 1/q = 1``."""

    kind: str
    lam: float | None = None
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.kind == "lambda":
            if self.lam is None or not self.lam > 0:
                raise ValidationError(f"lambda must be positive, got {self.lam!r}")
        elif self.kind == "young":
            p, q = self.p, self.q
            if p is None or q is None or p in (0, 1) or q == 0:
                raise ValidationError(f"invalid Young exponents p={p!r}, q={q!r}")
            if abs(1 / p + 1 / q - 1) > 1e-12:
                raise ValidationError(f"1/p + 1/q = {1 / p + 1 / q!r}, expected 1")
        else:
            raise ValidationError(f"unknown weight kind {self.kind!r}")

    @classmethod
    def weight(cls, lam: float) -> "WeightParameter":
        return cls("lambda", lam=lam)

    @classmethod
    def young(cls, p: float, q: float | None = None) -> "WeightParameter":
        if q is None:
            if p in (0, 1):
                raise ValidationError(f"p must not be 0 or 1, got {p!r}")
            q = p / (p - 1)
        return cls("young", p=p, q=q)


@dataclass(frozen=True, eq=False)
class ExclusionOperator:
    """Operator ``M`` with ``<M> = 0`` and ``<M M^dag> = 2 - 2|<A_hat B_hat>|/(dA dB)``.

    The matrix itself is unconstrained; validity is relative to an observable
    pair and a state and is checked by :func:`validate_exclusion_operator`.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"exclusion operator must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


# ---------------------------------------------------------------- helpers


def pair_indices(n: int) -> list[tuple[int, int]]:
    """Index pairs ``(j, k)`` with ``j < k``, in lexicographic order.

    For two observables the single pair is ``(0, 1)``, so the n-observable
    bounds evaluate exactly the pair bound on ``(obs[0], obs[1])``.
    """
    return list(combinations(range(n), 2))


def _check_meps(m: Meps, psi: QuantumState) -> None:
    check_dims(m, psi)
    if abs(np.vdot(psi.amplitudes, m.vector)) > ORTHO_TOL:
        raise ValidationError("MEPS is not orthogonal to the given state")


def _elements(a: Observable, b: Observable, psi: QuantumState, m: Meps) -> tuple[complex, complex]:
    """``(<psi|A|m>, <psi|B|m>)``."""
    _check_meps(m, psi)
    p = psi.amplitudes
    return complex(np.vdot(p, a.matrix @ m.vector)), complex(np.vdot(p, b.matrix @ m.vector))


def _is_zero(coef: float, stats: PairStatistics) -> bool:
    return abs(coef) <= COEFF_TOL * max(1.0, stats.product)


def _guard(den: float, what: str) -> float:
    if not den > DENOM_TOL:
        raise DenominatorVanishesError(f"{what} denominator is {den:.3e}")
    return den


def _per_pair(values, pairs, what):
    if isinstance(values, Mapping):
        return [values[p] for p in pairs]
    if np.isscalar(values) or isinstance(values, (Meps, ExclusionOperator)) or values is None:
        return [values] * len(pairs)
    values = list(values)
    if len(values) != len(pairs):
        raise ValueError(f"expected {len(pairs)} {what}, got {len(values)}")
    return values


# ------------------------------------------------------- classical bounds


def robertson(st: PairStatistics) -> BoundReport:
    return BoundReport("robertson", abs(st.c) / 2, st.product)


def schroedinger(st: PairStatistics) -> BoundReport:
    return BoundReport("schroedinger", st.s, st.product_sq)


def weighted_sum_l1(a, b, psi, lam: float, m1: Meps, m2: Meps) -> BoundReport:
    """Weighted-sum bound built from ``A - iB`` and ``lam A - iB``.

    The commutator term enters as ``2c`` (that is ``-2i<[A,B]>``), which keeps
    the bound valid for either ordering of the pair.
    """
    WeightParameter.weight(lam)
    st = pair_statistics(a, b, psi)
    a1, b1 = _elements(a, b, psi, m1)
    a2, b2 = _elements(a, b, psi, m2)
    value = 2 * st.c + abs(a1 - 1j * b1) ** 2 + abs(lam * a2 - 1j * b2) ** 2 / lam
    target = (1 + lam) * st.std_a**2 + (1 + 1 / lam) * st.std_b**2
    return BoundReport(f"l1(lambda={lam:g})", value, target)


def weighted_sum_l2(a, b, psi, lam: float, m_sum: Meps, m: Meps) -> BoundReport:
    WeightParameter.weight(lam)
    st = pair_statistics(a, b, psi)
    a1, b1 = _elements(a, b, psi, m_sum)
    a2, b2 = _elements(a, b, psi, m)
    value = abs(a1 + b1) ** 2 + abs(lam * a2 - b2) ** 2 / lam
    target = (1 + lam) * st.std_a**2 + (1 + 1 / lam) * st.std_b**2
    return BoundReport(f"l2(lambda={lam:g})", value, target)


def young_weighted_product(st: PairStatistics, w: WeightParameter) -> BoundReport:
    """Young-type weighted product: a lower bound for ``p < 1``, an upper bound for ``p > 1``."""
    if w.kind != "young":
        raise ValidationError("young_weighted_product needs Young exponents")
    if st.std_a <= 0 or st.std_b <= 0:
        raise DegenerateVarianceError("weighted product requires dA * dB > 0")
    va, vb = st.std_a**2, st.std_b**2
    value = va / w.p + vb / w.q
    target = va ** (1 / w.p) * vb ** (1 / w.q)
    return BoundReport(
        f"young(p={w.p:g})",
        value,
        target,
        direction="upper" if w.p > 1 else "lower",
        equality=abs(st.std_a - st.std_b) <= 1e-9,
    )


# ------------------------------------------------- MEPS product bounds


def f_factor(a, b, psi, lam: float, m: Meps, sign="auto") -> float:
    """``2 sqrt(lam) / ((1 + lam) - |<psi|A/dA + sign i sqrt(lam) B/dB|m>|^2)``."""
    WeightParameter.weight(lam)
    st = pair_statistics(a, b, psi)
    st.require_nondegenerate()
    return _f_factor(st, *_elements(a, b, psi, m), lam, _resolve_sign(sign, st.c))


def _f_factor(st, am, bm, lam, s) -> float:
    x = am / st.std_a + s * 1j * math.sqrt(lam) * bm / st.std_b
    den = _guard((1 + lam) - abs(x) ** 2, "product bound")
    return 2 * math.sqrt(lam) / den


def meur_bound(a, b, psi, lam: float, m: Meps, sign="auto") -> BoundReport:
    """Weighted mutually exclusive bound on ``dA dB``.

    Value is ``sign * i<[A,B]> sqrt(lam) / ((1+lam) - |<psi|A/dA + sign i sqrt(lam) B/dB|m>|^2)``.
    ``lam = 1`` is the unweighted amended Robertson bound. When ``c = 0`` the
    bound is 0.
    """
    WeightParameter.weight(lam)
    st = pair_statistics(a, b, psi)
    st.require_nondegenerate()
    name = f"meur(lambda={lam:g})"
    if _is_zero(st.c, st):
        _check_meps(m, psi)
        return BoundReport(name, 0.0, st.product)
    s = _resolve_sign(sign, st.c)
    f = _f_factor(st, *_elements(a, b, psi, m), lam, s)
    return BoundReport(name, (-s * st.c / 2) * f, st.product)


def tropical_sum(reports: Sequence[BoundReport]) -> BoundReport:
    """Pointwise maximum of bounds sharing a target."""
    reports = list(reports)
    if not reports:
        raise EmptyListError("tropical sum of an empty list")
    t0 = reports[0].target
    for rep in reports[1:]:
        if abs(rep.target - t0) > 1e-12 * (1 + abs(t0)) or rep.direction != reports[0].direction:
            raise MixedTargetError(f"{rep.name} bounds a different quantity than {reports[0].name}")
    best = max(reports, key=lambda rep: rep.value)
    skipped = tuple(s for rep in reports for s in rep.skipped)
    return BoundReport(
        "tropical(" + ",".join(rep.name for rep in reports) + ")",
        best.value,
        t0,
        direction=reports[0].direction,
        skipped=skipped,
    )


def multi_meur_bound(obs: Sequence[Observable], psi, lambdas, mepses, signs=None) -> BoundReport:
    """n-observable product bound from pairwise weighted MEPS bounds.

    ``lambdas``, ``mepses`` and ``signs`` are either a single value used for
    every pair, a sequence ordered like :func:`pair_indices`, or a mapping
    keyed by ``(j, k)``.
    """
    n = len(obs)
    if n < 2:
        raise ValueError("need at least two observables")
    pairs = pair_indices(n)
    lams = _per_pair(lambdas, pairs, "lambdas")
    ms = _per_pair(mepses, pairs, "MEPS")
    sg = _per_pair("auto" if signs is None else signs, pairs, "signs")
    prod = 1.0
    for (j, k), lam, m, s in zip(pairs, lams, ms, sg):
        rep = meur_bound(obs[j], obs[k], psi, lam, m, s)
        if rep.value == 0.0:
            warnings.warn(f"commutator of pair {(j, k)} vanishes; bound collapses to 0", ZeroCommutatorWarning)
        if rep.value < 0:
            raise ValueError(f"sign choice for pair {(j, k)} makes its bound negative")
        prod *= rep.value
    target = math.prod(pair_statistics(o, o, psi).std_a for o in obs)
    return BoundReport(f"multi_meur(n={n})", prod ** (1 / (n - 1)), target)


def corollary1_bound(obs: Sequence[Observable], psi) -> BoundReport:
    n = len(obs)
    if n < 2:
        raise ValueError("need at least two observables")
    prod = 1.0
    for j, k in pair_indices(n):
        prod *= abs(pair_statistics(obs[j], obs[k], psi).c) / 2
    target = math.prod(pair_statistics(o, o, psi).std_a for o in obs)
    return BoundReport(f"corollary1(n={n})", prod ** (1 / (n - 1)), target)


# --------------------------------------------- amended Schroedinger family


def amended_schroedinger_g(a, b, psi, m1: Meps, m2: Meps) -> float:
    """MEPS-amplified Schroedinger sum.

    The commutator term uses ``A/dA + s1 i B/dB`` with ``s1 = -sign(c)`` and
    the anticommutator term ``A/dA + s2 B/dB`` with ``s2 = -sign(r)``; these are
    the branches for which each term stays below ``(dA dB)^2``.
    """
    st = pair_statistics(a, b, psi)
    st.require_nondegenerate()
    a1, b1 = _elements(a, b, psi, m1)
    a2, b2 = _elements(a, b, psi, m2)
    g = 0.0
    if not _is_zero(st.c, st):
        s1 = _resolve_sign("auto", st.c)
        x1 = a1 / st.std_a + s1 * 1j * b1 / st.std_b
        g += (st.c / 2) ** 2 / _guard(1 - abs(x1) ** 2 / 2, "commutator term") ** 2
    if not _is_zero(st.r, st):
        s2 = _resolve_sign("auto", st.r)
        x2 = a2 / st.std_a + s2 * b2 / st.std_b
        g += (st.r / 2) ** 2 / _guard(1 - abs(x2) ** 2 / 2, "anticommutator term") ** 2
    return g


def amended_schroedinger_h(g: float, s: float) -> float:
    return ((g + 2 * s) + abs(g - 2 * s)) / 4


def amended_schroedinger_bound(a, b, psi, m1: Meps, m2: Meps) -> BoundReport:
    st = pair_statistics(a, b, psi)
    g = amended_schroedinger_g(a, b, psi, m1, m2)
    return BoundReport("amended_schroedinger", amended_schroedinger_h(g, st.s), st.product_sq)


def validate_exclusion_operator(mop: ExclusionOperator, a, b, psi) -> None:
    check_dims(mop, a, b, psi)
    st = pair_statistics(a, b, psi)
    st.require_nondegenerate()
    p = psi.amplitudes
    mean = complex(np.vdot(p, mop.matrix @ p))
    if abs(mean) > EXCLUSION_TOL:
        raise InvalidExclusionOperatorError(f"<M> = {mean:.3e}, expected 0")
    mdag_psi = mop.matrix.conj().T @ p
    mmdag = float(np.vdot(mdag_psi, mdag_psi).real)
    required = 2 - 2 * abs(st.ahat_bhat) / st.product
    if abs(mmdag - required) > EXCLUSION_TOL:
        raise InvalidExclusionOperatorError(f"<M M^dag> = {mmdag!r}, expected {required!r}")


def aligned_exclusion_operator(a, b, psi) -> ExclusionOperator:
    """``A_hat/dA - e^{i phi} B_hat/dB`` with ``phi = arg <A_hat B_hat>``.

    This is the canonical library candidate; it reduces to ``A_hat/dA - B_hat/dB``
    or ``A_hat/dA + B_hat/dB`` when ``<A_hat B_hat>`` is real.
    """
    st = pair_statistics(a, b, psi)
    st.require_nondegenerate()
    z = st.ahat_bhat
    phase = z / abs(z) if abs(z) > 0 else 1.0
    eye = np.eye(a.dim)
    ahat = (a.matrix - st.mean_a * eye) / st.std_a
    bhat = (b.matrix - st.mean_b * eye) / st.std_b
    return ExclusionOperator(ahat - phase * bhat)


def optimal_meps_exclusion(mop: ExclusionOperator, psi) -> Meps:
    """Direction maximizing ``|<psi|M|m>|``: the normalized ``M^dag |psi>``.

    Raises :class:`ZeroVectorError` when ``M^dag |psi>`` vanishes; every MEPS
    then gives the same value.
    """
    return project_and_normalize(mop.matrix.conj().T @ psi.amplitudes, psi)


def _remark1_value(st, mop, psi, m) -> float:
    if _is_zero(math.sqrt(st.s), st):
        return 0.0
    x = complex(np.vdot(psi.amplitudes, mop.matrix @ m.vector))
    return st.s / _guard(1 - abs(x) ** 2 / 2, "exclusion-operator") ** 2


def remark1_bound(a, b, psi, mop: ExclusionOperator, m: Meps) -> BoundReport:
    """Generalized Schroedinger bound amplified by an exclusion operator."""
    validate_exclusion_operator(mop, a, b, psi)
    _check_meps(m, psi)
    st = pair_statistics(a, b, psi)
    return BoundReport("remark1", _remark1_value(st, mop, psi, m), st.product_sq)


def theorem5_bound(obs: Sequence[Observable], psi, mops, mepses) -> BoundReport:
    n = len(obs)
    if n < 2:
        raise ValueError("need at least two observables")
    pairs = pair_indices(n)
    prod = 1.0
    for (j, k), mop, m in zip(pairs, _per_pair(mops, pairs, "operators"), _per_pair(mepses, pairs, "MEPS")):
        prod *= remark1_bound(obs[j], obs[k], psi, mop, m).value
    target = math.prod(pair_statistics(o, o, psi).std_a ** 2 for o in obs)
    return BoundReport(f"theorem5(n={n})", prod ** (1 / (n - 1)), target)


def corollary2_bound(obs: Sequence[Observable], psi) -> BoundReport:
    """Squared multi-observable Schroedinger bound; the target is the product of variances."""
    n = len(obs)
    if n < 2:
        raise ValueError("need at least two observables")
    prod = 1.0
    for j, k in pair_indices(n):
        prod *= pair_statistics(obs[j], obs[k], psi).s
    target = math.prod(pair_statistics(o, o, psi).std_a ** 2 for o in obs)
    return BoundReport(f"corollary2(n={n})", prod ** (1 / (n - 1)), target)


def hermitian_variant_bound(a, b, psi, m: Meps, sign="auto") -> BoundReport:
    """Anticommutator analogue of the amended Robertson bound.

    Value ``(-sign r / 2) / (1 - |<psi|A/dA + sign B/dB|m>|^2 / 2)``; the auto
    sign ``-sign(r)`` makes the numerator ``|r|/2``.
    """
    st = pair_statistics(a, b, psi)
    st.require_nondegenerate()
    am, bm = _elements(a, b, psi, m)
    if _is_zero(st.r, st):
        return BoundReport("hermitian_variant", 0.0, st.product)
    s = _resolve_sign(sign, st.r)
    x = am / st.std_a + s * bm / st.std_b
    den = _guard(1 - abs(x) ** 2 / 2, "hermitian variant")
    return BoundReport("hermitian_variant", (-s * st.r / 2) / den, st.product)
