import math

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from meurkit.errors import (
    DegenerateVarianceError,
    DimensionError,
    HermiticityError,
    NegativeVarianceError,
    NormalizationError,
)
from meurkit.qcore import (
    Observable,
    QuantumState,
    anticommutator,
    commutator,
    expectation,
    hatted_image,
    pair_statistics,
    variance,
)
from meurkit.sampling import random_hermitian, random_state
from meurkit.scenarios import PAPER4_A, PAPER4_B

from conftest import KET0, SX, SY, SZ, random_pair, scenarios


def naive_expectation(m, v):
    """Entrywise sum of conj(v_i) m_ij v_j."""
    total = 0j
    n = len(v)
    for i in range(n):
        for j in range(n):
            total += np.conj(v[i]) * m[i, j] * v[j]
    return total


def test_state_validation():
    with pytest.raises(NormalizationError):
        QuantumState(np.array([1.0, 1.0]))
    with pytest.raises(DimensionError):
        QuantumState(np.array([1.0]))
    with pytest.raises(DimensionError):
        QuantumState(np.eye(2))
    psi = QuantumState.from_unnormalized([3, 4j])
    assert_allclose(np.linalg.norm(psi.amplitudes), 1.0)
    assert psi.dim == 2


def test_state_is_frozen():
    psi = QuantumState.basis(3, 1)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0


def test_observable_hermiticity():
    with pytest.raises(HermiticityError):
        Observable(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionError):
        Observable(np.zeros((2, 3)))
    # tolerance is relative to the entry scale
    Observable(np.array([[0, 1e6], [1e6 + 1e-5, 0]]))


def test_expectation_sigma_z():
    assert expectation(SZ, KET0) == 1


def test_expectation_dimension_mismatch():
    with pytest.raises(DimensionError):
        expectation(SZ, QuantumState.basis(3, 0))


def test_expectation_matches_loop_oracle(rng):
    for dim in range(2, 7):
        m = random_hermitian(dim, rng)
        psi = random_state(dim, rng)
        ref = naive_expectation(m.matrix, psi.amplitudes)
        assert_allclose(expectation(m, psi), ref, rtol=1e-12, atol=1e-14)
        assert abs(expectation(m, psi).imag) < 1e-10


def test_expectation_4dim_example():
    for theta in (0.0, 0.3, math.pi / 3, 1.2):
        psi = QuantumState(np.array([math.cos(theta / 2), math.sin(theta / 2), 0, 0]))
        assert_allclose(expectation(Observable(PAPER4_A), psi).real, math.sin(theta), atol=1e-12)
        assert_allclose(expectation(Observable(PAPER4_B), psi).real, math.cos(theta), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(scenarios())
def test_expectation_linear(sc):
    (m, n), psi = sc
    alpha, beta = 0.7, -2.3
    combo = Observable(alpha * m.matrix + beta * n.matrix)
    lhs = expectation(combo, psi)
    rhs = alpha * expectation(m, psi) + beta * expectation(n, psi)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_variance_clamp_and_error():
    assert variance(SZ, KET0) == 0.0
    psi = QuantumState(np.array([1, 1]) / math.sqrt(2))
    assert_allclose(variance(SZ, psi), 1.0)


def test_variance_negative_raises(monkeypatch):
    import meurkit.qcore as qc

    monkeypatch.setattr(qc, "expectation", lambda obs, psi: 1.0 + 1e-6)
    with pytest.raises(NegativeVarianceError):
        qc.variance(SZ, KET0)


def test_pair_stats_4dim_example():
    psi = QuantumState(np.array([math.cos(math.pi / 6), math.sin(math.pi / 6), 0, 0]))
    st = pair_statistics(Observable(PAPER4_A), Observable(PAPER4_B), psi)
    assert_allclose(st.std_a, 0.5, atol=1e-12)
    assert_allclose(st.std_b, math.sqrt(7) / 2, atol=1e-12)
    assert_allclose(st.product, math.sqrt(7) / 4, atol=1e-12)
    # c = 2 cos(theta) from the commutator matrix directly
    # i[A,B] is Hermitian and c = -<i[A,B]>
    c_direct = -expectation(Observable(1j * commutator(Observable(PAPER4_A), Observable(PAPER4_B))), psi).real
    assert_allclose(st.c, c_direct, atol=1e-12)
    assert_allclose(abs(st.c), 1.0, atol=1e-12)


def test_pair_stats_pauli():
    st = pair_statistics(SX, SY, KET0)
    assert_allclose([st.std_a, st.std_b, st.c, st.r], [1, 1, 2, 0], atol=1e-15)
    assert_allclose(st.mean_a, 0.0)
    assert_allclose(st.ahat_bhat, 1j)


def test_pair_stats_self_commutator(rng):
    a, _, psi = random_pair(4, rng)
    st = pair_statistics(a, a, psi)
    assert abs(st.c) < 1e-14
    assert_allclose(st.r, 2 * st.std_a**2)


def test_c_and_r_match_matrix_formulas(rng):
    for dim in (2, 3, 5):
        a, b, psi = random_pair(dim, rng)
        st = pair_statistics(a, b, psi)
        comm = expectation(Observable(1j * commutator(a, b)), psi).real
        anti = expectation(Observable(anticommutator(a, b)), psi).real
        ma, mb = expectation(a, psi).real, expectation(b, psi).real
        assert_allclose(st.c, -comm, rtol=1e-10, atol=1e-12)
        assert_allclose(st.r, anti - 2 * ma * mb, rtol=1e-10, atol=1e-12)
        assert_allclose(st.std_a**2, variance(a, psi), rtol=1e-10, atol=1e-12)


def test_hatted_image_orthogonal(rng):
    a, _, psi = random_pair(5, rng)
    v = hatted_image(a, psi)
    assert abs(np.vdot(psi.amplitudes, v)) < 1e-13
    assert_allclose(np.linalg.norm(v) ** 2, variance(a, psi), rtol=1e-10)


@settings(max_examples=500, deadline=None)
@given(scenarios())
def test_schroedinger_inequality_universal(sc):
    (a, b), psi = sc
    st = pair_statistics(a, b, psi)
    assert st.s <= st.product_sq + 1e-9


@settings(max_examples=100, deadline=None)
@given(scenarios())
def test_swap_symmetry(sc):
    (a, b), psi = sc
    st, sw = pair_statistics(a, b, psi), pair_statistics(b, a, psi)
    assert_allclose([sw.c, sw.r, sw.std_a, sw.std_b], [-st.c, st.r, st.std_b, st.std_a], rtol=1e-12, atol=1e-13)
    ref = st.swapped()
    assert_allclose([sw.c, sw.r, sw.std_a, sw.std_b], [ref.c, ref.r, ref.std_a, ref.std_b], rtol=1e-12, atol=1e-13)


def test_require_nondegenerate():
    st = pair_statistics(SZ, SX, KET0)
    with pytest.raises(DegenerateVarianceError):
        st.require_nondegenerate()
    pair_statistics(SX, SY, KET0).require_nondegenerate()
