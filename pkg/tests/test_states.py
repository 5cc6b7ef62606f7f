import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravwitness.channels import apply_channel, gravity_channel
from gravwitness.errors import CoherenceOutOfRange, InvalidState
from gravwitness.phases import dimensionless_phases
from gravwitness.states import (
    CoherencePair,
    DensityOperator,
    bell_state,
    initial_state,
    l1_coherence,
    reduced_state,
    single_object_state,
)


def test_full_coherence_is_pure_superposition():
    rho = initial_state(CoherencePair(1, 1))
    plus = np.ones(4) / 2
    np.testing.assert_allclose(rho.matrix, np.outer(plus, plus), atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(rho.matrix)[::-1], [1, 0, 0, 0], atol=1e-14)


def test_zero_coherence_is_maximally_mixed():
    np.testing.assert_array_equal(initial_state(CoherencePair(0, 0)).matrix, np.eye(4) / 4)


def test_product_spectrum():
    # factor eigenvalues are (1 +- c)/2 = 0.8, 0.2; products 0.64, 0.16, 0.16, 0.04
    values = np.sort(np.linalg.eigvalsh(initial_state(CoherencePair(0.6, 0.6)).matrix))[::-1]
    np.testing.assert_allclose(values, [0.64, 0.16, 0.16, 0.04], atol=1e-15)


def test_diagonal_is_quarter():
    rho = initial_state(CoherencePair(0.3, -0.8))
    np.testing.assert_allclose(np.diag(rho.matrix), 0.25)


@pytest.mark.parametrize("bad", [1.01, -1.5, math.nan, math.inf])
def test_coherence_out_of_range(bad):
    with pytest.raises(CoherenceOutOfRange):
        CoherencePair(bad, 0.5)


def test_complex_coherence_rejected():
    with pytest.raises(CoherenceOutOfRange):
        CoherencePair(0.5j, 0.5)


def test_density_operator_rejects_invalid():
    with pytest.raises(InvalidState):
        DensityOperator(np.eye(4))
    with pytest.raises(InvalidState):
        DensityOperator(np.diag([0.5, 0.5, 0.5, -0.5]))
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 0.1j
    with pytest.raises(InvalidState):
        DensityOperator(m)


def test_l1_single_object():
    for c in (0.0, 0.3, -0.7, 1.0):
        assert l1_coherence(single_object_state(c)) == pytest.approx(abs(c))


def test_l1_maximally_mixed_is_zero():
    assert l1_coherence(np.eye(4) / 4) == 0
    assert l1_coherence(np.eye(2) / 2) == 0


@pytest.mark.parametrize("c1,c2", list(itertools.product([0, 0.2, -0.6, 1], repeat=2)))
def test_l1_product_identity(c1, c2):
    rho = initial_state(CoherencePair(c1, c2)).matrix
    brute = sum(abs(rho[i, j]) for i in range(4) for j in range(4) if i != j)
    assert l1_coherence(rho) == pytest.approx(brute, abs=1e-15)
    assert brute == pytest.approx((1 + abs(c1)) * (1 + abs(c2)) - 1, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.permutations(range(4)))
def test_l1_invariant_under_relabeling(c1, c2, perm):
    rho = initial_state(CoherencePair(c1, c2)).matrix
    p = np.eye(4)[list(perm)]
    assert l1_coherence(p @ rho @ p.T) == pytest.approx(l1_coherence(rho), abs=1e-14)


def test_l1_zero_iff_diagonal():
    assert l1_coherence(np.diag([0.1, 0.2, 0.3, 0.4])) == 0
    m = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
    m[1, 2] = m[2, 1] = 1e-9
    assert l1_coherence(m) > 0


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_initial_state_is_psd_in_range(c1, c2):
    rho = initial_state(CoherencePair(c1, c2))
    assert rho.min_eigenvalue >= -1e-12


def test_boundary_coherence_has_zero_eigenvalue():
    assert abs(initial_state(CoherencePair(1.0, 0.4)).min_eigenvalue) < 1e-14


def test_reduced_state_of_product():
    rho = initial_state(CoherencePair(0.3, -0.9))
    np.testing.assert_allclose(reduced_state(rho, "A"), single_object_state(0.3), atol=1e-16)
    np.testing.assert_allclose(reduced_state(rho, "B"), single_object_state(-0.9), atol=1e-16)


def test_reduced_state_of_bell_is_mixed():
    np.testing.assert_allclose(reduced_state(bell_state(), "A"), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(reduced_state(bell_state(), "B"), np.eye(2) / 2, atol=1e-15)


def test_reduced_state_of_gravity_output_keeps_populations():
    rho_out = apply_channel(gravity_channel(dimensionless_phases(2.2)), initial_state(CoherencePair(0.7, 0.9)))
    for side in "AB":
        red = reduced_state(rho_out, side)
        np.testing.assert_allclose(np.diag(red), [0.5, 0.5], atol=1e-15)
        assert np.trace(red) == pytest.approx(1)


def test_reduced_state_bad_subsystem():
    with pytest.raises(ValueError):
        reduced_state(bell_state(), "C")
