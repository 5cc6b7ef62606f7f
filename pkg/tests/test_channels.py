import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravwitness.channels import (
    CoefficientMatrix,
    DampingRates,
    apply_channel,
    damped_gravity_channel,
    damping_mask,
    gravity_channel,
    is_separable_channel,
    sample_separable_channel,
    validate_channel,
)
from gravwitness.errors import InvalidChannel, InvalidState
from gravwitness.linalg import IDENTITY2, PAULI_Z
from gravwitness.phases import PhaseSet, dimensionless_phases
from gravwitness.states import CoherencePair, DensityOperator, initial_state

phase = st.floats(-10, 10)


def kraus_dephase(rho, factor_a, factor_b):
    """Independent oracle: local dephasing via Kraus operators sqrt((1+f)/2) 1, sqrt((1-f)/2) Z."""
    out = np.zeros_like(rho)
    terms_a = [((1 + factor_a) / 2, IDENTITY2), ((1 - factor_a) / 2, PAULI_Z)]
    terms_b = [((1 + factor_b) / 2, IDENTITY2), ((1 - factor_b) / 2, PAULI_Z)]
    for pa, op_a in terms_a:
        for pb, op_b in terms_b:
            k = math.sqrt(pa * pb) * np.kron(op_a, op_b)
            out = out + k @ rho @ k.conj().T
    return out


def test_gravity_channel_equals_unitary_conjugation():
    p = PhaseSet(0.3, -1.2, 2.5, 0.7)
    u = np.diag(np.exp(1j * p.as_array()))
    rho = initial_state(CoherencePair(0.8, -0.4))
    out = apply_channel(gravity_channel(p), rho)
    np.testing.assert_allclose(out.matrix, u @ rho.matrix @ u.conj().T, atol=1e-15)
    assert out.basis == "out"


def test_gravity_channel_is_rank_one():
    values = np.linalg.eigvalsh(gravity_channel(PhaseSet(0.1, 0.2, 0.9, 1.7)).matrix)
    np.testing.assert_allclose(values, [0, 0, 0, 4], atol=1e-14)


def test_damped_channel_matches_kraus_oracle():
    p = PhaseSet(0.3, -1.2, 2.5, 0.7)
    d = DampingRates(0.4, 1.1, 0.9)
    u = np.diag(np.exp(1j * p.as_array()))
    rho = initial_state(CoherencePair(1.0, 0.6)).matrix
    oracle = kraus_dephase(u @ rho @ u.conj().T, d.factor_A, d.factor_B)
    out = apply_channel(damped_gravity_channel(p, d), initial_state(CoherencePair(1.0, 0.6)))
    np.testing.assert_allclose(out.matrix, oracle, atol=1e-15)


def test_damping_mask_values():
    m = damping_mask(DampingRates.from_exponents(math.log(2), math.log(4)))
    expected = np.kron([[1, 0.5], [0.5, 1]], [[1, 0.25], [0.25, 1]])
    np.testing.assert_allclose(m, expected, rtol=1e-15)


def test_zero_damping_is_identity_mask():
    np.testing.assert_array_equal(damping_mask(DampingRates(0, 0, 5)), np.ones((4, 4)))


def test_infinite_damping_is_full_dephasing():
    m = damping_mask(DampingRates(800, 800, 1))
    np.testing.assert_allclose(m, np.eye(4), atol=1e-300)


def test_damping_rejects_negative():
    with pytest.raises(ValueError):
        DampingRates(-0.1, 0, 1)


def test_identity_channel_is_all_ones():
    assert validate_channel(np.ones((4, 4))).valid
    rho = initial_state(CoherencePair(0.5, 0.5))
    out = apply_channel(CoefficientMatrix(np.ones((4, 4))), rho)
    np.testing.assert_array_equal(out.matrix, rho.matrix)


def test_validate_catches_each_defect():
    bad_diag = np.eye(4) * 0.9
    assert validate_channel(bad_diag).max_diagonal_error == pytest.approx(0.1)
    assert not validate_channel(bad_diag)
    not_psd = np.ones((4, 4))
    not_psd[0, 3] = not_psd[3, 0] = -1
    report = validate_channel(not_psd)
    assert report.min_eigenvalue < -0.1 and not report.valid
    non_herm = np.eye(4, dtype=complex)
    non_herm[0, 1] = 0.5j
    report = validate_channel(non_herm)
    assert report.hermiticity_error > 0 and report.min_eigenvalue == -math.inf
    with pytest.raises(InvalidChannel):
        CoefficientMatrix(not_psd)


def test_apply_requires_in_basis():
    rho = initial_state(CoherencePair(1, 1))
    out = apply_channel(gravity_channel(dimensionless_phases(1.0)), rho)
    with pytest.raises(InvalidState):
        apply_channel(gravity_channel(dimensionless_phases(1.0)), out)


def test_separable_sampler_is_reproducible():
    a = sample_separable_channel(42).matrix
    b = sample_separable_channel(42).matrix
    c = sample_separable_channel(43).matrix
    np.testing.assert_array_equal(a, b)
    assert np.max(np.abs(a - c)) > 1e-3
    np.testing.assert_array_equal(sample_separable_channel([0, 5]).matrix, sample_separable_channel((0, 5)).matrix)


def test_separable_samples_are_ppt():
    for i in range(200):
        e = sample_separable_channel([7, i], mixtures=1 + i % 5)
        assert is_separable_channel(e).separable


def test_gravity_entangling_iff_phase_nonzero():
    assert is_separable_channel(gravity_channel(dimensionless_phases(0.0))).separable
    report = is_separable_channel(gravity_channel(dimensionless_phases(1.0)))
    assert not report.separable and report.entangling
    # -2 sin(dphi/2) with dphi = 2/3
    assert report.min_eigenvalue == pytest.approx(-2 * math.sin(1 / 3), abs=1e-12)


def test_local_phases_are_separable():
    # dphi = 0 with nonzero individual phases: product of local unitaries
    p = PhaseSet(0.4, 1.1, -0.3, 0.4)
    assert p.entangling_phase == pytest.approx(0, abs=1e-15)
    assert is_separable_channel(gravity_channel(p)).separable


@settings(max_examples=100, deadline=None)
@given(phase, phase, phase, phase, st.floats(0, 5), st.floats(0, 5))
def test_damped_channel_always_valid(a, b, c, d, ga, gb):
    e = damped_gravity_channel(PhaseSet(a, b, c, d), DampingRates.from_exponents(ga, gb))
    assert validate_channel(e.matrix).valid


@settings(max_examples=100, deadline=None)
@given(phase, phase, phase, phase, st.floats(0, 5), st.floats(0, 5), st.floats(-1, 1), st.floats(-1, 1))
def test_output_preserves_populations(a, b, c, d, ga, gb, c1, c2):
    rho = initial_state(CoherencePair(c1, c2))
    out = apply_channel(damped_gravity_channel(PhaseSet(a, b, c, d), DampingRates.from_exponents(ga, gb)), rho)
    np.testing.assert_allclose(np.diag(out.matrix).real, np.diag(rho.matrix).real, atol=1e-15)
    assert abs(np.trace(out.matrix) - 1) <= 1e-12
    assert isinstance(out, DensityOperator)
