import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import poisson

from pascs_qkd.numerics import IntegrationConfig, symmetric_rule
from pascs_qkd.states import (
    FockVector,
    PascsParams,
    SignalLabel,
    TruncationTooSmall,
    coherent_amplitudes,
    displacement_columns,
    fock_coefficients,
    ladder_amplitudes,
    normalization_constant,
    quadrature_pdf,
    wigner_coherent,
    wigner_from_fock,
    wigner_pascs,
    wigner_x_marginal,
)

amplitudes = st.builds(complex, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))


def phase_space_integral(params, half=7.0, nodes=121):
    s, w = symmetric_rule(IntegrationConfig(nodes=nodes), half)
    x = s + params.alpha.real
    y = s + params.alpha.imag
    return float(w @ wigner_pascs(params, x[:, None] + 1j * y[None, :]) @ w)


def test_params_validation():
    with pytest.raises(ValueError):
        PascsParams(-1, 0, 1.0)
    with pytest.raises(ValueError):
        PascsParams(0, 0, complex("nan"))
    p = PascsParams.pascs(0.5)
    assert (p.k, p.l, p.alpha) == (1, 1, 0.5 + 0j)
    assert p.with_alpha(2).alpha == 2


def test_signal_labels():
    assert SignalLabel.PLUS.bit == 1 and SignalLabel.MINUS.bit == 0
    assert SignalLabel.PLUS_I.phase == 1j
    assert SignalLabel.MINUS_I.angle == pytest.approx(math.pi / 2)
    assert SignalLabel.from_bit_basis(0, "vertical") is SignalLabel.MINUS_I
    with pytest.raises(ValueError):
        SignalLabel.from_bit_basis(2, "vertical")


def test_normalization_constant_coherent_is_one():
    assert normalization_constant(PascsParams.coherent(1.3 + 0.2j)) == pytest.approx(1.0)


@given(amplitudes)
def test_normalization_constant_pascs_closed_form(a):
    n2 = abs(a) ** 2
    assert normalization_constant(PascsParams.pascs(a)) == pytest.approx(1 + 3 * n2 + n2**2, rel=1e-12)


@pytest.mark.parametrize("a", [0.3, 1.0, 1.7 - 0.4j])
@pytest.mark.parametrize("kl", [(1, 1), (2, 1), (1, 2), (0, 2), (3, 0)])
def test_normalization_constant_matches_poisson_moment(kl, a):
    # the Laguerre sum against the squared norm of the explicit ladder amplitudes
    k, l = kl
    n = np.arange(200)
    mu = abs(a) ** 2
    ladder = ladder_amplitudes(PascsParams(k, l, a), 150)
    assert normalization_constant(PascsParams(k, l, a)) == pytest.approx(np.sum(np.abs(ladder) ** 2), rel=1e-10)
    if (k, l) == (1, 1):
        oracle = float(np.sum(poisson.pmf(n, mu) * (1 + n) ** 2))
        assert normalization_constant(PascsParams(k, l, a)) == pytest.approx(oracle, rel=1e-12)


def test_vacuum_wigner_peak():
    assert wigner_coherent(0, 0) == pytest.approx(2 / math.pi)
    assert wigner_pascs(PascsParams.coherent(0.0), 0.0) == pytest.approx(2 / math.pi)


@pytest.mark.parametrize("a", [0.0, 0.55, 1.0, 1 + 0.5j])
@pytest.mark.parametrize("kl", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_wigner_normalized(kl, a):
    if kl == (0, 1) and a == 0:
        pytest.skip("a|0> is the zero vector")
    assert phase_space_integral(PascsParams(*kl, a)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("a", [0.55, 1.0, 0.8 - 0.6j])
def test_closed_form_matches_fock_oracle(a):
    params = PascsParams.pascs(a)
    axis = np.linspace(-2.5, 2.5, 11)
    z = axis[:, None] + 1j * axis[None, :]
    np.testing.assert_allclose(wigner_pascs(params, z), wigner_from_fock(fock_coefficients(params), z), atol=1e-12)


def test_pascs_wigner_is_negative_somewhere():
    axis = np.linspace(-3, 3, 121)
    w = wigner_pascs(PascsParams.pascs(1.0), axis[:, None] + 1j * axis[None, :])
    assert w.min() < 0
    w_coh = wigner_pascs(PascsParams.coherent(1.5), axis[:, None] + 1j * axis[None, :])
    assert w_coh.min() >= 0


@given(amplitudes, amplitudes, st.floats(0, 2 * math.pi))
def test_wigner_phase_covariance(a, z, phi):
    rot = cmath.exp(1j * phi)
    p = PascsParams.pascs(a)
    assert wigner_pascs(p.with_alpha(a * rot), z * rot) == pytest.approx(wigner_pascs(p, z), rel=1e-9, abs=1e-12)


@given(amplitudes, amplitudes)
def test_wigner_point_reflection(a, z):
    p = PascsParams.pascs(a)
    assert wigner_pascs(p.with_alpha(-a), -z) == pytest.approx(wigner_pascs(p, z), rel=1e-9, abs=1e-12)


def test_marginal_closed_form_real_alpha():
    a = 0.8
    x = np.linspace(-2, 3, 26)
    n = 1 + 3 * a**2 + a**4
    expected = (1 - a**2 + 2 * a * x) ** 2 * math.sqrt(2 / math.pi) * np.exp(-2 * (x - a) ** 2) / n
    np.testing.assert_allclose(wigner_x_marginal(PascsParams.pascs(a), x), expected, atol=1e-13)


@pytest.mark.parametrize("a", [0.55, 1.2 + 0.7j])
def test_marginal_matches_quadrature_pdf(a):
    params = PascsParams.pascs(a)
    x = np.linspace(-3, 3, 31)
    np.testing.assert_allclose(wigner_x_marginal(params, x), quadrature_pdf(fock_coefficients(params), 0.0, x), atol=1e-12)


def test_vertical_quadrature_is_rotated_horizontal():
    a = 0.9
    x = np.linspace(-3, 3, 31)
    vertical = quadrature_pdf(fock_coefficients(PascsParams.pascs(1j * a)), math.pi / 2, x)
    horizontal = quadrature_pdf(fock_coefficients(PascsParams.pascs(a)), 0.0, x)
    np.testing.assert_allclose(vertical, horizontal, atol=1e-12)


def test_fock_vector_properties():
    a = 1.1
    state = fock_coefficients(PascsParams.coherent(a))
    assert state.mean_photon_number() == pytest.approx(a * a, rel=1e-10)
    assert np.sum(np.abs(state.coeffs) ** 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        FockVector(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        state.coeffs[0] = 0


def test_pascs_mean_photon_number_oracle():
    # <n> of the PASCS equals E[n (1+n)^2] / E[(1+n)^2] under the Poisson weights
    a = 0.7
    n = np.arange(200)
    w = poisson.pmf(n, a * a) * (1 + n) ** 2
    expected = float(np.sum(n * w) / np.sum(w))
    assert fock_coefficients(PascsParams.pascs(a)).mean_photon_number() == pytest.approx(expected, rel=1e-10)


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        fock_coefficients(PascsParams.pascs(2.0), truncation=5)


def test_displacement_is_unitary_on_low_block():
    d = displacement_columns(0.7 - 0.3j, 10, 80)
    np.testing.assert_allclose(d.conj().T @ d, np.eye(10), atol=1e-12)
    np.testing.assert_allclose(d[:, 0], coherent_amplitudes(0.7 - 0.3j, 80))


def test_annihilated_vacuum_is_rejected():
    with pytest.raises(ValueError, match="zero vector"):
        wigner_pascs(PascsParams(0, 1, 0.0), 0.0)
