import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.stats import norm

from pascs_qkd.beamsplitter_attack import ZeroAcceptance
from pascs_qkd.intercept_resend import (
    DELTA_TARGET,
    DecisionRegion,
    eve_success,
    intrinsic_error_rate,
    ir_curves,
    joint_prob_ir,
    joint_prob_ir_direct,
    lossless_acceptance,
    ml_agreement,
    optimize_alpha,
    sector_success,
)
from pascs_qkd.numerics import IntegrationConfig, NoSignChange, symmetric_rule
from pascs_qkd.states import PascsParams, SignalLabel

coords = st.floats(-3, 3)


@given(coords, coords)
def test_regions_partition_plane(b, e):
    hits = sum(bool(DecisionRegion(lab).contains(b, e)) for lab in SignalLabel)
    if abs(abs(b) - abs(e)) > 1e-12:
        assert hits == 1


def test_region_boundaries_follow_inequalities():
    assert DecisionRegion(SignalLabel.PLUS).contains(1.0, 1.0)
    assert not DecisionRegion(SignalLabel.MINUS_I).contains(1.0, 1.0)
    assert DecisionRegion(SignalLabel.MINUS).contains(-1.0, -1.0)
    assert not DecisionRegion(SignalLabel.PLUS_I).contains(-1.0, -1.0)


def test_coherent_plus_is_product_of_gaussians():
    a = 1.2
    b = np.linspace(-1, 2.5, 8)
    e = np.linspace(-1.5, 1.5, 7)
    got = joint_prob_ir("coherent", a, b[:, None], e[None, :])
    expected = norm.pdf(b, a / math.sqrt(2), 0.5)[:, None] * norm.pdf(e, 0.0, 0.5)[None, :]
    np.testing.assert_allclose(got, expected, atol=1e-12)


@pytest.mark.parametrize("family", ["pascs", "coherent"])
def test_smoothing_matches_direct_quadrature(family):
    params = PascsParams.pascs(0.9) if family == "pascs" else PascsParams.coherent(0.9)
    for b, e in [(0.6, -0.1), (-0.4, 0.8), (1.1, 0.3)]:
        assert joint_prob_ir(family, 0.9, b, e) == pytest.approx(joint_prob_ir_direct(params, b, e), abs=1e-12)


@given(coords, coords)
@settings(max_examples=30, deadline=None)
def test_quarter_turn_maps_plus_onto_plus_i(x, y):
    # the reflected port carries -r * amplitude, so +i*a lands at negative eps_i
    a = 0.8
    plus_i = joint_prob_ir("pascs", a, x, y, SignalLabel.PLUS_I)
    plus = joint_prob_ir("pascs", a, -y, x, SignalLabel.PLUS)
    assert plus_i == pytest.approx(plus, abs=1e-9)


@pytest.mark.parametrize("label", list(SignalLabel))
def test_each_signal_density_normalized(label):
    cfg = IntegrationConfig()
    s, w = symmetric_rule(cfg, cfg.width(1.0))
    dens = joint_prob_ir("pascs", 1.0, s[:, None], s[None, :], label)
    assert w @ dens @ w == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("family", ["pascs", "coherent"])
def test_sectors_partition_probability(family):
    es = eve_success(family, 0.9)
    assert es.region_total == pytest.approx(1.0, abs=1e-10)
    assert 0.25 <= es.p_corr <= 1.0


def test_relabeling_symmetry():
    rates = [sector_success("pascs", 0.7, lab) for lab in SignalLabel]
    assert max(rates) - min(rates) < 1e-10


@pytest.mark.parametrize("family", ["pascs", "coherent"])
def test_sector_rule_is_maximum_likelihood(family):
    assert ml_agreement(family, 0.8) >= 0.999
    es = eve_success(family, 0.8)
    assert es.p_corr_ml == pytest.approx(es.p_corr, abs=1e-4)


def test_small_amplitude_is_a_blind_guess():
    assert eve_success("coherent", 1e-4).p_corr_ml == pytest.approx(0.25, abs=1e-3)


def test_large_coherent_amplitude_is_identified():
    # the residual error is Eve's own vacuum noise: four Gaussians of variance 1/4 at distance 3/sqrt(2)
    rates = [eve_success("coherent", a).p_corr for a in (3.0, 4.0, 5.0)]
    assert rates[0] > 0.997 and rates[2] == pytest.approx(1.0, abs=1e-6)
    assert rates[0] < rates[1] < rates[2] <= 1.0


def test_doubled_sector_mass_is_audited():
    es = eve_success("coherent", 1.0)
    assert es.p_corr_doubled == pytest.approx(2 * es.p_corr)
    assert es.audit_ok is False
    # near alpha = 0 each wedge holds 1/4, so the doubled value is 1/2 and passes the audit
    assert eve_success("coherent", 1e-3).audit_ok is True


def test_intrinsic_error_coherent_reference():
    assert intrinsic_error_rate("coherent", 1.0, 0.0) == pytest.approx(norm.cdf(0, 1, 0.5), abs=1e-10)
    assert intrinsic_error_rate("coherent", 1.0, 0.0) == pytest.approx(0.02275, abs=1e-5)


def test_coherent_intrinsic_error_decreasing_in_alpha():
    deltas = [intrinsic_error_rate("coherent", a, 0.5) for a in np.arange(0.2, 2.6, 0.2)]
    assert all(x > y for x, y in zip(deltas, deltas[1:]))


def test_pascs_intrinsic_error_is_not_monotone():
    # the zero of (1 - a^2 + 2 a x)^2 passes through the rejected band near a = 0.6
    assert intrinsic_error_rate("pascs", 0.6, 0.5) < intrinsic_error_rate("pascs", 0.8, 0.5)


def test_optimize_alpha_takes_first_crossing():
    a = optimize_alpha("pascs", 0.0)
    assert intrinsic_error_rate("pascs", a, 0.0) == pytest.approx(DELTA_TARGET, rel=1e-3)
    assert all(intrinsic_error_rate("pascs", x, 0.0) > DELTA_TARGET for x in np.linspace(0.05, a - 1e-3, 40))


def test_intrinsic_error_needs_accepted_bits():
    with pytest.raises(ZeroAcceptance):
        intrinsic_error_rate("coherent", 0.1, 20.0)


def test_optimize_alpha_inverts_error_rate():
    assert optimize_alpha("coherent", 0.0, norm.cdf(0, 1, 0.5)) == pytest.approx(1.0, abs=2e-5)
    a = optimize_alpha("pascs", 0.5)
    assert intrinsic_error_rate("pascs", a, 0.5) == pytest.approx(DELTA_TARGET, rel=1e-3)
    with pytest.raises(NoSignChange):
        optimize_alpha("coherent", 0.0, 0.3, bracket=(2.0, 5.0))
    with pytest.raises(ValueError):
        optimize_alpha("coherent", 0.0, 0.6)


@pytest.mark.parametrize("family", ["pascs", "coherent"])
def test_optimal_alpha_decreases_with_threshold(family):
    alphas = [optimize_alpha(family, b) for b in (0.0, 0.5, 1.0, 1.5)]
    assert all(x > y for x, y in zip(alphas, alphas[1:]))


def test_lossless_acceptance_limits():
    assert lossless_acceptance("coherent", 1.0, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert lossless_acceptance("pascs", 1.0, 20.0) == 0.0


def test_ir_curves_single_point_and_flag():
    (pt,) = ir_curves("pascs", [0.3])
    assert pt.beta_c == 0.3 and pt.flag == ""
    assert 0.25 <= pt.p_corr <= 1.0
    (bad,) = ir_curves("coherent", [0.0], delta_target=0.49)
    assert bad.flag.startswith("no-sign-change")
    assert math.isnan(bad.alpha_opt)


@pytest.mark.parametrize("a", [0.5, 1.5, 3.0])
def test_coherent_wedge_mass_matches_gaussian_oracle(a):
    m = a / math.sqrt(2)
    oracle = quad(lambda b: norm.pdf(b, m, 0.5) * (norm.cdf(b, 0, 0.5) - norm.cdf(-b, 0, 0.5)), 0, 20, epsabs=1e-13)[0]
    assert eve_success("coherent", a).p_corr == pytest.approx(oracle, abs=1e-10)
