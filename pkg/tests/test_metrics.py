"""Rate metric tests: direct evaluation, closed forms, bounds, scaling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantmimo import (
    ArrayGeometry,
    ChannelParams,
    MiContext,
    dft_matrix,
    equal_gain_channel,
    general_upper_bound,
    generate_channel,
    haar_semi_unitary,
    make_adc_model,
    mutual_information,
    optimal_mi_equal_gains,
    optimal_two_stage_combiner,
    scaling_slope,
    singular_profile,
    svd_upper_bound,
    two_stage_rate_closed_form,
)

# Single-antenna, single-user hand computation: h = w = 1, snr = 1, b = 2.
# D = alpha^2 + alpha*beta*(snr + 1); rate = log2(1 + snr*alpha^2/D).
HAND_MI = 0.8397251685914069

# n_u * log2(1 + alpha*g*N_RF/(g*n_u*beta + N_RF/snr)) at
# n_u=2, N_RF=4, g=4, snr=1, b=2.
HAND_EQUAL_GAIN_MI = 3.8959303446505285

SVD_BOUND_8_B2 = 24.714138704776698
GENERAL_BOUND_8_64_B2 = 47.46199010823636

B2 = make_adc_model(2)


def _random_channel(rng, n_r=16, n_u=2, mean_paths=3.0):
    params = ChannelParams(
        n_users=n_u, mean_paths=mean_paths, geometry=ArrayGeometry(n_r)
    )
    return generate_channel(params, rng)


def test_mi_context_validation():
    with pytest.raises(ValueError):
        MiContext(snr=-1.0, adc=B2)
    with pytest.raises(ValueError):
        MiContext(snr=1.0, adc=B2, kappa=1.5)


def test_mutual_information_hand_value():
    h = np.ones((1, 1), dtype=complex)
    w = np.ones((1, 1), dtype=complex)
    mi = mutual_information(h, w, MiContext(snr=1.0, adc=B2))
    assert mi == pytest.approx(HAND_MI, abs=1e-12)


def test_mutual_information_zero_snr_is_zero():
    rng = np.random.default_rng(1)
    channel = _random_channel(rng)
    w = haar_semi_unitary(16, 4, rng)
    assert mutual_information(channel, w, MiContext(snr=0.0, adc=B2)) == 0.0


def test_mutual_information_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        mutual_information(
            np.ones((4, 2), dtype=complex),
            np.ones((5, 2), dtype=complex),
            MiContext(snr=1.0, adc=B2),
        )


def test_mutual_information_rejects_singular_noise():
    # a zero combiner column makes the noise covariance singular
    h = np.ones((4, 2), dtype=complex)
    w = np.zeros((4, 2), dtype=complex)
    w[:, 0] = 0.5
    with pytest.raises(np.linalg.LinAlgError):
        mutual_information(h, w, MiContext(snr=1.0, adc=B2))


@pytest.mark.parametrize("bits", [1, 2, 3])
@pytest.mark.parametrize("snr", [0.1, 1.0, 10.0])
def test_closed_form_matches_direct_evaluation(bits, snr):
    rng = np.random.default_rng(17)
    ctx = MiContext(snr=snr, adc=make_adc_model(bits))
    for _ in range(20):
        channel = _random_channel(rng, n_r=16, n_u=2)
        combiner = optimal_two_stage_combiner(channel, 8, 2)
        direct = mutual_information(channel, combiner, ctx)
        closed = two_stage_rate_closed_form(singular_profile(channel, 8), ctx)
        assert direct == pytest.approx(closed, abs=1e-8)


@pytest.mark.parametrize("shape", [(32, 4, 8), (64, 3, 16), (24, 2, 24)])
def test_closed_form_matches_across_shapes(shape):
    n_r, n_u, n_rf = shape
    rng = np.random.default_rng(19)
    ctx = MiContext(snr=2.0, adc=B2)
    channel = _random_channel(rng, n_r=n_r, n_u=n_u)
    combiner = optimal_two_stage_combiner(channel, n_rf, n_u)
    direct = mutual_information(channel, combiner, ctx)
    closed = two_stage_rate_closed_form(singular_profile(channel, n_rf), ctx)
    assert direct == pytest.approx(closed, abs=1e-8)


def test_closed_form_monotone_in_snr():
    rng = np.random.default_rng(23)
    channel = _random_channel(rng)
    profile = singular_profile(channel, 8)
    rates = [
        two_stage_rate_closed_form(profile, MiContext(snr=s, adc=B2))
        for s in np.logspace(-2, 4, 20)
    ]
    assert np.all(np.diff(rates) > 0)


def test_mi_invariant_under_column_permutation():
    rng = np.random.default_rng(29)
    channel = _random_channel(rng, n_r=16, n_u=3)
    w = haar_semi_unitary(16, 6, rng)
    ctx = MiContext(snr=1.0, adc=B2)
    base = mutual_information(channel, w, ctx)
    perm = rng.permutation(6)
    assert mutual_information(channel, w[:, perm], ctx) == pytest.approx(
        base, abs=1e-10
    )


def test_mi_invariant_under_diagonal_phase_after_spreading():
    # W1*F and W1*F*diag(phases) share per-chain powers, hence the same rate
    rng = np.random.default_rng(31)
    channel = _random_channel(rng, n_r=16, n_u=3)
    w1 = haar_semi_unitary(16, 6, rng)
    f = dft_matrix(6)
    phases = np.exp(2j * np.pi * rng.uniform(size=6))
    ctx = MiContext(snr=1.0, adc=B2)
    assert mutual_information(channel, w1 @ f @ np.diag(phases), ctx) == pytest.approx(
        mutual_information(channel, w1 @ f, ctx), abs=1e-10
    )


def test_spreading_equalizes_chain_powers():
    rng = np.random.default_rng(37)
    channel = _random_channel(rng, n_r=32, n_u=3)
    combiner = optimal_two_stage_combiner(channel, 8, 3)
    s = combiner.effective.conj().T @ channel.h
    powers = np.sum(np.abs(s) ** 2, axis=1)
    np.testing.assert_allclose(powers, powers[0], rtol=1e-8)


def test_equal_gain_closed_form_hand_value():
    ctx = MiContext(snr=1.0, adc=B2)
    assert optimal_mi_equal_gains(2, 4, 4.0, ctx) == pytest.approx(
        HAND_EQUAL_GAIN_MI, abs=1e-12
    )


def test_equal_gain_closed_form_edge_cases():
    ctx = MiContext(snr=0.0, adc=B2)
    assert optimal_mi_equal_gains(2, 4, 1.0, ctx) == 0.0
    ctx = MiContext(snr=1.0, adc=B2)
    assert optimal_mi_equal_gains(2, 4, 0.0, ctx) == 0.0
    with pytest.raises(ValueError):
        optimal_mi_equal_gains(4, 2, 1.0, ctx)
    with pytest.raises(ValueError):
        optimal_mi_equal_gains(2, 4, -1.0, ctx)


def test_two_closed_forms_agree_on_equal_gains():
    # the general profile form reduces to the equal-gain form exactly
    rng = np.random.default_rng(41)
    n_r, n_u, n_rf, gain = 16, 2, 8, 3.0
    channel = equal_gain_channel(n_r, n_u, gain, rng)
    ctx = MiContext(snr=2.0, adc=B2)
    profile = singular_profile(channel, n_rf)
    assert two_stage_rate_closed_form(profile, ctx) == pytest.approx(
        optimal_mi_equal_gains(n_u, n_rf, gain, ctx), abs=1e-10
    )


def test_equal_gain_channel_spectrum():
    rng = np.random.default_rng(43)
    h = equal_gain_channel(16, 3, 2.5, rng)
    eigs = np.linalg.eigvalsh(h.conj().T @ h)
    np.testing.assert_allclose(eigs, 2.5, rtol=1e-10)
    with pytest.raises(ValueError):
        equal_gain_channel(16, 3, -1.0, rng)


def test_optimal_combiner_attains_equal_gain_optimum():
    rng = np.random.default_rng(47)
    ctx = MiContext(snr=1.0, adc=B2)
    channel = equal_gain_channel(16, 2, 4.0, rng)
    combiner = optimal_two_stage_combiner(channel, 4, 2)
    attained = mutual_information(channel, combiner, ctx)
    assert attained == pytest.approx(HAND_EQUAL_GAIN_MI, abs=1e-8)
    for _ in range(50):
        w = haar_semi_unitary(16, 4, rng)
        assert mutual_information(channel, w, ctx) <= attained + 1e-9


def test_bound_values_frozen():
    assert svd_upper_bound(8, B2) == pytest.approx(SVD_BOUND_8_B2, abs=1e-12)
    assert general_upper_bound(8, 64, B2) == pytest.approx(
        GENERAL_BOUND_8_64_B2, abs=1e-12
    )


def test_bound_validation():
    with pytest.raises(ValueError):
        svd_upper_bound(0, B2)
    with pytest.raises(ValueError):
        general_upper_bound(0, 8, B2)
    with pytest.raises(ValueError):
        general_upper_bound(2, 0, B2)


def test_bounds_increase_with_resolution():
    caps = [svd_upper_bound(4, make_adc_model(b)) for b in range(1, 9)]
    assert np.all(np.diff(caps) > 0)


@given(
    n_u=st.integers(1, 8),
    n_extra=st.integers(0, 16),
    bits=st.integers(1, 6),
)
@settings(max_examples=60)
def test_general_bound_dominates_svd_bound(n_u, n_extra, bits):
    # at n_rf = n_u the two caps coincide; more chains only raise the general cap
    adc = make_adc_model(bits)
    assert general_upper_bound(n_u, n_u, adc) == pytest.approx(
        svd_upper_bound(n_u, adc), rel=1e-12
    )
    assert general_upper_bound(n_u, n_u + n_extra, adc) >= svd_upper_bound(
        n_u, adc
    ) - 1e-9


def test_rates_respect_general_bound():
    rng = np.random.default_rng(53)
    ctx = MiContext(snr=10.0, adc=B2)
    cap = general_upper_bound(3, 8, B2)
    for _ in range(100):
        channel = _random_channel(rng, n_r=32, n_u=3)
        w = haar_semi_unitary(32, 8, rng)
        assert mutual_information(channel, w, ctx) <= cap + 1e-9


def test_scaling_slope_recovers_synthetic_line():
    points = {n: 1.7 + 3.2 * np.log2(n) for n in (16, 32, 64, 128)}
    assert scaling_slope(points) == pytest.approx(3.2, abs=1e-12)


def test_scaling_slope_needs_three_points():
    with pytest.raises(ValueError):
        scaling_slope({16: 1.0, 32: 2.0})


def test_haar_semi_unitary_properties():
    rng = np.random.default_rng(59)
    w = haar_semi_unitary(16, 5, rng)
    np.testing.assert_allclose(w.conj().T @ w, np.eye(5), atol=1e-12)
    with pytest.raises(ValueError):
        haar_semi_unitary(4, 5, rng)


def test_singular_profile_descending_and_consistent():
    rng = np.random.default_rng(61)
    channel = _random_channel(rng, n_r=16, n_u=4)
    profile = singular_profile(channel, 8)
    assert profile.values.shape == (4,)
    assert np.all(np.diff(profile.values) <= 0)
    eigs = np.sort(np.linalg.eigvalsh(channel.h.conj().T @ channel.h))[::-1]
    np.testing.assert_allclose(profile.values, eigs, rtol=1e-10)
    assert (profile.n_r, profile.n_u, profile.n_rf) == (16, 4, 8)
