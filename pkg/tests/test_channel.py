import numpy as np
import pytest

from aic import ChannelInstance, feedback, snr_of, transmit


def test_invalid_construction():
    with pytest.raises(ValueError):
        ChannelInstance(kind="cable", noise_var=1.0)
    with pytest.raises(ValueError):
        ChannelInstance(kind="awgn", noise_var=0.0)


def test_awgn_reproducible_and_additive():
    ch = ChannelInstance(kind="awgn", noise_var=0.25, seed=42)
    s = np.array([1 + 1j, -1 - 1j, 0.5 + 0j])
    y1 = transmit(s, ch, 0)
    y2 = transmit(s, ch, 0)
    np.testing.assert_array_equal(y1, y2)
    assert not np.allclose(y1, transmit(s, ch, 1))


def test_awgn_near_noiseless_limit():
    ch = ChannelInstance(kind="awgn", noise_var=1e-18, seed=3)
    s = np.array([1 + 0j, -1 + 0j])
    np.testing.assert_allclose(transmit(s, ch, 0), s, atol=1e-8)


def test_awgn_noise_variance_moment():
    ch = ChannelInstance(kind="awgn", noise_var=0.6, seed=11)
    s = np.zeros(1_000_000, dtype=complex)
    y = transmit(s, ch, 0)
    var = np.mean(np.abs(y) ** 2)
    assert abs(var - 0.6) / 0.6 < 0.01
    # even split between the rails
    assert abs(np.var(y.real) - 0.3) / 0.3 < 0.02
    assert abs(np.var(y.imag) - 0.3) / 0.3 < 0.02


def test_qsrf_unit_mean_square_fading():
    hs = np.array([
        ChannelInstance(kind="qsrf", noise_var=1.0, seed=s).fading(0)
        for s in range(100_000)
    ])
    assert abs(np.mean(hs ** 2) - 1.0) < 0.01


def test_qsrf_fading_constant_within_iteration():
    ch = ChannelInstance(kind="qsrf", noise_var=1e-18, seed=7)
    h = ch.fading(4)
    s = np.ones(8, dtype=complex)
    # near-noiseless output reveals the draw used inside transmit
    np.testing.assert_allclose(transmit(s, ch, 4), h * s, atol=1e-7)
    assert ch.fading(4) == h


def test_qsrf_per_iteration_independence():
    hs = np.array([
        [ChannelInstance(kind="qsrf", noise_var=1.0, seed=s).fading(i) for i in (0, 1)]
        for s in range(10_000)
    ])
    corr = np.corrcoef(hs[:, 0], hs[:, 1])[0, 1]
    assert abs(corr) < 0.03


def test_snr_of():
    assert snr_of(ChannelInstance(kind="awgn", noise_var=1.0), 0) == 1.0
    snr_db = 10 * np.log10(snr_of(ChannelInstance(kind="awgn", noise_var=0.631), 0))
    assert abs(snr_db - 2.0) < 0.01
    ch = ChannelInstance(kind="qsrf", noise_var=0.5, seed=9)
    assert abs(snr_of(ch, 2) - ch.fading(2) ** 2 / 0.5) < 1e-12
    mean_snr = np.mean([
        snr_of(ChannelInstance(kind="qsrf", noise_var=0.5, seed=s), 0)
        for s in range(20_000)
    ])
    assert abs(mean_snr - 2.0) / 2.0 < 0.02


def test_feedback_is_identity():
    for z in (np.array([0, 1, -2]), np.array([5]), np.arange(-3, 4)):
        np.testing.assert_array_equal(feedback(z), z)
