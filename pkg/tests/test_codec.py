import json

import numpy as np
import pytest

from aic import (
    ChannelInstance,
    DmcModel,
    EncoderConfig,
    ThresholdVector,
    binary_entropy,
    codebooks_for,
    decode,
    encode_iteration,
    encode_message,
    error_vector,
    hard_decisions,
    make_dmc,
    make_scheme,
    optimize_thresholds,
    source_encode,
)


def micro_cfg(theta0=0.5, pi1=0.2, H=2, K=4, d_max=None):
    """Tiny hand-checkable configuration: R=1 with a nonzero erasure band."""
    theta = ThresholdVector(np.array([theta0]))
    p_uv = np.array([[0.16, 0.2, 0.64], [0.64, 0.2, 0.16]])
    dmc = DmcModel(
        theta=theta,
        p_uv=p_uv,
        rho=np.array([0.2, 0.8]),
        pi=np.array([0.5, pi1]),
        alpha=0.2 + 0.8 * binary_entropy(pi1),
    )
    return EncoderConfig(scheme=make_scheme("qpsk"), dmc=dmc, H=H, K=K, d_max=d_max)


@pytest.fixture(scope="module")
def link_cfg(grid_r2_models):
    return EncoderConfig(scheme=make_scheme("qpsk"), dmc=grid_r2_models[0.0], H=8, K=54)


def test_hard_decisions_and_error_vector():
    z = np.array([2, -1, 1, -2])
    x = np.array([0, 1, 1, 0], dtype=np.uint8)
    np.testing.assert_array_equal(hard_decisions(z), [0, 1, 0, 1])
    np.testing.assert_array_equal(error_vector(x, z), [0, 0, 1, 1])
    # erased positions never report an error bit
    np.testing.assert_array_equal(
        error_vector(np.array([1, 0], np.uint8), np.array([0, 1])), [0, 0]
    )


def test_hand_worked_two_iteration_decode():
    # iteration 0: message (0,0,1,1), receiver gets one sign error at
    # position 2 and one erasure at position 1
    cfg = micro_cfg()
    m = np.array([0, 0, 1, 1], dtype=np.uint8)
    z0 = np.array([1, 0, 1, -1])
    e0 = error_vector(m, z0)
    np.testing.assert_array_equal(e0, [0, 0, 1, 0])
    x1 = source_encode(e0, m, z0, cfg.books)
    # class-1 subvector (0,1,0): segment "01" -> 011, tail "0" -> 1;
    # then the raw erased bit m[1] = 0
    np.testing.assert_array_equal(x1, [0, 1, 1, 1, 0])
    # iteration 1 is clean: correct signs, no erasures
    z1 = np.where(x1 == 0, 1, -1)
    np.testing.assert_array_equal(decode([z0, z1], cfg), m)


def test_decode_single_clean_iteration_is_bit_detection():
    cfg = micro_cfg()
    z0 = np.array([1, -1, -1, 1])
    np.testing.assert_array_equal(decode([z0], cfg), [0, 1, 1, 0])


def test_encoder_config_validation():
    with pytest.raises(ValueError):
        micro_cfg(K=0)
    with pytest.raises(ValueError):
        micro_cfg(H=0)
    with pytest.raises(ValueError):
        micro_cfg(d_max=-1)
    cfg = micro_cfg()
    np.testing.assert_array_equal(cfg.theta.values, cfg.dmc.theta.values)


def test_codebooks_for_degenerate_classes():
    theta = ThresholdVector(np.array([0.0, 2.0]))
    dmc = DmcModel(
        theta=theta,
        p_uv=np.array([[0.0, 0.3, 0.0, 0.2, 0.5], [0.5, 0.2, 0.0, 0.3, 0.0]]),
        rho=np.array([0.0, 0.5, 0.5]),
        pi=np.array([0.5, 0.3, 0.0]),
        alpha=0.5 * binary_entropy(0.3),
    )
    books = codebooks_for(dmc, 4)
    assert books[2] is None and books[1] is not None
    dmc.pi = np.array([0.5, 0.3, 1.0])
    with pytest.raises(ValueError):
        codebooks_for(dmc, 4)


def test_noiseless_round_is_clean(link_cfg):
    m = np.random.default_rng(0).integers(0, 2, 54, dtype=np.uint8)
    ch = ChannelInstance(kind="awgn", noise_var=1e-9, seed=1)
    z, e, x_next, clean = encode_iteration(m, ch, link_cfg, 0)
    assert clean and x_next is None
    assert not e.any()
    assert np.all(np.abs(z) == 2)  # every LLR lands in the top class
    t = encode_message(m, ch, link_cfg)
    assert t.status == "ack" and t.D == 0 and t.n_total == 54
    np.testing.assert_array_equal(t.m_hat, m)


def test_all_erased_round_retransmits_raw():
    # enormous theta_0 turns every position into an erasure; the update word
    # is then exactly the previous word and the round cannot be clean
    cfg = micro_cfg(theta0=1e15, K=6)
    m = np.array([1, 0, 1, 1, 0, 0], dtype=np.uint8)
    ch = ChannelInstance(kind="awgn", noise_var=1e-9, seed=2)
    z, e, x_next, clean = encode_iteration(m, ch, cfg, 0)
    assert not clean
    assert np.all(z == 0) and not e.any()
    np.testing.assert_array_equal(x_next, m)


def test_transcript_invariants(link_cfg):
    rng = np.random.default_rng(1)
    m = rng.integers(0, 2, 54, dtype=np.uint8)
    ch = ChannelInstance(kind="awgn", noise_var=1.0, seed=7)
    t = encode_message(m, ch, link_cfg)
    assert t.records[0].n_bits == 54  # N_0 = K
    for rec in t.records:
        assert rec.z.size == rec.n_bits
        assert rec.n_signals == -(-rec.n_bits // 2)
    assert t.n_total == sum(r.n_bits for r in t.records)
    assert t.status == "ack" and t.D == len(t.records) - 1
    doc = json.loads(json.dumps(t.to_trace_dict()))
    assert doc["N"] == t.n_total and doc["N_i"][0] == 54
    assert doc["m"] == "".join(map(str, m.tolist()))
    assert doc["m_hat"] == doc["m"] == "".join(map(str, t.m_hat.tolist()))


def test_ack_decode_exact_over_trials(link_cfg):
    rng = np.random.default_rng(3)
    for trial in range(200):
        m = rng.integers(0, 2, 54, dtype=np.uint8)
        ch = ChannelInstance(kind="awgn", noise_var=1.0, seed=trial)
        t = encode_message(m, ch, link_cfg)
        assert t.status == "ack"
        np.testing.assert_array_equal(t.m_hat, m)


def test_qsrf_round_trips(grid_r2_models):
    cfg = EncoderConfig(scheme=make_scheme("qpsk"), dmc=grid_r2_models[4.0], H=8, K=40)
    rng = np.random.default_rng(4)
    for trial in range(50):
        m = rng.integers(0, 2, 40, dtype=np.uint8)
        ch = ChannelInstance(kind="qsrf", noise_var=10 ** -0.4, seed=trial)
        t = encode_message(m, ch, cfg)
        assert t.status == "ack"
        np.testing.assert_array_equal(t.m_hat, m)
        assert {rec.h for rec in t.records} != {1.0}


def test_nack_on_exhausted_iterations(grid_r2_models):
    cfg = EncoderConfig(scheme=make_scheme("qpsk"), dmc=grid_r2_models[0.0], H=8,
                        K=54, d_max=0)
    m = np.random.default_rng(5).integers(0, 2, 54, dtype=np.uint8)
    ch = ChannelInstance(kind="awgn", noise_var=1.0, seed=11)
    t = encode_message(m, ch, cfg)
    assert t.status == "nack" and t.m_hat is None and t.D is None
    assert len(t.records) == 1 and t.n_total == 54


def test_d_max_bounds_record_count(grid_r2_models):
    cfg = EncoderConfig(scheme=make_scheme("qpsk"), dmc=grid_r2_models[0.0], H=8,
                        K=54, d_max=2)
    rng = np.random.default_rng(6)
    for trial in range(30):
        m = rng.integers(0, 2, 54, dtype=np.uint8)
        ch = ChannelInstance(kind="awgn", noise_var=1.0, seed=trial)
        t = encode_message(m, ch, cfg)
        assert len(t.records) <= 3
        if t.status == "ack":
            np.testing.assert_array_equal(t.m_hat, m)


def test_message_length_must_match_k(link_cfg):
    ch = ChannelInstance(kind="awgn", noise_var=1.0, seed=0)
    with pytest.raises(ValueError):
        encode_message(np.zeros(10, np.uint8), ch, link_cfg)


def test_length_recursion_matches_alpha(grid_r2_models):
    # E[N_i] = alpha * E[N_{i-1}] for the first two updates at 0 dB, K=128
    dmc = grid_r2_models[0.0]
    cfg = EncoderConfig(scheme=make_scheme("qpsk"), dmc=dmc, H=8, K=128)
    rng = np.random.default_rng(8)
    n1, n2 = [], []
    for trial in range(10_000):
        m = rng.integers(0, 2, 128, dtype=np.uint8)
        ch = ChannelInstance(kind="awgn", noise_var=1.0, seed=trial)
        _, _, x1, clean = encode_iteration(m, ch, cfg, 0)
        if clean:
            continue
        n1.append(x1.size)
        _, _, x2, clean = encode_iteration(x1, ch, cfg, 1)
        if not clean:
            n2.append(x2.size)
    r1 = np.mean(n1) / 128
    r2 = np.mean(n2) / np.mean(n1)
    assert abs(r1 - dmc.alpha) / dmc.alpha < 0.05
    assert abs(r2 - dmc.alpha) / dmc.alpha < 0.05
