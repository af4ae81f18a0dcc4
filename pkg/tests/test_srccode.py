from fractions import Fraction

import numpy as np
import pytest

from aic import (
    binary_entropy,
    build_codebook,
    combine,
    decode_subvector,
    encode_subvector,
    source_decode,
    source_encode,
    split,
)
from aic.srccode import _tail_lengths


def codes_as_strings(book, length=None):
    t = book.tables[book.H if length is None else length]
    return ["".join(map(str, c.tolist())) for c in t.codes]


def test_known_small_codebook_hand_computed():
    # pi=0.2, H=2: segment probs (.64, .16, .16, .04); the deterministic
    # tie-break fixes the tree exactly as derived by hand
    book = build_codebook(0.2, 2)
    assert codes_as_strings(book) == ["1", "011", "00", "010"]
    assert codes_as_strings(book, 1) == ["1", "0"]
    assert abs(book.expected_code_length() - 1.56) < 1e-12


def test_uniform_source_no_compression():
    book = build_codebook(0.5, 3)
    assert all(len(c) == 3 for c in codes_as_strings(book))


def test_expected_length_window():
    book = build_codebook(0.11, 8)
    ratio = book.expected_code_length() / 8
    assert 0.4999 <= ratio <= 0.6249


@pytest.mark.parametrize("pi,H", [(0.2, 2), (0.11, 8), (0.05, 8), (0.4, 5), (0.01, 12)])
def test_kraft_equality_exact(pi, H):
    assert build_codebook(pi, H).kraft_sum() == Fraction(1)


@pytest.mark.parametrize("pi,H", [(0.17, 4), (0.11, 8), (0.45, 3)])
def test_prefix_free(pi, H):
    book = build_codebook(pi, H)
    for length in book.tables:
        cs = sorted(codes_as_strings(book, length))
        for a, b in zip(cs, cs[1:]):
            assert not b.startswith(a)


@pytest.mark.parametrize("pi,H", [(0.3, 4), (0.11, 8), (0.02, 8), (0.49, 6)])
def test_huffman_bound(pi, H):
    book = build_codebook(pi, H)
    for length in book.tables:
        el = book.expected_code_length(length)
        lo = length * binary_entropy(pi)
        assert lo <= el < lo + 1


def test_degenerate_sources_rejected():
    for pi in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(ValueError):
            build_codebook(pi, 8)
    with pytest.raises(ValueError):
        build_codebook(0.2, 0)


def test_tail_length_grid():
    assert _tail_lengths(8) == [1, 2, 4, 8]
    assert _tail_lengths(12) == [1, 2, 4, 8, 12]
    assert _tail_lengths(1) == [1]
    book = build_codebook(0.1, 8)
    assert [book.tail_length(r) for r in range(1, 8)] == [1, 2, 4, 4, 8, 8, 8]


def test_encode_empty_and_all_zero():
    book = build_codebook(0.05, 8)
    assert encode_subvector(np.array([], dtype=np.uint8), book).size == 0
    coded = encode_subvector(np.zeros(8, dtype=np.uint8), book)
    shortest = min(len(c) for c in book.tables[8].codes)
    assert coded.size == shortest  # the all-zero segment is the most probable


def test_subvector_round_trip_every_remainder():
    rng = np.random.default_rng(2)
    book = build_codebook(0.13, 8)
    for n in range(0, 26):
        sub = rng.integers(0, 2, n, dtype=np.uint8)
        coded = encode_subvector(sub, book)
        bits, used = decode_subvector(coded, n, book)
        np.testing.assert_array_equal(bits, sub)
        assert used == coded.size


def test_decode_truncated_stream_raises():
    book = build_codebook(0.13, 8)
    coded = encode_subvector(np.ones(8, dtype=np.uint8), book)
    with pytest.raises(ValueError, match="exhausted"):
        decode_subvector(coded[:-1], 8, book)


def test_codebook_determinism():
    a, b = build_codebook(0.11, 8), build_codebook(0.11, 8)
    for length in a.tables:
        for ca, cb in zip(a.tables[length].codes, b.tables[length].codes):
            np.testing.assert_array_equal(ca, cb)
    assert a.dump() == b.dump()


def test_dump_lists_every_segment():
    book = build_codebook(0.2, 2)
    lines = book.dump().splitlines()
    assert lines[0] == "pi=0.2 H=2"
    assert "00 -> 1" in lines and "11 -> 010" in lines
    # one line per segment of each table plus headers
    assert len(lines) == 1 + (1 + 2) + (1 + 4)


def test_split_examples():
    e = np.array([0, 0, 1, 1], dtype=np.uint8)
    z = np.array([2, -1, 1, -2])
    subs, idx0 = split(e, z, 2)
    np.testing.assert_array_equal(subs[0], [0, 1])
    np.testing.assert_array_equal(subs[1], [0, 1])
    assert idx0.size == 0
    subs, idx0 = split(e, np.array([1, 1, 1, 1]), 2)
    np.testing.assert_array_equal(subs[0], e)
    assert subs[1].size == 0
    _, idx0 = split(np.zeros(6, np.uint8), np.array([1, 1, 0, 2, -1, 0]), 2)
    np.testing.assert_array_equal(idx0, [2, 5])
    with pytest.raises(ValueError):
        split(e, np.array([1, 1]), 2)


def test_split_combine_inverse():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = rng.integers(1, 40)
        z = rng.integers(-2, 3, n)
        e = rng.integers(0, 2, n, dtype=np.uint8)
        e[z == 0] = 0
        subs, _ = split(e, z, 2)
        np.testing.assert_array_equal(combine(subs, z, 2), e)


def test_source_round_trip_with_erasures():
    rng = np.random.default_rng(4)
    books = {1: build_codebook(0.3, 8), 2: build_codebook(0.05, 8)}
    for _ in range(200):
        n = rng.integers(1, 80)
        z = rng.integers(-2, 3, n)
        x_prev = rng.integers(0, 2, n, dtype=np.uint8)
        e = rng.integers(0, 2, n, dtype=np.uint8)
        e[z == 0] = 0
        word = source_encode(e, x_prev, z, books)
        e_back, raw = source_decode(word, z, books)
        np.testing.assert_array_equal(e_back, e)
        np.testing.assert_array_equal(raw, x_prev[z == 0])


def test_all_erased_word_is_raw_copy():
    books = {1: build_codebook(0.3, 8)}
    x_prev = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
    z = np.zeros(5, dtype=int)
    word = source_encode(np.zeros(5, np.uint8), x_prev, z, books)
    np.testing.assert_array_equal(word, x_prev)
    e_back, raw = source_decode(word, z, books)
    assert not e_back.any()
    np.testing.assert_array_equal(raw, x_prev)


def test_none_class_encodes_zero_bits():
    books = {1: build_codebook(0.3, 8), 2: None}
    z = np.array([1, 2, 1, 2, 2])
    x_prev = np.zeros(5, np.uint8)
    e = np.array([1, 0, 0, 0, 0], dtype=np.uint8)
    word = source_encode(e, x_prev, z, books)
    e_back, raw = source_decode(word, z, books)
    np.testing.assert_array_equal(e_back, e)
    assert raw.size == 0
    with pytest.raises(AssertionError):
        source_encode(np.array([0, 1, 0, 0, 0], np.uint8), x_prev, z, books)


def test_source_decode_length_mismatch_raises():
    books = {1: build_codebook(0.3, 8)}
    z = np.array([1, 1, 1])
    word = source_encode(np.array([0, 1, 0], np.uint8), np.zeros(3, np.uint8), z, books)
    with pytest.raises(ValueError, match="corrupted"):
        source_decode(np.concatenate([word, [0]]), z, books)


def test_compression_ratio_approaches_alpha(grid_r2_models):
    # per-class expected code lengths against the contraction factor; the
    # excess over alpha shrinks as the segment length grows
    dmc = grid_r2_models[0.0]
    ratios = {}
    for H in (8, 12):
        ratios[H] = sum(
            dmc.rho[r] * build_codebook(dmc.pi[r], H).expected_code_length() / H
            for r in range(1, dmc.R + 1)
        )
    assert abs(ratios[8] - dmc.alpha) / dmc.alpha < 0.02
    assert abs(ratios[12] - dmc.alpha) / dmc.alpha < 0.02
    assert abs(ratios[12] - dmc.alpha) < abs(ratios[8] - dmc.alpha)
