"""Huffman compression of error-location vectors, split by reliability class.

The error-location vector of one iteration is split into per-class
subvectors (class r collects the bits whose quantized LLR magnitude is r;
erased positions are excluded and handled as raw retransmissions). Each
subvector is cut into segments of H bits; a segment with omega ones has
probability pi^omega (1-pi)^(H-omega) under the class's error rate pi, and
an optimal prefix code over the 2^H segments is built with the classic
Huffman construction.

A final partial segment shorter than H is padded with zeros up to the next
supported segment length and coded with a codebook built for that length.
Supported lengths are the powers of two up to H (plus H itself), so the
codebook family stays small while short tails avoid paying for a full
segment of padding. The decoder knows every subvector length from the
stored quantizer output of the previous iteration, so it knows which
codebook the tail used and how much padding to drop.

Tie-breaking in the Huffman construction is deterministic (priority by
(probability, smallest contained segment value), lower priority takes the
0-branch) so transmitter and receiver build bit-identical codebooks
independently.
"""

import heapq

import numpy as np


def _segment_probs(pi, length):
    values = np.arange(2 ** length)
    ones = np.array([bin(v).count("1") for v in values])
    # evaluated in log space so tiny pi does not zero every mixed segment
    with np.errstate(divide="ignore"):
        logp = ones * np.log(pi) + (length - ones) * np.log1p(-pi)
    return np.exp(logp)


class _Table:
    """Prefix code over all segments of one length: codeword list + walk tree."""

    def __init__(self, pi, length):
        n_leaf = 2 ** length
        probs = _segment_probs(pi, length)
        heap = [(probs[v], v, v) for v in range(n_leaf)]
        heapq.heapify(heap)
        children = np.zeros((n_leaf - 1, 2), dtype=np.int64)
        next_id = n_leaf
        while len(heap) > 1:
            pa, ma, a = heapq.heappop(heap)  # lower priority becomes the 0-branch
            pb, mb, b = heapq.heappop(heap)
            children[next_id - n_leaf] = (a, b)
            heapq.heappush(heap, (pa + pb, min(ma, mb), next_id))
            next_id += 1
        self.length = length
        self.n_leaf = n_leaf
        self.children = children
        self.root = next_id - 1
        self.codes = self._codes_from_tree()

    def _codes_from_tree(self):
        codes = [None] * self.n_leaf
        stack = [(self.root, [])]
        while stack:
            node, prefix = stack.pop()
            if node < self.n_leaf:
                codes[node] = np.array(prefix, dtype=np.uint8)
            else:
                c0, c1 = self.children[node - self.n_leaf]
                stack.append((c1, prefix + [1]))
                stack.append((c0, prefix + [0]))
        return codes

    def decode_one(self, stream, pos):
        node = self.root
        while node >= self.n_leaf:
            node = self.children[node - self.n_leaf][stream[pos]]
            pos += 1
        return int(node), pos


def _tail_lengths(H):
    lengths = {H}
    p = 1
    while p < H:
        lengths.add(p)
        p *= 2
    return sorted(lengths)


class HuffmanCodebook:
    """Per-class segment codebooks: the full length H plus short tail lengths."""

    def __init__(self, pi, H):
        if not 0 < pi < 1:
            raise ValueError(f"degenerate source probability pi={pi}")
        if H < 1:
            raise ValueError("segment length H must be at least 1")
        self.pi = float(pi)
        self.H = int(H)
        self.tables = {length: _Table(pi, length) for length in _tail_lengths(H)}

    def tail_length(self, remainder):
        """Smallest supported segment length that fits a partial tail."""
        for length in sorted(self.tables):
            if length >= remainder:
                return length
        return self.H

    def expected_code_length(self, length=None):
        """Mean codeword length of one segment table (defaults to length H)."""
        t = self.tables[self.H if length is None else length]
        probs = _segment_probs(self.pi, t.length)
        return float(sum(p * c.size for p, c in zip(probs, t.codes)))

    def kraft_sum(self):
        """Sum of 2^-len over the length-H table; exactly 1 for a full tree."""
        from fractions import Fraction

        return sum(Fraction(1, 2 ** c.size) for c in self.tables[self.H].codes)

    def dump(self):
        """Diagnostic text listing: segment -> codeword, sorted by segment value."""
        lines = [f"pi={self.pi:.6g} H={self.H}"]
        for length in sorted(self.tables):
            t = self.tables[length]
            lines.append(f"[length {length}]")
            for v, code in enumerate(t.codes):
                lines.append(
                    f"{v:0{length}b} -> {''.join(map(str, code.tolist()))}"
                )
        return "\n".join(lines)


def build_codebook(pi, H):
    """Deterministic Huffman codebook family for one reliability class."""
    return HuffmanCodebook(pi, H)


_POW = {}


def _powers(length):
    if length not in _POW:
        _POW[length] = 1 << np.arange(length - 1, -1, -1)
    return _POW[length]


def encode_subvector(sub, book):
    """Prefix-encode one class subvector; empty input gives an empty word."""
    sub = np.asarray(sub, dtype=np.uint8)
    n = sub.size
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    H = book.H
    out = []
    full = n // H
    if full:
        segs = sub[: full * H].reshape(full, H) @ _powers(H)
        codes = book.tables[H].codes
        out.extend(codes[int(s)] for s in segs)
    rem = n - full * H
    if rem:
        L = book.tail_length(rem)
        seg = np.zeros(L, dtype=np.uint8)
        seg[:rem] = sub[full * H :]
        out.append(book.tables[L].codes[int(seg @ _powers(L))])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.uint8)


def decode_subvector(coded, n_original_bits, book):
    """Invert encode_subvector given the original length; returns (bits, consumed).

    Consumed is the number of coded bits read, which lets a caller
    deconcatenate several class subvectors from one stream.
    """
    out = np.zeros(n_original_bits, dtype=np.uint8)
    pos = 0
    j = 0
    H = book.H
    try:
        while n_original_bits - j >= H:
            value, pos = book.tables[H].decode_one(coded, pos)
            out[j : j + H] = (value >> np.arange(H - 1, -1, -1)) & 1
            j += H
        rem = n_original_bits - j
        if rem:
            L = book.tail_length(rem)
            value, pos = book.tables[L].decode_one(coded, pos)
            out[j:] = ((value >> np.arange(L - 1, -1, -1)) & 1)[:rem]
    except IndexError:
        raise ValueError("coded stream exhausted mid-codeword") from None
    return out, pos


def split(e, z, R):
    """Partition error bits by reliability class, keeping index order.

    Returns (subvectors for classes 1..R, erased position indices). Bits at
    erased positions carry no error information and appear in no subvector.
    """
    e = np.asarray(e, dtype=np.uint8)
    z = np.asarray(z)
    if e.size != z.size:
        raise ValueError("error vector and quantizer output lengths differ")
    mag = np.abs(z)
    subs = [e[mag == r] for r in range(1, R + 1)]
    return subs, np.flatnonzero(mag == 0)


def combine(subvectors, z, R):
    """Inverse of split: scatter class subvectors back to full positions.

    Erased positions come back as 0; they carry no error bit and the caller
    fills them from the raw retransmission instead.
    """
    z = np.asarray(z)
    mag = np.abs(z)
    e = np.zeros(z.size, dtype=np.uint8)
    for r in range(1, R + 1):
        e[mag == r] = subvectors[r - 1]
    return e


def source_encode(e, x_prev, z, books):
    """One iteration's update word: coded class subvectors then raw erased bits.

    books maps class r (1..R) to its codebook; a None entry marks a class
    whose error probability is exactly 0, which carries no information and
    is encoded in zero bits.
    """
    R = max(books)
    subs, idx0 = split(e, z, R)
    parts = []
    for r in range(1, R + 1):
        book = books[r]
        if book is None:
            # only classes that never err may go uncoded
            assert not subs[r - 1].any()
            continue
        parts.append(encode_subvector(subs[r - 1], book))
    parts.append(np.asarray(x_prev, dtype=np.uint8)[idx0])
    return np.concatenate(parts)


def source_decode(x, z_prev, books):
    """Invert source_encode using the stored quantizer word of iteration i-1.

    Returns (full-length error vector with zeros at erased positions, raw
    bits for the erased positions in index order). Raises if the stream
    length does not exactly match the deconcatenation plan.
    """
    x = np.asarray(x, dtype=np.uint8)
    z_prev = np.asarray(z_prev)
    R = max(books)
    mag = np.abs(z_prev)
    pos = 0
    subs = []
    for r in range(1, R + 1):
        n_r = int((mag == r).sum())
        book = books[r]
        if book is None:
            subs.append(np.zeros(n_r, dtype=np.uint8))
            continue
        bits, used = decode_subvector(x[pos:], n_r, book)
        subs.append(bits)
        pos += used
    n0 = int((mag == 0).sum())
    if x.size - pos != n0:
        raise ValueError(
            f"corrupted update word: {x.size - pos} bits left for {n0} erased positions"
        )
    raw = x[pos : pos + n0]
    return combine(subs, z_prev, R), raw
