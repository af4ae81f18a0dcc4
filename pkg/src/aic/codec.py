"""The iterative feedback coder: transmitter loop, receiver memory, decoder.

Round i sends a bit word x_i (x_0 is the message itself). The receiver
demaps per-bit LLRs, quantizes them, stores the quantized word z_i, and
feeds z_i back. From z_i the transmitter recovers the receiver's hard
decisions, marks the error locations, and, unless the round was clean,
sends x_{i+1}: the Huffman-compressed error locations of the reliable
positions followed by raw copies of the erased positions. A clean round
(no errors, no erasures) triggers an acknowledgment carrying its index D.

Decoding runs backward from the clean word: x_D is read directly off the
signs of z_D, and each earlier word is restored by source-decoding its
successor against the stored quantizer word, flipping the flagged hard
decisions and filling erased positions from the raw copies. Every step is
exact, so an acknowledged message is always recovered perfectly.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import feedback, transmit
from .modem import compute_llrs, modulate
from .qllr import quantize
from .srccode import build_codebook, source_decode, source_encode


def codebooks_for(dmc, H):
    """Per-class codebooks from an induced-channel model.

    A class that can never err (pi exactly 0) needs no code at all and maps
    to None; the update word simply omits it.
    """
    books = {}
    for r in range(1, dmc.R + 1):
        pi = dmc.pi[r]
        if pi == 0.0:
            books[r] = None
        else:
            books[r] = build_codebook(pi, H)
    return books


@dataclass
class EncoderConfig:
    """Static per-link configuration shared by transmitter and receiver."""

    scheme: object
    dmc: object
    H: int
    K: int
    d_max: int | None = None

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("message length K must be at least 1")
        if self.H < 1:
            raise ValueError("segment length H must be at least 1")
        if self.d_max is not None and self.d_max < 0:
            raise ValueError("d_max must be non-negative when bounded")
        self.theta = self.dmc.theta
        self.books = codebooks_for(self.dmc, self.H)


@dataclass
class IterationRecord:
    i: int
    x: np.ndarray
    n_bits: int
    n_signals: int
    h: float
    z: np.ndarray


@dataclass
class Transcript:
    """Per-trial log: one record per round plus the outcome."""

    m: np.ndarray
    records: list = field(default_factory=list)
    status: str = "open"
    D: int | None = None
    m_hat: np.ndarray | None = None

    @property
    def n_total(self):
        return sum(r.n_bits for r in self.records)

    @property
    def n_signals_total(self):
        return sum(r.n_signals for r in self.records)

    def lengths(self):
        return [r.n_bits for r in self.records]

    def to_trace_dict(self):
        d = {
            "status": self.status,
            "D": self.D,
            "N": int(self.n_total),
            "N_i": [int(n) for n in self.lengths()],
            "m": "".join(map(str, self.m.tolist())),
        }
        if self.m_hat is not None:
            d["m_hat"] = "".join(map(str, self.m_hat.tolist()))
        return d


def hard_decisions(z):
    """Receiver bit estimates from quantizer signs (0 placeholder at erasures)."""
    return (np.asarray(z) < 0).astype(np.uint8)


def error_vector(x, z):
    """Error locations of one round: transmitted word XOR hard decisions.

    Positions with z = 0 carry no estimate and are reported as 0 here; they
    are handled by the raw retransmission path, not the error code.
    """
    x = np.asarray(x, dtype=np.uint8)
    z = np.asarray(z)
    e = hard_decisions(z) ^ x
    e[z == 0] = 0
    return e


def encode_iteration(x_i, ch, cfg, i):
    """One protocol round seen from the transmitter.

    Returns (z_i, e_i, x_next, clean); x_next is None on a clean round.
    """
    x_i = np.asarray(x_i, dtype=np.uint8)
    if x_i.size == 0:
        raise ValueError("cannot run a round on an empty word")
    signals = modulate(x_i, cfg.scheme)
    y = transmit(signals, ch, i)
    h = ch.fading(i)
    lam = compute_llrs(y, cfg.scheme, ch.noise_var / 2.0, h, n_bits=x_i.size)
    z = feedback(quantize(lam, cfg.theta))
    e = error_vector(x_i, z)
    clean = not e.any() and not (z == 0).any()
    x_next = None if clean else source_encode(e, x_i, z, cfg.books)
    return z, e, x_next, clean


def encode_message(m, ch, cfg):
    """Run the full protocol for one message; returns a complete Transcript."""
    m = np.asarray(m, dtype=np.uint8)
    if m.size != cfg.K:
        raise ValueError(f"message length {m.size} != configured K={cfg.K}")
    t = Transcript(m=m)
    x = m
    i = 0
    zs = []
    while True:
        z, _, x_next, clean = encode_iteration(x, ch, cfg, i)
        q = cfg.scheme.bits_per_symbol
        t.records.append(
            IterationRecord(i=i, x=x, n_bits=x.size, n_signals=-(-x.size // q),
                            h=ch.fading(i), z=z)
        )
        zs.append(z)
        if clean:
            t.status = "ack"
            t.D = i
            t.m_hat = decode(zs, cfg)
            return t
        if cfg.d_max is not None and i >= cfg.d_max:
            t.status = "nack"
            return t
        x = x_next
        i += 1


def decode(zs, cfg):
    """Recover the message from the stored quantizer words z_0 ... z_D.

    Requires a clean final round (all z_D nonzero with correct signs); every
    backward step is then an exact inversion.
    """
    x_hat = hard_decisions(zs[-1])
    for z_prev in zs[-2::-1]:
        e_full, raw = source_decode(x_hat, z_prev, cfg.books)
        x_hat = hard_decisions(z_prev) ^ e_full
        erased = np.flatnonzero(np.asarray(z_prev) == 0)
        x_hat[erased] = raw
    return x_hat
