"""Forward channel models and the lossless feedback link.

Two forward channels are provided: AWGN and quasi-static Rayleigh fading
(one fading draw per protocol iteration, constant within it). noise_var is
the total complex noise variance, split evenly between the I and Q rails;
the fading amplitude satisfies E[h^2] = 1 so the average received signal
energy stays at the constellation energy.

All randomness is derived from (seed, iteration) so a retransmission chain
can be replayed exactly, and independent trials can run in any order.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class ChannelInstance:
    """One trial's forward channel: kind is "awgn" or "qsrf"."""

    kind: str
    noise_var: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("awgn", "qsrf"):
            raise ValueError(f"unknown channel kind: {self.kind}")
        if not self.noise_var > 0:
            raise ValueError("noise_var must be positive")

    def _rng(self, iteration):
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(iteration,))
        )

    def fading(self, iteration):
        """Fading amplitude h for the given iteration (1.0 for AWGN)."""
        if self.kind == "awgn":
            return 1.0
        # Rayleigh with E[h^2] = 1; drawn first so transmit() can reuse the stream
        return float(self._rng(iteration).rayleigh(scale=np.sqrt(0.5)))


def transmit(signals, ch, iteration):
    """Pass complex signals through the forward channel at one iteration."""
    signals = np.asarray(signals, dtype=complex)
    rng = ch._rng(iteration)
    if ch.kind == "qsrf":
        h = float(rng.rayleigh(scale=np.sqrt(0.5)))
    else:
        h = 1.0
    scale = np.sqrt(ch.noise_var / 2.0)
    noise = scale * (
        rng.standard_normal(signals.shape) + 1j * rng.standard_normal(signals.shape)
    )
    return h * signals + noise


def snr_of(ch, iteration):
    """Instantaneous SNR h^2 / noise_var of one iteration."""
    h = ch.fading(iteration)
    return h * h / ch.noise_var


def feedback(z):
    """Lossless feedback link: delivers the quantized-LLR word unchanged."""
    return z
