"""Gray-labeled modulation and exact per-bit LLR computation.

Supported schemes are BPSK, QPSK, 16QAM and 64QAM, all with unit average
constellation energy. The square constellations factor into two independent
PAM axes; the first half of each symbol's bits selects the in-phase level,
the second half the quadrature level. Each axis uses a binary-reflected
Gray labeling with the leading axis bit acting as the sign bit (0 maps to
the positive half of the axis), so BPSK sends bit 0 as +1.

LLRs are computed with the exact log-sum-exp over the per-axis level sets,
never the max-log approximation. The noise variance argument is the
per-real-dimension variance; for BPSK this reduces to the familiar
lambda = 2 h y / sigma^2.
"""

import numpy as np
from scipy.special import logsumexp


class ModulationScheme:
    """A square (or one-dimensional) Gray-labeled constellation.

    Attributes:
        name: scheme identifier, e.g. "qpsk".
        bits_per_symbol: Q, number of bits carried by one complex signal.
        points: complex array of all 2^Q constellation points, indexed by
            the integer value of the Q-bit label (MSB first).
        axis_levels: real amplitude levels of one PAM axis, indexed by the
            integer value of the per-axis Gray label.
    """

    def __init__(self, name, axis_levels, two_axes):
        self.name = name
        self.axis_levels = axis_levels
        self.two_axes = two_axes
        m = int(np.log2(len(axis_levels)))
        self.bits_per_axis = m
        self.bits_per_symbol = 2 * m if two_axes else m
        self.points = self._build_points()

    def _build_points(self):
        m = self.bits_per_axis
        if not self.two_axes:
            return self.axis_levels.astype(complex)
        pts = np.empty(2 ** (2 * m), dtype=complex)
        for label in range(2 ** (2 * m)):
            i_lab, q_lab = label >> m, label & ((1 << m) - 1)
            pts[label] = self.axis_levels[i_lab] + 1j * self.axis_levels[q_lab]
        return pts


def _gray_axis(bits_per_axis):
    """Amplitude levels of a unit-energy-per-constellation PAM axis.

    Returns an array indexed by the per-axis label value; level spacing is
    chosen so that the full (two-axis, if applicable) constellation has unit
    average energy. Labels follow the binary-reflected Gray code assigned to
    levels in descending order, which puts label 0 on the most positive level
    and makes the leading bit the sign bit.
    """
    m = bits_per_axis
    M = 2 ** m
    # ordered most-positive-first so Gray code j^(j>>1) gives the sign-bit layout
    levels_desc = np.array([(M - 1 - 2 * j) for j in range(M)], dtype=float)
    by_label = np.empty(M)
    for j in range(M):
        by_label[j ^ (j >> 1)] = levels_desc[j]
    return by_label


_SCHEMES = {}


def make_scheme(name):
    """Build a ModulationScheme by name: bpsk, qpsk, 16qam or 64qam."""
    key = name.lower()
    if key in _SCHEMES:
        return _SCHEMES[key]
    if key == "bpsk":
        scheme = ModulationScheme("bpsk", _gray_axis(1), two_axes=False)
    elif key in ("qpsk", "16qam", "64qam"):
        m = {"qpsk": 1, "16qam": 2, "64qam": 3}[key]
        axis = _gray_axis(m)
        # two axes share the energy budget equally
        axis = axis * np.sqrt(3.0 / (2.0 * (4 ** m - 1)))
        scheme = ModulationScheme(key, axis, two_axes=True)
    else:
        raise ValueError(f"unsupported modulation: {name}")
    energy = np.mean(np.abs(scheme.points) ** 2)
    assert abs(energy - 1.0) < 1e-12
    _SCHEMES[key] = scheme
    return scheme


def modulate(bits, scheme):
    """Map a bit word to complex signals, Q bits per signal.

    An incomplete final group is padded with zero bits; the pad carries no
    information and its LLRs are discarded by compute_llrs via n_bits.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size == 0:
        raise ValueError("cannot modulate an empty bit word")
    q = scheme.bits_per_symbol
    n_sig = -(-bits.size // q)
    padded = np.zeros(n_sig * q, dtype=np.uint8)
    padded[: bits.size] = bits
    groups = padded.reshape(n_sig, q)
    labels = groups @ (1 << np.arange(q - 1, -1, -1))
    return scheme.points[labels]


def _axis_llrs(obs, scheme, noise_var, h):
    """LLRs of the per-axis bits for real observations, shape (n, m)."""
    m = scheme.bits_per_axis
    levels = scheme.axis_levels
    # log-likelihood of each axis level, shape (n, M)
    ll = -((obs[:, None] - h * levels[None, :]) ** 2) / (2.0 * noise_var)
    out = np.empty((obs.size, m))
    for b in range(m):
        bit_of_label = (np.arange(len(levels)) >> (m - 1 - b)) & 1
        out[:, b] = logsumexp(ll[:, bit_of_label == 0], axis=1) - logsumexp(
            ll[:, bit_of_label == 1], axis=1
        )
    return out


def compute_llrs(received, scheme, noise_var, h=1.0, n_bits=None):
    """Per-bit LLRs (natural log, positive favors bit 0) of received signals.

    noise_var is the per-real-dimension noise variance. A fading amplitude h
    scales the constellation; the receiver is assumed to know it. n_bits
    truncates the output so pad-bit LLRs of an incomplete final group are
    dropped.
    """
    received = np.asarray(received, dtype=complex)
    if not (noise_var > 0 and np.isfinite(noise_var)):
        raise ValueError("noise_var must be positive and finite")
    if not (h > 0 and np.isfinite(h)):
        raise ValueError("fading amplitude must be positive and finite")
    if not np.all(np.isfinite(received.real) & np.isfinite(received.imag)):
        raise ValueError("received signals must be finite")
    if scheme.two_axes:
        li = _axis_llrs(received.real, scheme, noise_var, h)
        lq = _axis_llrs(received.imag, scheme, noise_var, h)
        lam = np.concatenate([li, lq], axis=1).reshape(-1)
    else:
        lam = _axis_llrs(received.real, scheme, noise_var, h).reshape(-1)
    if n_bits is not None:
        if n_bits > lam.size:
            raise ValueError("n_bits exceeds the number of demapped bits")
        lam = lam[:n_bits]
    return lam
