"""LLR quantization and the induced binary-input discrete channel.

A threshold vector theta = (theta_0, ..., theta_{R-1}) with an implicit
final threshold at +inf maps each LLR to a quantized value z in
{0, +-1, ..., +-R}: the sign of z is the hard decision, the magnitude a
reliability class, and z = 0 marks an erasure (|lambda| below theta_0).

Modulation, channel and quantizer together induce a discrete memoryless
channel from a transmitted bit u to z. Its description (transition matrix
p_uv, class probabilities rho_r, in-class error probabilities pi_r, and the
compression ratio alpha = sum_r H2(pi_r) rho_r) drives both the Huffman
codebook design and the analytic length/spectral-efficiency predictions.
For antipodal signaling on AWGN (BPSK, and QPSK via its independent axes)
the transition matrix has a Gaussian-integral closed form; for the QAM
schemes it is estimated by Monte Carlo.

Thresholds are chosen to maximize the mutual information I(X;Z) of the
induced channel under uniform inputs, by coordinate-wise golden-section
ascent with deterministic restarts.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .modem import compute_llrs, make_scheme, modulate


def binary_entropy(p):
    """H2(p) in bits, elementwise, with H2(0) = H2(1) = 0."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    inside = (p > 0) & (p < 1)
    q = p[inside]
    out[inside] = -q * np.log2(q) - (1 - q) * np.log2(1 - q)
    return out if out.ndim else float(out)


@dataclass
class ThresholdVector:
    """Finite quantizer thresholds (theta_0 ... theta_{R-1}); theta_R = +inf."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("need at least one finite threshold")
        if not np.all(np.isfinite(v)) or v[0] < 0 or np.any(np.diff(v) <= 0):
            raise ValueError("thresholds must be finite, non-negative, strictly increasing")
        self.values = v

    @property
    def R(self):
        return self.values.size


def quantize(lam, theta):
    """Quantize LLRs to {0, +-1, ..., +-R}.

    z = +r iff theta_{r-1} <= lambda < theta_r, z = -r iff
    -theta_r < lambda <= -theta_{r-1}, z = 0 iff |lambda| < theta_0;
    +-inf map to +-R.
    """
    lam = np.asarray(lam, dtype=float)
    mag = np.digitize(np.abs(lam), theta.values)
    return np.where(lam >= 0, mag, -mag).astype(np.int64)


def _hard_error_stats(p_uv, R):
    """(rho, pi) per magnitude class from a transition matrix.

    Column v of p_uv lives at index v + R. pi_0 is pinned at 1/2: an erased
    bit is re-sent raw, which costs exactly one bit, the H2(1/2) rate.
    """
    rho = np.empty(R + 1)
    pi = np.empty(R + 1)
    rho[0] = 0.5 * (p_uv[0, R] + p_uv[1, R])
    pi[0] = 0.5
    for r in range(1, R + 1):
        rho[r] = 0.5 * (p_uv[0, R - r] + p_uv[0, R + r] + p_uv[1, R - r] + p_uv[1, R + r])
        if rho[r] > 0:
            pi[r] = (p_uv[0, R - r] + p_uv[1, R + r]) / (2.0 * rho[r])
        else:
            pi[r] = 0.5
    return rho, pi


def _alpha_of(rho, pi):
    return float(np.sum(binary_entropy(pi) * rho))


@dataclass
class DmcModel:
    """Binary-input (2R+1)-output channel induced by modulation+quantizer."""

    theta: ThresholdVector
    p_uv: np.ndarray
    rho: np.ndarray
    pi: np.ndarray
    alpha: float
    provenance: dict = field(default_factory=dict)
    stderr: np.ndarray | None = None

    @property
    def R(self):
        return self.theta.R

    def validate(self, row_tol=1e-9):
        rows = self.p_uv.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > row_tol):
            raise ValueError(f"transition rows must sum to 1, got {rows}")
        if abs(self.rho.sum() - 1.0) > 1e-9:
            raise ValueError("class probabilities must sum to 1")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")
        return self

    def to_json_dict(self):
        d = {
            "theta": self.theta.values.tolist(),
            "p_uv": self.p_uv.tolist(),
            "rho": self.rho.tolist(),
            "pi": self.pi.tolist(),
            "alpha": self.alpha,
            "provenance": self.provenance,
        }
        if self.stderr is not None:
            d["stderr"] = self.stderr.tolist()
        return d

    @classmethod
    def from_json_dict(cls, d):
        return cls(
            theta=ThresholdVector(np.array(d["theta"])),
            p_uv=np.array(d["p_uv"]),
            rho=np.array(d["rho"]),
            pi=np.array(d["pi"]),
            alpha=float(d["alpha"]),
            provenance=dict(d.get("provenance", {})),
            stderr=np.array(d["stderr"]) if "stderr" in d else None,
        )

    def dumps(self):
        return json.dumps(self.to_json_dict(), indent=1, sort_keys=True)

    @classmethod
    def loads(cls, s):
        return cls.from_json_dict(json.loads(s))


def _scalar_row0(theta_values, sigma2):
    """P(Z = v | +1 sent) for the unit-energy antipodal real channel.

    The LLR of y is 2y/sigma^2, so LLR thresholds become y-domain boundaries
    T_r = sigma^2 theta_r / 2 and each cell probability is a difference of
    Gaussian CDFs.
    """
    sigma = np.sqrt(sigma2)
    T = sigma2 * np.asarray(theta_values) / 2.0
    R = len(T)
    edges = np.concatenate([T, [np.inf]])

    def cdf(x):
        return ndtr((x - 1.0) / sigma)

    row = np.zeros(2 * R + 1)
    row[R] = cdf(T[0]) - cdf(-T[0])  # erasure cell, empty when theta_0 = 0
    for r in range(1, R + 1):
        row[R + r] = cdf(edges[r]) - cdf(edges[r - 1])
        row[R - r] = cdf(-edges[r - 1]) - cdf(-edges[r])
    return row


def dmc_analytic_bpsk_qpsk(theta, noise_var):
    """Closed-form DMC of antipodal signaling on a real AWGN channel.

    noise_var is the variance of the equivalent unit-energy scalar channel:
    for QPSK on a complex channel with total noise variance v this equals v
    (each axis carries half the energy and half the noise); for BPSK it is
    v/2. The u=1 row is the exact mirror of the u=0 row, which the antipodal
    symmetry guarantees, so p_{0,-r} = p_{1,r} holds to the last bit.
    """
    if not noise_var > 0:
        raise ValueError("noise_var must be positive")
    row0 = _scalar_row0(theta.values, noise_var)
    p_uv = np.vstack([row0, row0[::-1]])
    rho, pi = _hard_error_stats(p_uv, theta.R)
    return DmcModel(
        theta=theta,
        p_uv=p_uv,
        rho=rho,
        pi=pi,
        alpha=_alpha_of(rho, pi),
        provenance={"method": "analytic", "noise_var": float(noise_var)},
    )


def equivalent_scalar_noise_var(scheme, noise_var):
    """Scalar-channel variance reproducing a scheme's per-bit LLR statistics.

    Defined for the antipodal schemes only; QAM statistics have no scalar
    equivalent and use the Monte Carlo path.
    """
    if scheme.name == "bpsk":
        return noise_var / 2.0
    if scheme.name == "qpsk":
        return noise_var
    return None


def _llr_sample(scheme, noise_var, n_symbols, seed, chunk=200_000):
    """Transmitted bits and their LLRs over AWGN, for n_symbols random symbols."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    q = scheme.bits_per_symbol
    us, lams = [], []
    left = n_symbols
    while left > 0:
        n = min(chunk, left)
        left -= n
        bits = rng.integers(0, 2, n * q).astype(np.uint8)
        s = modulate(bits, scheme)
        scale = np.sqrt(noise_var / 2.0)
        y = s + scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        lam = compute_llrs(y, scheme, noise_var / 2.0, 1.0, n_bits=n * q)
        us.append(bits)
        lams.append(lam)
    return np.concatenate(us), np.concatenate(lams)


def _counts_p_uv(u, z, R):
    """Empirical transition matrix and per-cell counts from paired samples."""
    p = np.zeros((2, 2 * R + 1))
    counts = np.zeros((2, 2 * R + 1), dtype=np.int64)
    n_u = np.zeros(2, dtype=np.int64)
    for uu in (0, 1):
        sel = z[u == uu]
        n_u[uu] = sel.size
        counts[uu] = np.bincount(sel + R, minlength=2 * R + 1)
        if sel.size:
            p[uu] = counts[uu] / sel.size
    return p, counts, n_u


def dmc_monte_carlo(scheme, theta, noise_var, samples=1_000_000, seed=0):
    """Estimate the induced DMC by simulation: modulate, AWGN, demap, quantize.

    noise_var is the total complex noise variance of the channel; samples
    counts modulated symbols, each contributing bits_per_symbol bit
    observations. A class with zero observed mass keeps the pi = 1/2
    convention and is flagged in provenance.
    """
    if samples < 1e5:
        raise ValueError("need at least 1e5 symbols for a stable estimate")
    u, lam = _llr_sample(scheme, noise_var, int(samples), seed)
    z = quantize(lam, theta)
    p_uv, counts, n_u = _counts_p_uv(u, z, theta.R)
    stderr = np.sqrt(p_uv * (1 - p_uv) / np.maximum(n_u, 1)[:, None])
    rho, pi = _hard_error_stats(p_uv, theta.R)
    empty = [int(r) for r in range(1, theta.R + 1) if rho[r] == 0]
    prov = {
        "method": "monte_carlo",
        "scheme": scheme.name,
        "noise_var": float(noise_var),
        "samples": int(samples),
        "seed": int(seed),
    }
    if empty:
        prov["empty_classes"] = empty
    return DmcModel(
        theta=theta,
        p_uv=p_uv,
        rho=rho,
        pi=pi,
        alpha=_alpha_of(rho, pi),
        provenance=prov,
        stderr=stderr,
    )


def mutual_information(p_uv):
    """I(X;Z) in bits of a binary-input channel under uniform inputs."""
    p_uv = np.asarray(p_uv, dtype=float)
    pz = 0.5 * (p_uv[0] + p_uv[1])
    mask = p_uv > 0
    terms = np.zeros_like(p_uv)
    terms[mask] = p_uv[mask] * (
        np.log2(p_uv[mask]) - np.log2(np.broadcast_to(pz, p_uv.shape)[mask])
    )
    return 0.5 * float(terms.sum())


class _SampleMi:
    """MI(theta) over a fixed LLR sample, via presorted |lambda| categories.

    Sorting |lambda| once per (transmitted bit, LLR sign) category turns each
    candidate evaluation into a handful of binary searches, which makes the
    golden-section ascent cheap even for 64QAM sample sizes.
    """

    def __init__(self, u, lam):
        self.n_u = np.array([(u == 0).sum(), (u == 1).sum()])
        self.sorted_abs = {}
        for uu in (0, 1):
            for pos in (False, True):
                sel = (u == uu) & ((lam >= 0) == pos)
                self.sorted_abs[(uu, pos)] = np.sort(np.abs(lam[sel]))
        self.all_abs = np.sort(np.abs(lam))

    def p_uv(self, theta_values):
        R = len(theta_values)
        p = np.zeros((2, 2 * R + 1))
        for uu in (0, 1):
            n = self.n_u[uu]
            for pos in (False, True):
                a = self.sorted_abs[(uu, pos)]
                edges = np.append(np.searchsorted(a, theta_values, side="left"), a.size)
                p[uu, R] += edges[0] / n
                cells = np.diff(edges) / n
                if pos:
                    p[uu, R + 1 :] += cells
                else:
                    p[uu, R - 1 :: -1] += cells
        return p

    def mi(self, theta_values):
        return mutual_information(self.p_uv(theta_values))


class _AnalyticMi:
    """MI(theta) of the closed-form antipodal channel."""

    def __init__(self, sigma2):
        self.sigma2 = sigma2

    def mi(self, theta_values):
        row0 = _scalar_row0(theta_values, self.sigma2)
        return mutual_information(np.vstack([row0, row0[::-1]]))


def _golden_max(f, lo, hi, xtol=1e-7):
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def optimize_thresholds(
    scheme,
    noise_var,
    R,
    fix_theta0_zero=True,
    samples=250_000,
    seed=0,
    mi_tol=1e-10,
    max_passes=40,
):
    """Mutual-information-maximizing thresholds for a scheme at one noise level.

    noise_var is the total complex noise variance. The search runs
    coordinate-wise golden-section ascent over the free thresholds, from
    three deterministic initializations spread over |lambda| quantiles; the
    antipodal schemes use the exact closed-form objective, QAM a fixed
    fixed-seed LLR sample so the objective is deterministic.
    """
    if R < 1:
        raise ValueError("R must be at least 1")
    sigma2 = equivalent_scalar_noise_var(scheme, noise_var)
    if sigma2 is not None:
        objective = _AnalyticMi(sigma2)
        # a modest sample is only needed for quantile initializations
        _, lam = _llr_sample(scheme, noise_var, 50_000, seed)
    else:
        u, lam = _llr_sample(scheme, noise_var, int(samples), seed)
        objective = _SampleMi(u, lam)
    abs_sorted = np.sort(np.abs(lam))
    hi_cap = abs_sorted[min(abs_sorted.size - 1, int(abs_sorted.size * 0.99999))] * 1.5

    first_free = 1 if fix_theta0_zero else 0
    if first_free >= R:
        return ThresholdVector(np.array([0.0]))

    best_mi, best_theta = -np.inf, None
    for restart in range(3):
        fr = (np.arange(first_free, R) + 0.35 * restart + 0.5) / (R + 0.35 * restart + 0.5)
        theta = np.zeros(R)
        theta[first_free:] = np.quantile(abs_sorted, fr)
        theta[first_free:] = np.maximum.accumulate(theta[first_free:] + 1e-12)
        cur = objective.mi(theta)
        for _ in range(max_passes):
            prev = cur
            for j in range(first_free, R):
                lo = theta[j - 1] + 1e-9 if j > 0 else 1e-9
                hi = theta[j + 1] - 1e-9 if j + 1 < R else hi_cap

                def coord(t, j=j):
                    cand = theta.copy()
                    cand[j] = t
                    return objective.mi(cand)

                theta[j] = _golden_max(coord, lo, hi)
            cur = objective.mi(theta)
            if cur - prev < mi_tol:
                break
        else:
            raise RuntimeError(
                f"threshold search did not settle within {max_passes} passes; "
                f"best so far {theta} with MI {cur:.6f}"
            )
        if cur > best_mi:
            best_mi, best_theta = cur, theta.copy()
    return ThresholdVector(best_theta)


def make_dmc(scheme, noise_var, theta, samples=1_000_000, seed=0):
    """Induced-channel model for a scheme: closed form when available, else MC."""
    sigma2 = equivalent_scalar_noise_var(scheme, noise_var)
    if sigma2 is not None:
        model = dmc_analytic_bpsk_qpsk(theta, sigma2)
        model.provenance["scheme"] = scheme.name
        model.provenance["channel_noise_var"] = float(noise_var)
        return model
    return dmc_monte_carlo(scheme, theta, noise_var, samples=samples, seed=seed)


def dispersion(model):
    """Largest in-class asymmetry between the two bit-conditional error rates.

    For each class r the pair (p_{0,-r}, p_{1,r}) should coincide when the
    channel is symmetric; delta_r is the squared spread of the pair around
    its mean, and the returned value is max_r delta_r.
    """
    R = model.R
    deltas = []
    for r in range(0, R + 1):
        a = model.p_uv[0, R - r]
        b = model.p_uv[1, R + r]
        e = 0.5 * (a + b)
        deltas.append((a - e) ** 2 + (b - e) ** 2)
    return float(max(deltas))
