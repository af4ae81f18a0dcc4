"""Analytic link predictions and empirical Monte Carlo metrics.

The analytic side turns an induced-channel model into the per-iteration
length contraction factor alpha, the geometric-series expected codeword
length, and the spectral-efficiency upper bound. The empirical side
aggregates protocol transcripts into SE/BLER numbers, empirical CDFs of
the iteration count D and codeword length N, and the D_MAX needed to hit
a target block error rate. Everything here is pure aggregation, safe to
fold in parallel and merge.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .qllr import binary_entropy

# Pinned output column order for sweep results; external consumers rely on it.
CSV_COLUMNS = (
    "snr_db",
    "modulation",
    "R",
    "H",
    "K",
    "trials",
    "se",
    "se_ub",
    "alpha",
    "bler",
    "mean_D",
    "N_min",
    "N_max",
    "dispersion",
    "en_sim",
    "en_eq41",
)


def alpha(dmc):
    """Per-iteration contraction factor: sum of H2(pi_r) * rho_r over classes.

    Class 0 (erasures) enters with pi_0 = 1/2, i.e. one raw bit per erased
    position. The iteration only shrinks words when alpha < 1; the boundary
    case is rejected.
    """
    rho = np.asarray(dmc.rho, dtype=float)
    pi = np.asarray(dmc.pi, dtype=float)
    a = float(np.dot(binary_entropy(pi), rho))
    if not a < 1.0:
        raise ValueError(f"contraction factor alpha={a:.6f} is not < 1; words would not shrink")
    return a


def expected_length(k, alpha_value, d_max=None):
    """Expected total codeword length K * (1 - alpha^(D_max+1)) / (1 - alpha).

    Unbounded d_max gives the geometric-series limit K / (1 - alpha). With
    finite segment length the true average sits above this value, so it is
    a lower bound in practice.
    """
    if not 0.0 <= alpha_value < 1.0:
        raise ValueError(f"alpha={alpha_value} outside [0, 1)")
    if d_max is None:
        return k / (1.0 - alpha_value)
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    return k * (1.0 - alpha_value ** (d_max + 1)) / (1.0 - alpha_value)


def se_upper_bound(alpha_value, q, d_max=None):
    """Spectral-efficiency ceiling (1 - alpha) * Q / (1 - alpha^(D_max+1))."""
    if not 0.0 <= alpha_value < 1.0:
        raise ValueError(f"alpha={alpha_value} outside [0, 1)")
    if d_max is None:
        return (1.0 - alpha_value) * q
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    return (1.0 - alpha_value) * q / (1.0 - alpha_value ** (d_max + 1))


def block_error_rate(transcripts):
    """Fraction of trials that failed: no acknowledgment, or a decode mismatch."""
    if not transcripts:
        raise ValueError("need at least one transcript")
    bad = sum(
        1
        for t in transcripts
        if t.status != "ack" or t.m_hat is None or not np.array_equal(t.m_hat, t.m)
    )
    return bad / len(transcripts)


def se_from_counts(k, q, mean_n, bler):
    """SE = K*Q/E[N] * (1 - BLER); counts NACK lengths in E[N] like any other."""
    return k * q / mean_n * (1.0 - bler)


def empirical_se(transcripts, q):
    """Spectral efficiency over a transcript collection (ACK and NACK alike)."""
    if not transcripts:
        raise ValueError("need at least one transcript")
    k = transcripts[0].m.size
    mean_n = float(np.mean([t.n_total for t in transcripts]))
    return se_from_counts(k, q, mean_n, block_error_rate(transcripts))


@dataclass
class EmpiricalCdf:
    """Right-continuous step CDF over observed sample values."""

    xs: np.ndarray
    ps: np.ndarray
    n: int

    @classmethod
    def from_samples(cls, samples, n_trials=None):
        """Build from raw samples; n_trials > len(samples) leaves mass above 1
        unassigned (samples censored at infinity, e.g. trials that never
        terminated)."""
        s = np.asarray(samples, dtype=float)
        if s.size == 0:
            raise ValueError("need at least one sample")
        n = int(n_trials) if n_trials is not None else s.size
        if n < s.size:
            raise ValueError("n_trials smaller than the number of samples")
        xs, counts = np.unique(s, return_counts=True)
        ps = np.cumsum(counts) / n
        return cls(xs=xs, ps=ps, n=n)

    def query(self, x):
        """P(X <= x)."""
        idx = int(np.searchsorted(self.xs, x, side="right")) - 1
        return 0.0 if idx < 0 else float(self.ps[idx])

    def validate(self):
        assert np.all(np.diff(self.ps) > 0) and self.ps[0] > 0, "CDF must be increasing"
        assert self.ps[-1] <= 1.0 + 1e-12, "CDF cannot exceed 1"


def dmax_for(cdf_d, bler_t):
    """Smallest x with CDF_D(x) >= 1 - BLER_T.

    A target finer than the simulation can resolve (BLER_T < 1/trials) still
    returns a value but is flagged unreliable via a warning.
    """
    if not 0.0 < bler_t < 1.0:
        raise ValueError("BLER_T must lie in (0, 1)")
    if bler_t < 1.0 / cdf_d.n:
        warnings.warn(
            f"BLER_T={bler_t:g} below 1/trials={1.0 / cdf_d.n:g}; D_MAX estimate unreliable",
            stacklevel=2,
        )
    hit = np.flatnonzero(cdf_d.ps >= 1.0 - bler_t)
    if hit.size == 0:
        raise ValueError("CDF never reaches 1 - BLER_T; cannot size D_MAX")
    return int(cdf_d.xs[hit[0]])


def cdf_and_dmax(transcripts, bler_t):
    """Empirical CDFs of D and N plus the D_MAX meeting the BLER target.

    Trials without an acknowledgment carry no finite D and only censor the
    D CDF; their codeword lengths still count in full toward the N CDF.
    """
    if not transcripts:
        raise ValueError("need at least one transcript")
    d = [t.D for t in transcripts if t.status == "ack"]
    if not d:
        raise ValueError("no acknowledged trials; D statistics undefined")
    cdf_d = EmpiricalCdf.from_samples(d, n_trials=len(transcripts))
    cdf_n = EmpiricalCdf.from_samples([t.n_total for t in transcripts])
    return cdf_d, cdf_n, dmax_for(cdf_d, bler_t)


@dataclass
class MetricsReport:
    """One sweep point: analytic predictions next to simulated aggregates."""

    snr_db: float
    modulation: str
    R: int
    H: int
    K: int
    trials: int
    se: float
    se_ub: float
    alpha: float
    bler: float
    mean_D: float
    N_min: int
    N_max: int
    dispersion: float
    en_sim: float
    en_eq41: float
    seed: int
    d_samples: np.ndarray = field(repr=False)
    n_samples: np.ndarray = field(repr=False)

    def validate(self):
        assert 0.0 <= self.bler <= 1.0
        slack = 1.0 + 3.0 / np.sqrt(self.trials)
        assert self.se <= self.se_ub * slack, (
            f"SE {self.se:.4f} above bound {self.se_ub:.4f} beyond Monte Carlo slack"
        )
        assert self.N_min <= self.N_max
        assert abs(self.dispersion - self.N_max / self.N_min) < 1e-9
        cdfs = [self.cdf_n()] + ([self.cdf_d()] if len(self.d_samples) else [])
        for cdf in cdfs:
            cdf.validate()
            assert abs(cdf.ps[-1] - 1.0) < 1e-12 or cdf.n > len(self.d_samples)

    def cdf_d(self):
        return EmpiricalCdf.from_samples(self.d_samples, n_trials=self.trials)

    def cdf_n(self):
        return EmpiricalCdf.from_samples(self.n_samples)

    def csv_row(self):
        vals = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            vals.append(v if isinstance(v, str) else f"{v:.10g}")
        return vals

    def to_json_dict(self):
        d = {col: getattr(self, col) for col in CSV_COLUMNS}
        d["seed"] = self.seed
        d["d_samples"] = [int(x) for x in self.d_samples]
        d["n_samples"] = [int(x) for x in self.n_samples]
        return d
