"""Iterative feedback coding with quantized LLR feedback.

Transmission loop, LLR quantizer design, induced-channel analysis, Huffman
error-location coding, and a seeded Monte Carlo evaluation harness.
"""

from .analysis import (
    CSV_COLUMNS,
    EmpiricalCdf,
    MetricsReport,
    alpha,
    block_error_rate,
    cdf_and_dmax,
    dmax_for,
    empirical_se,
    expected_length,
    se_upper_bound,
)
from .channel import ChannelInstance, feedback, snr_of, transmit
from .codec import (
    EncoderConfig,
    Transcript,
    codebooks_for,
    decode,
    encode_iteration,
    encode_message,
    error_vector,
    hard_decisions,
)
from .harness import SweepConfig, cache_dmc, load_dmc, noise_var_of, point_dmc, run_sweep
from .modem import ModulationScheme, compute_llrs, make_scheme, modulate
from .qllr import (
    DmcModel,
    ThresholdVector,
    binary_entropy,
    dispersion,
    dmc_analytic_bpsk_qpsk,
    dmc_monte_carlo,
    make_dmc,
    mutual_information,
    optimize_thresholds,
    quantize,
)
from .srccode import (
    HuffmanCodebook,
    build_codebook,
    combine,
    decode_subvector,
    encode_subvector,
    source_decode,
    source_encode,
    split,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
