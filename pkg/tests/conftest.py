import numpy as np
import pytest

from aic import make_dmc, make_scheme, noise_var_of, optimize_thresholds

SNR_GRID = (-2.0, 0.0, 2.0, 4.0, 6.0)

# Reference optimized first thresholds (R=2, zero-fixed theta_0) and the
# induced contraction factors over the SNR grid; frozen from the closed-form
# Gaussian model evaluated independently of the search code.
THETA1_REF = {-2.0: 1.4188, 0.0: 1.7203, 2.0: 2.0674, 4.0: 2.4642, 6.0: 2.9172}
ALPHA_R2_REF = {-2.0: 0.6780, 0.0: 0.5448, 2.0: 0.3882, 4.0: 0.2300, 6.0: 0.1024}


@pytest.fixture(scope="session")
def qpsk():
    return make_scheme("qpsk")


@pytest.fixture(scope="session")
def grid_r2_models(qpsk):
    """Analytic R=2 induced-channel models at optimized thresholds per SNR."""
    models = {}
    for snr in SNR_GRID:
        nv = noise_var_of(snr)
        theta = optimize_thresholds(qpsk, nv, 2)
        models[snr] = make_dmc(qpsk, nv, theta)
    return models


def rng_of(seed):
    return np.random.default_rng(seed)
