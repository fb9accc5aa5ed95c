"""
Training-based channel estimation.

Every transmit antenna sends one row of an orthogonal pilot block ``X``
(``N_T x tau_p``); the receiver observes ``Y = H X + N`` and forms the
LMMSE estimate of ``H`` under an i.i.d. ``CN(0, beta)`` prior. Other
estimators can be plugged into :func:`train_and_estimate` as long as they
follow the ``estimator(y, pilots, noise_var) -> ndarray`` call shape.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .beamforming import AN, CM_FD, an_beamformers, cm_fd_beamformers, spectral_efficiency
from .channel_models import ChannelMatrix, crandn

__all__ = ["PilotBlock", "EstimationResult", "make_orthogonal_pilots", "observe_training",
           "lmmse_estimate", "lmmse_mse", "lmmse_estimator", "train_and_estimate",
           "se_with_estimated_csi", "Estimator"]

Estimator = Callable[[np.ndarray, "PilotBlock", float], np.ndarray]


@dataclass(frozen=True)
class PilotBlock:
    pilots: np.ndarray
    tau_p: int
    pilot_power: float

    @property
    def n_t(self) -> int:
        return self.pilots.shape[0]


@dataclass
class EstimationResult:
    h_hat: ChannelMatrix
    mse: Optional[float] = None


def make_orthogonal_pilots(n_t: int, tau_p: int, pilot_power: float = 1.0) -> PilotBlock:
    """
    First ``n_t`` rows of a ``tau_p``-point DFT matrix, scaled to ``pilot_power``.

    The rows satisfy ``X X^H = tau_p * pilot_power * I``.
    """
    if n_t < 1:
        raise ValueError(f"n_t must be positive, got {n_t}")
    if tau_p < n_t:
        raise ValueError(f"tau_p={tau_p} < n_t={n_t}: orthogonal pilots need tau_p >= n_t")
    if not pilot_power > 0:
        raise ValueError(f"pilot_power must be positive, got {pilot_power}")
    k = np.arange(n_t)[:, None]
    s = np.arange(tau_p)[None, :]
    x = np.sqrt(pilot_power) * np.exp(-2j * np.pi * k * s / tau_p)
    return PilotBlock(x, int(tau_p), float(pilot_power))


def observe_training(h_true, pilots: PilotBlock, noise_var: float,
                     rng: np.random.Generator) -> np.ndarray:
    """Received training block ``Y = H X + N`` with ``N`` i.i.d. ``CN(0, noise_var)``."""
    h = np.asarray(getattr(h_true, "entries", h_true))
    if h.shape[1] != pilots.n_t:
        raise ValueError(f"channel has {h.shape[1]} transmit antennas, pilots {pilots.n_t}")
    if noise_var < 0:
        raise ValueError(f"noise_var must be non-negative, got {noise_var}")
    y = h @ pilots.pilots
    noise = crandn(rng, y.shape)
    if noise_var > 0:
        y = y + np.sqrt(noise_var) * noise
    return y


def _check_orthogonal(pilots: PilotBlock):
    x = pilots.pilots
    gram = x @ x.conj().T
    target = pilots.tau_p * pilots.pilot_power
    if not np.allclose(gram, target * np.eye(x.shape[0]), atol=1e-8 * max(target, 1.0)):
        raise ValueError("pilot rows are not orthogonal with X X^H = tau_p * P * I")


def lmmse_estimate(y: np.ndarray, pilots: PilotBlock, beta: float, noise_var: float,
                   h_true=None) -> EstimationResult:
    """
    LMMSE channel estimate for orthogonal pilots and an i.i.d. Gaussian prior.

    ``H_hat = c / (tau_p P) * Y X^H`` with shrinkage
    ``c = beta tau_p P / (beta tau_p P + noise_var)``.

    Parameters
    ----------
    y : ndarray
        ``N_R x tau_p`` received training block.
    pilots : PilotBlock
    beta : float
        Prior variance of each channel entry.
    noise_var : float
        Receiver noise variance.
    h_true : ChannelMatrix or ndarray, optional
        When given, the per-entry mean squared error is reported.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    _check_orthogonal(pilots)
    energy = pilots.tau_p * pilots.pilot_power
    shrink = beta * energy / (beta * energy + noise_var)
    h_hat = (shrink / energy) * (y @ pilots.pilots.conj().T)
    mse = None
    if h_true is not None:
        truth = np.asarray(getattr(h_true, "entries", h_true))
        mse = float(np.mean(np.abs(h_hat - truth) ** 2))
    band = getattr(h_true, "band_tag", "mu_wave")
    return EstimationResult(ChannelMatrix(h_hat, band), mse)


def lmmse_mse(beta: float, tau_p: int, pilot_power: float, noise_var: float) -> float:
    """Per-entry MSE of the LMMSE estimate: ``beta s2 / (beta tau_p P + s2)``."""
    return beta * noise_var / (beta * tau_p * pilot_power + noise_var)


def lmmse_estimator(beta: float) -> Estimator:
    """LMMSE as a pluggable estimator with a known prior variance."""
    def estimate(y, pilots, noise_var):
        return lmmse_estimate(y, pilots, beta, noise_var).h_hat.entries
    return estimate


def train_and_estimate(h_true, pilots: PilotBlock, noise_var: float, rng: np.random.Generator,
                       estimator: Estimator) -> EstimationResult:
    """Run one training phase over ``h_true`` and estimate it with ``estimator``."""
    y = observe_training(h_true, pilots, noise_var, rng)
    h_hat = np.asarray(estimator(y, pilots, noise_var))
    truth = np.asarray(getattr(h_true, "entries", h_true))
    return EstimationResult(ChannelMatrix(h_hat, getattr(h_true, "band_tag", "mu_wave")),
                            float(np.mean(np.abs(h_hat - truth) ** 2)))


def se_with_estimated_csi(h_true, h_hat, method: str, m: int, snr: float) -> float:
    """
    Rate over the true channel using beamformers designed from an estimate.

    For ``cm_fd`` the beamformers come from the SVD of ``h_hat``; for
    ``an_steering`` ``h_hat`` must be a flattened path list.
    """
    if method == CM_FD:
        bf = cm_fd_beamformers(h_hat, m)
    elif method == AN:
        truth = np.asarray(getattr(h_true, "entries", h_true))
        bf = an_beamformers(h_hat, m, truth.shape[1], truth.shape[0])
    else:
        raise ValueError(f"unknown beamforming method {method!r}")
    return spectral_efficiency(h_true, bf, snr)
