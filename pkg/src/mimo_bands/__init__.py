"""Massive MIMO channel simulation at sub-6 GHz and mm-wave frequencies."""

__version__ = "0.1.0"

from .array_geometry import coherence, ula_response
from .beamforming import an_beamformers, cm_fd_beamformers, spectral_efficiency
from .channel_models import ChannelMatrix, ClusterConfig, flatten_paths, gen_mm_wave, gen_mu_wave
from .estimation import lmmse_estimate, make_orthogonal_pilots, observe_training
from .experiments import ExperimentConfig, run_study, write_csv
from .metrics import eta_metric, numerical_rank, select_best_antenna
from .propagation import SCENARIOS, MuWaveLinkParams, get_scenario

__all__ = [
    "coherence", "ula_response", "an_beamformers", "cm_fd_beamformers", "spectral_efficiency",
    "ChannelMatrix", "ClusterConfig", "flatten_paths", "gen_mm_wave", "gen_mu_wave",
    "lmmse_estimate", "make_orthogonal_pilots", "observe_training", "ExperimentConfig",
    "run_study", "write_csv", "eta_metric", "numerical_rank", "select_best_antenna",
    "SCENARIOS", "MuWaveLinkParams", "get_scenario",
]
