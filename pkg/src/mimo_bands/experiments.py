"""
Monte-Carlo harness for the figure-style studies.

Each study sweeps an antenna grid. At every grid point ``n_trials`` channels
are drawn, each from its own random stream derived from
``(master_seed, study, grid index, trial index)``, so results do not depend
on how trials are spread over worker processes. Within a trial the same
channel is reused across SNR values, stream counts and methods.

Studies
-------
fig2_cm_vs_an
    mm-wave rate of channel-matched vs. beam-steering transceivers.
fig3_multiplexing
    channel-matched rate for mu-wave and mm-wave channels vs. stream count.
fig4_muwave_csi
    rate with perfect CSI vs. an LMMSE estimate from orthogonal pilots.
fig6_eta
    mean entry-imbalance ratio per band and array size.
"""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .beamforming import (AN, CM_FD, RankDeficiencyError, an_beamformers, cm_fd_beamformers,
                          spectral_efficiency)
from .channel_models import MM_WAVE, MU_WAVE, ClusterConfig, flatten_paths, gen_mm_wave, gen_mu_wave
from .estimation import make_orthogonal_pilots, lmmse_estimator, train_and_estimate
from .metrics import eta_metric
from .propagation import MuWaveLinkParams, mu_wave_beta

__all__ = ["STUDIES", "ExperimentConfig", "CurvePoint", "StudyError", "run_study",
           "write_csv", "read_csv", "trial_rng", "CSV_HEADER"]

log = logging.getLogger(__name__)

STUDIES = ("fig2_cm_vs_an", "fig3_multiplexing", "fig4_muwave_csi", "fig6_eta")
CSV_HEADER = ("study", "n_r", "n_t", "m", "method", "snr_db", "se_mean", "se_std_err",
              "n_trials")
FULL = "full"


class StudyError(RuntimeError):
    """A study failed at a specific grid point."""


@dataclass
class ExperimentConfig:
    study: str
    antennas: list = field(default_factory=lambda: [(16, 64), (64, 256)])
    m_values: list = field(default_factory=lambda: [1, 3])
    snr_db: list = field(default_factory=lambda: [-10.0, 0.0, 10.0, 20.0])
    n_trials: int = 100
    master_seed: int = 0
    bands: list = field(default_factory=lambda: [MU_WAVE, MM_WAVE])
    mu: MuWaveLinkParams = field(default_factory=MuWaveLinkParams)
    mu_distance_m: float = 200.0
    mm: ClusterConfig = field(default_factory=ClusterConfig)
    allow_rank_deficient: bool = False
    training_snr_db: Optional[float] = None
    pilot_power: float = 1.0
    csi_band: str = MU_WAVE
    estimator: Optional[Callable] = None

    def __post_init__(self):
        if self.study not in STUDIES:
            raise ValueError(f"study must be one of {', '.join(STUDIES)}, got {self.study!r}")
        if not self.antennas:
            raise ValueError("antennas grid is empty")
        for n_r, n_t in self.antennas:
            if int(n_r) < 1 or int(n_t) < 1:
                raise ValueError(f"antennas: invalid size {n_r}x{n_t}")
        if self.study != "fig6_eta":
            if not self.m_values:
                raise ValueError("m_values is empty")
            if not self.snr_db:
                raise ValueError("snr_db grid is empty")
        for m in self.m_values:
            if m != FULL and int(m) < 1:
                raise ValueError(f"m_values: invalid stream count {m!r}")
        if int(self.n_trials) < 1:
            raise ValueError(f"n_trials must be at least 1, got {self.n_trials}")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        for band in self.bands:
            if band not in (MU_WAVE, MM_WAVE):
                raise ValueError(f"bands: unknown band {band!r}")
        if not self.bands:
            raise ValueError("bands is empty")
        if not self.mu_distance_m > 0:
            raise ValueError("mu_distance_m must be positive")
        if not self.pilot_power > 0:
            raise ValueError("pilot_power must be positive")
        if self.csi_band not in (MU_WAVE, MM_WAVE):
            raise ValueError(f"csi_band: unknown band {self.csi_band!r}")


@dataclass(frozen=True)
class CurvePoint:
    study: str
    n_r: int
    n_t: int
    m: int
    method: str
    snr_db: Optional[float]
    se_mean: float
    se_std_err: float
    n_trials: int


def trial_rng(master_seed: int, study: str, grid_index: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    seq = np.random.SeedSequence(int(master_seed),
                                 spawn_key=(STUDIES.index(study), grid_index, trial))
    return np.random.Generator(np.random.Philox(seq))


def _resolve_m(m, n_r, n_t):
    return min(n_r, n_t) if m == FULL else int(m)


def _grid(cfg: ExperimentConfig):
    """Grid points as (band, n_r, n_t)."""
    if cfg.study == "fig2_cm_vs_an":
        bands = [MM_WAVE]
    elif cfg.study == "fig4_muwave_csi":
        bands = [cfg.csi_band]
    else:
        bands = list(cfg.bands)
    return [(band, int(n_r), int(n_t)) for band in bands for n_r, n_t in cfg.antennas]


def _labels(cfg, band, n_r, n_t):
    """Output slots of one trial: (m, method, snr_db)."""
    if cfg.study == "fig6_eta":
        return [(0, band, None)]
    ms = [_resolve_m(m, n_r, n_t) for m in cfg.m_values]
    if cfg.study == "fig2_cm_vs_an":
        methods = [CM_FD, AN]
    elif cfg.study == "fig3_multiplexing":
        methods = [f"{band}_{CM_FD}"]
    else:
        methods = ["perfect_csi"]
        if _estimator(cfg, band) is not None:
            methods.append(_estimator_label(cfg))
    return [(m, meth, s) for m in ms for meth in methods for s in cfg.snr_db]


def _estimator(cfg, band):
    # LMMSE needs the i.i.d. prior of the rich-scattering channel; other
    # bands only get an estimated-CSI curve from a plugged-in estimator
    if cfg.estimator is not None:
        return cfg.estimator
    return lmmse_estimator(1.0) if band == MU_WAVE else None


def _estimator_label(cfg):
    if cfg.estimator is None:
        return "lmmse_csi"
    return f"{getattr(cfg.estimator, '__name__', 'custom')}_csi"


def _draw(cfg, band, n_r, n_t, rng):
    if band == MU_WAVE:
        beta = mu_wave_beta(cfg.mu_distance_m, cfg.mu, rng)
        return gen_mu_wave(n_r, n_t, beta, rng), None
    draw = gen_mm_wave(n_r, n_t, cfg.mm, rng)
    return draw.matrix, draw


def _one_trial(cfg, band, n_r, n_t, rng):
    h, draw = _draw(cfg, band, n_r, n_t, rng)
    if cfg.study == "fig6_eta":
        return [eta_metric(h)]
    h = h.normalized()
    out = []
    ms = [_resolve_m(m, n_r, n_t) for m in cfg.m_values]
    strict = not cfg.allow_rank_deficient
    if cfg.study == "fig2_cm_vs_an":
        paths = flatten_paths(draw)
        for m in ms:
            bfs = [cm_fd_beamformers(h, m, strict_rank=strict), an_beamformers(paths, m, n_t, n_r)]
            for bf in bfs:
                out.extend(spectral_efficiency(h, bf, 10 ** (s / 10)) for s in cfg.snr_db)
    elif cfg.study == "fig3_multiplexing":
        for m in ms:
            bf = cm_fd_beamformers(h, m, strict_rank=strict)
            out.extend(spectral_efficiency(h, bf, 10 ** (s / 10)) for s in cfg.snr_db)
    else:
        pilots = make_orthogonal_pilots(n_t, n_t, cfg.pilot_power)
        estimator = _estimator(cfg, band)
        estimates = []
        for s in (cfg.snr_db if estimator is not None else []):
            train_db = s if cfg.training_snr_db is None else cfg.training_snr_db
            noise_var = cfg.pilot_power / 10 ** (train_db / 10)
            estimates.append(train_and_estimate(h, pilots, noise_var, rng, estimator).h_hat)
        for m in ms:
            perfect = cm_fd_beamformers(h, m, strict_rank=strict)
            out.extend(spectral_efficiency(h, perfect, 10 ** (s / 10)) for s in cfg.snr_db)
            for s, h_hat in zip(cfg.snr_db, estimates):
                bf = cm_fd_beamformers(h_hat, m, strict_rank=strict)
                out.append(spectral_efficiency(h, bf, 10 ** (s / 10)))
    return out


def _run_chunk(args):
    cfg, grid_index, (band, n_r, n_t), trials = args
    rows = []
    for t in trials:
        rng = trial_rng(cfg.master_seed, cfg.study, grid_index, t)
        try:
            rows.append(_one_trial(cfg, band, n_r, n_t, rng))
        except (RankDeficiencyError, np.linalg.LinAlgError) as exc:
            raise StudyError(f"{cfg.study}: grid point {grid_index} ({band}, n_r={n_r}, "
                             f"n_t={n_t}), trial {t}: {exc}") from exc
    return rows


def _chunks(n, k):
    k = max(1, min(k, n))
    bounds = np.linspace(0, n, k + 1).astype(int)
    return [range(bounds[i], bounds[i + 1]) for i in range(k) if bounds[i] < bounds[i + 1]]


def run_study(cfg: ExperimentConfig, workers: int = 1) -> list:
    """
    Run every grid point of ``cfg`` and summarize each output slot.

    Parameters
    ----------
    cfg : ExperimentConfig
    workers : int
        Process count; 1 runs in the calling process. The result does not
        depend on it.

    Returns
    -------
    list of CurvePoint
        Ordered by grid point, then stream count, method and SNR.
    """
    grid = _grid(cfg)
    n = int(cfg.n_trials)
    points = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for gi, key in enumerate(grid):
            band, n_r, n_t = key
            log.info("%s: grid point %d/%d (%s %dx%d), %d trials", cfg.study, gi + 1,
                     len(grid), band, n_r, n_t, n)
            jobs = [(cfg, gi, key, chunk) for chunk in _chunks(n, workers)]
            if pool is None:
                parts = [_run_chunk(j) for j in jobs]
            else:
                parts = list(pool.map(_run_chunk, jobs))
            values = np.array([row for part in parts for row in part], dtype=float)
            mean = values.mean(axis=0)
            if n > 1:
                err = values.std(axis=0, ddof=1) / np.sqrt(n)
            else:
                err = np.zeros_like(mean)
            for k, (m, method, snr) in enumerate(_labels(cfg, band, n_r, n_t)):
                points.append(CurvePoint(cfg.study, n_r, n_t, m, method, snr,
                                         float(mean[k]), float(err[k]), n))
    finally:
        if pool is not None:
            pool.shutdown()
    return points


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.16e}"
    return str(x)


def write_csv(points, path, comments=()) -> None:
    """
    Write curve points as CSV (UTF-8, LF line endings).

    ``comments`` are emitted first, each prefixed with ``# ``.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for line in comments:
                fh.write(f"# {line}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for p in points:
                writer.writerow([_fmt(getattr(p, name)) for name in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> list:
    """Parse a file written by :func:`write_csv`, skipping comment lines."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    out = []
    for row in reader:
        out.append(CurvePoint(
            study=row["study"], n_r=int(row["n_r"]), n_t=int(row["n_t"]), m=int(row["m"]),
            method=row["method"],
            snr_db=float(row["snr_db"]) if row["snr_db"] else None,
            se_mean=float(row["se_mean"]), se_std_err=float(row["se_std_err"]),
            n_trials=int(row["n_trials"])))
    return out
