"""
Random MIMO channel generators.

``gen_mu_wave`` draws the rich-scattering channel ``sqrt(beta) * G`` with
i.i.d. CN(0, 1) entries in ``G``. ``gen_mm_wave`` draws the clustered
channel: ``N_cl`` clusters of ``N_ray`` single-bounce rays, each a rank-1
term ``alpha * sqrt(L(r)) * a_r(aoa) a_t(aod)^H`` scaled by
``gamma = sqrt(N_T N_R / (N_cl N_ray))``, plus an optional direct path.
"""

from dataclasses import dataclass, field

import numpy as np

from .array_geometry import ula_matrix
from .propagation import (LosModel, MmWaveScenario, db_to_linear, draw_los,
                          get_scenario, los_counterpart, mm_wave_attenuation_db)

__all__ = ["ChannelMatrix", "PathComponent", "ClusterConfig", "MmWaveChannelDraw",
           "gen_mu_wave", "gen_mm_wave", "flatten_paths", "reconstruct",
           "crandn"]

MU_WAVE = "mu_wave"
MM_WAVE = "mm_wave"


def crandn(rng: np.random.Generator, shape) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


@dataclass
class ChannelMatrix:
    """A channel realization ``H`` (``N_R x N_T``) with its band and provenance.

    ``large_scale_gain`` is the linear power gain that :meth:`normalized`
    divides out, so that a unit transmit SNR means unit received SNR per
    receive antenna.
    """
    entries: np.ndarray
    band_tag: str
    large_scale_gain: float = 1.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2:
            raise ValueError(f"channel must be 2-D, got shape {self.entries.shape}")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("channel has non-finite entries")

    @property
    def n_r(self) -> int:
        return self.entries.shape[0]

    @property
    def n_t(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def normalized(self) -> "ChannelMatrix":
        """Copy with the large-scale gain removed."""
        return ChannelMatrix(self.entries / np.sqrt(self.large_scale_gain), self.band_tag,
                             1.0, dict(self.metadata))


@dataclass(frozen=True)
class PathComponent:
    """One propagation ray.

    ``attenuation_linear`` is the raw linear power gain ``L(r)``; the square
    root is applied when the ray is added to the channel.
    """
    gain: complex
    attenuation_linear: float
    aod: float
    aoa: float
    is_los: bool = False


@dataclass(frozen=True)
class ClusterConfig:
    """Parameters of the clustered mm-wave generator.

    ``path_length_model`` is ``"fixed"`` (every ray travels the link
    distance) or ``"excess"`` (distance times U(1, 1.5)).
    ``unit_attenuation`` and ``unit_gains`` force ``L = 1`` and ``alpha = 1``;
    they exist for normalization checks.
    """
    n_cl: int = 5
    n_ray: int = 10
    ray_angle_spread_rad: float = float(np.deg2rad(5.0))
    scenario: MmWaveScenario = field(default_factory=lambda: get_scenario("umi-open-square-nlos"))
    los_model: LosModel = field(default_factory=LosModel)
    link_distance_m: float = 50.0
    path_length_model: str = "fixed"
    unit_attenuation: bool = False
    unit_gains: bool = False

    def __post_init__(self):
        if int(self.n_cl) != self.n_cl or self.n_cl < 1:
            raise ValueError(f"n_cl must be a positive integer, got {self.n_cl}")
        if int(self.n_ray) != self.n_ray or self.n_ray < 1:
            raise ValueError(f"n_ray must be a positive integer, got {self.n_ray}")
        if not self.ray_angle_spread_rad > 0:
            raise ValueError("ray_angle_spread_rad must be positive")
        if not self.link_distance_m > 0:
            raise ValueError("link_distance_m must be positive")
        if self.path_length_model not in ("fixed", "excess"):
            raise ValueError(f"path_length_model must be 'fixed' or 'excess', "
                             f"got {self.path_length_model!r}")

    @property
    def gamma_paths(self) -> int:
        return self.n_cl * self.n_ray

    def reference_gain(self) -> float:
        """Deterministic linear attenuation at the link distance (no shadowing)."""
        if self.unit_attenuation:
            return 1.0
        return float(db_to_linear(mm_wave_attenuation_db(self.link_distance_m, self.scenario)))


@dataclass
class MmWaveChannelDraw:
    """A clustered-channel realization with its ray list (strongest first)."""
    matrix: ChannelMatrix
    paths: list
    gamma: float
    n_cl: int
    n_ray: int

    @property
    def has_los(self) -> bool:
        return any(p.is_los for p in self.paths)


def gen_mu_wave(n_r: int, n_t: int, beta: float, rng: np.random.Generator) -> ChannelMatrix:
    """
    Rich-scattering channel with i.i.d. ``CN(0, beta)`` entries.

    Parameters
    ----------
    n_r, n_t : int
        Receive and transmit antenna counts.
    beta : float
        Linear large-scale gain (path loss times shadowing), positive.
    rng : np.random.Generator
        Random stream owned by the caller.

    Returns
    -------
    ChannelMatrix
        With ``large_scale_gain = beta``.
    """
    if n_r < 1 or n_t < 1:
        raise ValueError(f"antenna counts must be positive, got {n_r}x{n_t}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    g = crandn(rng, (n_r, n_t))
    return ChannelMatrix(np.sqrt(beta) * g, MU_WAVE, float(beta), {"beta": float(beta)})


def _truncated_laplace(rng, centers, spread, size):
    # Laplacian with std `spread`, redrawn until the angle lies in [-pi/2, pi/2]
    scale = spread / np.sqrt(2.0)
    out = centers[:, None] + rng.laplace(0.0, scale, size)
    bad = np.abs(out) > np.pi / 2
    while np.any(bad):
        redraw = rng.laplace(0.0, scale, int(bad.sum()))
        out[bad] = np.broadcast_to(centers[:, None], out.shape)[bad] + redraw
        bad = np.abs(out) > np.pi / 2
    return out


def _power_key(path: PathComponent, gamma_paths: int) -> float:
    # received-power contribution relative to gamma; the direct path is not gamma-scaled
    w = abs(path.gain) ** 2 * path.attenuation_linear
    return w * gamma_paths if path.is_los else w


def gen_mm_wave(n_r: int, n_t: int, cfg: ClusterConfig,
                rng: np.random.Generator) -> MmWaveChannelDraw:
    """
    Clustered mm-wave channel with an optional direct (LOS) path.

    Cluster centre angles are uniform on ``[-pi/2, pi/2]``; ray angles are
    truncated Laplacian around them. Gains are ``CN(0, 1)``. Each ray gets its
    own shadowing draw.

    Returns
    -------
    MmWaveChannelDraw
        The matrix carries ``large_scale_gain = cfg.reference_gain()``.
    """
    if n_r < 1 or n_t < 1:
        raise ValueError(f"antenna counts must be positive, got {n_r}x{n_t}")
    n_cl, n_ray = int(cfg.n_cl), int(cfg.n_ray)
    shape = (n_cl, n_ray)
    gamma = np.sqrt(n_t * n_r / (n_cl * n_ray))

    los_on = draw_los(cfg.link_distance_m, cfg.los_model, rng)

    aod_c = rng.uniform(-np.pi / 2, np.pi / 2, n_cl)
    aoa_c = rng.uniform(-np.pi / 2, np.pi / 2, n_cl)
    aod = _truncated_laplace(rng, aod_c, cfg.ray_angle_spread_rad, shape).ravel()
    aoa = _truncated_laplace(rng, aoa_c, cfg.ray_angle_spread_rad, shape).ravel()

    alpha = crandn(rng, n_cl * n_ray)
    if cfg.unit_gains:
        alpha = np.ones(n_cl * n_ray, dtype=complex)

    r = np.full(n_cl * n_ray, float(cfg.link_distance_m))
    if cfg.path_length_model == "excess":
        r = r * rng.uniform(1.0, 1.5, n_cl * n_ray)
    shadow = rng.standard_normal(n_cl * n_ray)
    if cfg.unit_attenuation:
        atten = np.ones(n_cl * n_ray)
    else:
        atten = db_to_linear(mm_wave_attenuation_db(r, cfg.scenario, shadow))

    paths = [PathComponent(complex(alpha[k]), float(atten[k]), float(aod[k]), float(aoa[k]))
             for k in range(n_cl * n_ray)]

    if los_on:
        theta = rng.uniform(0.0, 2 * np.pi)
        los_aod, los_aoa = rng.uniform(-np.pi / 2, np.pi / 2, 2)
        los_z = rng.standard_normal()
        if cfg.unit_attenuation:
            los_atten = 1.0
        else:
            los_atten = float(db_to_linear(mm_wave_attenuation_db(
                cfg.link_distance_m, los_counterpart(cfg.scenario), los_z)))
        paths.append(PathComponent(complex(np.exp(1j * theta)), los_atten,
                                   float(los_aod), float(los_aoa), is_los=True))

    paths.sort(key=lambda p: _power_key(p, n_cl * n_ray), reverse=True)
    draw = MmWaveChannelDraw(None, paths, float(gamma), n_cl, n_ray)
    entries = reconstruct(flatten_paths(draw), gamma, n_r, n_t)
    draw.matrix = ChannelMatrix(entries, MM_WAVE, cfg.reference_gain(),
                                {"n_cl": n_cl, "n_ray": n_ray, "los": los_on,
                                 "scenario": cfg.scenario.name})
    return draw


def flatten_paths(draw: MmWaveChannelDraw) -> list:
    """
    Lump each ray's attenuation (and the LOS scaling) into one coefficient.

    Returns a list of ``(alpha_i, aoa_i, aod_i)`` such that
    ``gamma * sum(alpha_i a_r(aoa_i) a_t(aod_i)^H)`` is the channel, in the
    draw's strongest-first order.
    """
    n_paths = draw.n_cl * draw.n_ray
    out = []
    for p in draw.paths:
        coef = p.gain * np.sqrt(p.attenuation_linear)
        if p.is_los:
            # sqrt(N_T N_R L) e^{j theta} == gamma * sqrt(N_cl N_ray L) e^{j theta}
            coef *= np.sqrt(n_paths)
        out.append((complex(coef), p.aoa, p.aod))
    return out


def reconstruct(flat_paths, gamma: float, n_r: int, n_t: int) -> np.ndarray:
    """Rebuild ``gamma * A_r diag(alpha) A_t^H`` from a flattened path list."""
    if not flat_paths:
        return np.zeros((n_r, n_t), dtype=complex)
    alpha = np.array([p[0] for p in flat_paths])
    a_r = ula_matrix([p[1] for p in flat_paths], n_r)
    a_t = ula_matrix([p[2] for p in flat_paths], n_t)
    return gamma * (a_r * alpha[None, :]) @ a_t.conj().T

