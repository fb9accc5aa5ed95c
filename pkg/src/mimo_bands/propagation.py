"""
Large-scale gain models.

Two families live here:

* the sub-6 GHz ("mu-wave") three-slope path loss built on a COST-Hata style
  offset, with log-normal shadowing applied once per link;
* the mm-wave ABG-style attenuation with per-path shadowing and a scenario
  registry holding the eight UMi/InH parameter rows, plus the LOS indicator.

All values in dB are gains (negative numbers for losses).
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT", "MuWaveLinkParams", "MmWaveScenario", "LosModel",
    "SCENARIOS", "get_scenario", "los_counterpart", "cost_hata_offset",
    "mu_wave_pathloss_db", "mu_wave_beta", "mm_wave_attenuation_db",
    "draw_los", "default_los_probability", "db_to_linear", "linear_to_db",
]

SPEED_OF_LIGHT = 299_792_458.0


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value)


@dataclass(frozen=True)
class MuWaveLinkParams:
    """Inputs of the three-slope path loss model.

    Frequencies in MHz, heights and breakpoints in meters.
    """
    f_mhz: float = 1900.0
    h_t_m: float = 15.0
    h_r_m: float = 1.65
    d0_m: float = 50.0
    d1_m: float = 100.0
    sigma_sh_db: float = 8.0

    def __post_init__(self):
        if not self.f_mhz > 0:
            raise ValueError(f"f_mhz must be positive, got {self.f_mhz}")
        if not (self.h_t_m > 0 and self.h_r_m > 0):
            raise ValueError("h_t_m and h_r_m must be positive")
        if not self.d0_m > 0:
            raise ValueError(f"d0_m must be positive, got {self.d0_m}")
        if not self.d0_m < self.d1_m:
            raise ValueError(f"d0_m must be smaller than d1_m, got d0_m={self.d0_m}, "
                             f"d1_m={self.d1_m}")
        if not self.sigma_sh_db >= 0:
            raise ValueError(f"sigma_sh_db must be non-negative, got {self.sigma_sh_db}")


@dataclass(frozen=True)
class MmWaveScenario:
    """One row of the mm-wave path loss parameter table, plus the carrier.

    ``f0_ghz`` only matters when ``b != 0``.
    """
    name: str
    n: float
    sigma_db: float
    b: float = 0.0
    f0_ghz: Optional[float] = None
    f_ghz: float = 73.0

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError(f"{self.name}: n must be positive, got {self.n}")
        if not self.sigma_db >= 0:
            raise ValueError(f"{self.name}: sigma_db must be non-negative")
        if not 0 <= self.b < 1:
            raise ValueError(f"{self.name}: b must lie in [0, 1), got {self.b}")
        if self.b != 0 and not (self.f0_ghz and self.f0_ghz > 0):
            raise ValueError(f"{self.name}: f0_ghz is required when b != 0")
        if not self.f_ghz > 0:
            raise ValueError(f"{self.name}: f_ghz must be positive")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / (self.f_ghz * 1e9)

    @property
    def slope_factor(self) -> float:
        """The frequency-dependent bracket ``1 - b + b*f/f0``."""
        if self.b == 0:
            return 1.0
        return 1.0 - self.b + self.b * self.f_ghz / self.f0_ghz


SCENARIOS = {
    "umi-street-canyon-los": MmWaveScenario("umi-street-canyon-los", 1.98, 3.1),
    "umi-street-canyon-nlos": MmWaveScenario("umi-street-canyon-nlos", 3.19, 8.2),
    "umi-open-square-los": MmWaveScenario("umi-open-square-los", 1.85, 4.2),
    "umi-open-square-nlos": MmWaveScenario("umi-open-square-nlos", 2.89, 7.1),
    "inh-indoor-office-los": MmWaveScenario("inh-indoor-office-los", 1.73, 3.02),
    "inh-indoor-office-nlos": MmWaveScenario("inh-indoor-office-nlos", 3.19, 8.29,
                                             b=0.06, f0_ghz=24.2),
    "inh-shopping-mall-los": MmWaveScenario("inh-shopping-mall-los", 1.73, 2.01),
    "inh-shopping-mall-nlos": MmWaveScenario("inh-shopping-mall-nlos", 2.59, 7.40,
                                             b=0.01, f0_ghz=39.5),
}


def get_scenario(name: str, f_ghz: Optional[float] = None, **overrides) -> MmWaveScenario:
    """Look up a registry scenario, optionally changing carrier or parameters."""
    try:
        scen = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None
    if f_ghz is not None:
        overrides["f_ghz"] = f_ghz
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(scen, **overrides) if overrides else scen


def los_counterpart(scen: MmWaveScenario) -> MmWaveScenario:
    """LOS row of the same environment, used for the direct-path attenuation.

    Scenarios not in the registry (or already LOS) are returned unchanged.
    """
    if scen.name.endswith("-nlos"):
        name = scen.name[:-len("-nlos")] + "-los"
        if name in SCENARIOS:
            return replace(SCENARIOS[name], f_ghz=scen.f_ghz)
    return scen


def cost_hata_offset(params: MuWaveLinkParams) -> float:
    """
    Frequency/height dependent offset ``L`` (dB) of the three-slope model.

    ``L = 46.3 + 33.9 log10 f - 13.82 log10 hT - (1.1 log10 f - 0.7) hR
    + 1.56 log10 f - 0.8`` with ``f`` in MHz and heights in meters.
    """
    lf = np.log10(params.f_mhz)
    return float(46.3 + 33.9 * lf - 13.82 * np.log10(params.h_t_m)
                 - (1.1 * lf - 0.7) * params.h_r_m + 1.56 * lf - 0.8)


def mu_wave_pathloss_db(d_m: float, params: MuWaveLinkParams) -> float:
    """Three-slope path loss (as a gain in dB) at distance ``d_m`` meters."""
    if not d_m > 0:
        raise ValueError(f"distance must be positive, got {d_m}")
    big_l = cost_hata_offset(params)
    d0, d1 = params.d0_m, params.d1_m
    if d_m > d1:
        return float(-big_l - 35.0 * np.log10(d_m))
    if d_m > d0:
        return float(-big_l - 15.0 * np.log10(d1) - 20.0 * np.log10(d_m))
    return float(-big_l - 15.0 * np.log10(d1) - 20.0 * np.log10(d0))


def mu_wave_beta(d_m: float, params: MuWaveLinkParams, rng: np.random.Generator) -> float:
    """Linear large-scale gain: path loss times one log-normal shadowing draw."""
    pl_db = mu_wave_pathloss_db(d_m, params)
    z = rng.standard_normal()
    return float(10.0 ** (pl_db / 10.0) * 10.0 ** (0.1 * params.sigma_sh_db * z))


def mm_wave_attenuation_db(r_m, scen: MmWaveScenario, shadow_z=0.0):
    """
    ABG-style attenuation (dB gain) over a path of length ``r_m`` meters.

    Returns ``-20 log10(4 pi / lambda) - 10 n (1 - b + b f/f0) log10(r)
    - sigma * shadow_z``. Accepts arrays for ``r_m`` and ``shadow_z``.
    """
    r = np.asarray(r_m, dtype=float)
    if np.any(~(r > 0)):
        raise ValueError("path length must be positive")
    fspl = 20.0 * np.log10(4.0 * np.pi / scen.wavelength_m)
    out = -fspl - 10.0 * scen.n * scen.slope_factor * np.log10(r) \
        - scen.sigma_db * np.asarray(shadow_z, dtype=float)
    return float(out) if np.ndim(out) == 0 else out


def default_los_probability(d_m: float) -> float:
    """UMi-style LOS probability ``min(1, 20/d)(1 - e^{-d/39}) + e^{-d/39}``.

    Not taken from the channel-model literature this package reproduces;
    it is only a sensible default.
    """
    e = np.exp(-d_m / 39.0)
    return float(min(1.0, 20.0 / d_m) * (1.0 - e) + e)


@dataclass(frozen=True)
class LosModel:
    """LOS indicator law: ``always``, ``never`` or ``bernoulli`` with ``p(d)``."""
    mode: str = "bernoulli"
    probability: Callable[[float], float] = default_los_probability

    def __post_init__(self):
        if self.mode not in ("always", "never", "bernoulli"):
            raise ValueError(f"LOS mode must be always/never/bernoulli, got {self.mode!r}")


def draw_los(d_m: float, model: LosModel, rng: np.random.Generator) -> bool:
    """Draw the LOS indicator for a link of length ``d_m``.

    The deterministic modes consume no randomness.
    """
    if not d_m > 0:
        raise ValueError(f"distance must be positive, got {d_m}")
    if model.mode == "always":
        return True
    if model.mode == "never":
        return False
    p = model.probability(d_m)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"LOS probability out of [0, 1] at d={d_m}: {p}")
    return bool(rng.random() < p)
