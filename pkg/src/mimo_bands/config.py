"""
Experiment config files.

A config is an INI-style file with one section named after the study, e.g.::

    # CM-FD vs beam steering sweep
    [fig2_cm_vs_an]
    n_trials = 500
    master_seed = 7
    antennas = 16x64, 64x256
    m_values = 1, 3
    snr_db = -10, 0, 10
    mm_scenario = umi-open-square-nlos

Lists are comma separated. Unknown keys are rejected.
"""

import configparser
from dataclasses import dataclass

import numpy as np

from .channel_models import ClusterConfig
from .experiments import FULL, STUDIES, ExperimentConfig
from .propagation import LosModel, MuWaveLinkParams, get_scenario

__all__ = ["ConfigError", "LoadedConfig", "load_config", "parse_config", "KEYS"]


class ConfigError(ValueError):
    """Invalid config file or override."""


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _m_list(text):
    out = []
    for v in text.split(","):
        v = v.strip()
        if v:
            out.append(FULL if v == FULL else int(v))
    return out


def _antennas(text):
    out = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        n_r, sep, n_t = item.partition("x")
        if not sep:
            raise ValueError(f"expected NRxNT, got {item!r}")
        out.append((int(n_r), int(n_t)))
    return out


def _str_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _opt_float(text):
    return None if text.strip().lower() in ("", "none") else float(text)


# key -> parser
KEYS = {
    "n_trials": int,
    "master_seed": int,
    "antennas": _antennas,
    "m_values": _m_list,
    "snr_db": _float_list,
    "bands": _str_list,
    "allow_rank_deficient": _bool,
    "training_snr_db": _opt_float,
    "pilot_power": float,
    "csi_band": str,
    "mu_f_mhz": float,
    "mu_h_t_m": float,
    "mu_h_r_m": float,
    "mu_d0_m": float,
    "mu_d1_m": float,
    "mu_sigma_sh_db": float,
    "mu_distance_m": float,
    "mm_scenario": str,
    "mm_f_ghz": float,
    "mm_n_cl": int,
    "mm_n_ray": int,
    "mm_ray_spread_deg": float,
    "mm_los": str,
    "mm_distance_m": float,
    "mm_path_length": str,
    "mm_unit_attenuation": _bool,
    "mm_unit_gains": _bool,
    "scenario_n": float,
    "scenario_sigma_db": float,
    "scenario_b": float,
    "scenario_f0_ghz": float,
}


@dataclass
class LoadedConfig:
    config: ExperimentConfig
    values: dict

    def echo_lines(self):
        """``key=value`` lines describing the effective config."""
        lines = [f"study={self.config.study}"]
        lines.extend(f"{k}={v}" for k, v in sorted(self.values.items()))
        return lines


def _parse_values(raw: dict) -> dict:
    values = {}
    for key, text in raw.items():
        if key not in KEYS:
            raise ConfigError(f"{key}: unknown key")
        try:
            values[key] = KEYS[key](text)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    return values


def _build(study: str, v: dict) -> ExperimentConfig:
    mu_fields = {"mu_f_mhz": "f_mhz", "mu_h_t_m": "h_t_m", "mu_h_r_m": "h_r_m",
                 "mu_d0_m": "d0_m", "mu_d1_m": "d1_m", "mu_sigma_sh_db": "sigma_sh_db"}
    mu_kwargs = {name: v[key] for key, name in mu_fields.items() if key in v}
    d0 = mu_kwargs.get("d0_m", MuWaveLinkParams.d0_m)
    d1 = mu_kwargs.get("d1_m", MuWaveLinkParams.d1_m)
    if not d0 < d1:
        raise ConfigError(f"mu_d0_m: must be smaller than mu_d1_m (got {d0} >= {d1})")
    try:
        mu = MuWaveLinkParams(**mu_kwargs)
    except ValueError as exc:
        raise ConfigError(f"mu_*: {exc}") from None

    try:
        scenario = get_scenario(v.get("mm_scenario", "umi-open-square-nlos"),
                                f_ghz=v.get("mm_f_ghz", 73.0),
                                n=v.get("scenario_n"), sigma_db=v.get("scenario_sigma_db"),
                                b=v.get("scenario_b"), f0_ghz=v.get("scenario_f0_ghz"))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"mm_scenario: {exc.args[0]}") from None

    try:
        los = LosModel(v.get("mm_los", "bernoulli"))
    except ValueError as exc:
        raise ConfigError(f"mm_los: {exc}") from None

    try:
        mm = ClusterConfig(
            n_cl=v.get("mm_n_cl", 5), n_ray=v.get("mm_n_ray", 10),
            ray_angle_spread_rad=float(np.deg2rad(v.get("mm_ray_spread_deg", 5.0))),
            scenario=scenario, los_model=los, link_distance_m=v.get("mm_distance_m", 50.0),
            path_length_model=v.get("mm_path_length", "fixed"),
            unit_attenuation=v.get("mm_unit_attenuation", False),
            unit_gains=v.get("mm_unit_gains", False))
    except ValueError as exc:
        raise ConfigError(f"mm_*: {exc}") from None

    kwargs = {k: v[k] for k in ("n_trials", "master_seed", "antennas", "m_values", "snr_db",
                                "bands", "allow_rank_deficient", "training_snr_db",
                                "pilot_power", "csi_band", "mu_distance_m") if k in v}
    try:
        return ExperimentConfig(study=study, mu=mu, mm=mm, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(text: str, overrides=(), seed=None, source="<config>") -> LoadedConfig:
    """
    Parse config text, then apply ``key=value`` overrides and a seed override.
    """
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"),
                                       inline_comment_prefixes=("#",))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    sections = parser.sections()
    if len(sections) != 1:
        raise ConfigError(f"{source}: expected exactly one [study] section, found {len(sections)}")
    study = sections[0]
    if study not in STUDIES:
        raise ConfigError(f"study: unknown study {study!r}; known: {', '.join(STUDIES)}")
    raw = dict(parser[study])
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set: expected key=value, got {item!r}")
        raw[key.strip()] = value.strip()
    if seed is not None:
        raw["master_seed"] = str(seed)
    values = _parse_values(raw)
    return LoadedConfig(_build(study, values), raw)


def load_config(path, overrides=(), seed=None) -> LoadedConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, overrides, seed, source=str(path))
