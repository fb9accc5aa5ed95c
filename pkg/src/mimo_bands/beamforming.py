"""
Precoder/combiner construction and spectral efficiency.

Two transceivers are compared:

``cm_fd``
    Channel-matched, fully digital: the top-``m`` right/left singular
    vectors of the channel.
``an_steering``
    Analog beam steering: ULA responses pointed at the departure/arrival
    angles of the ``m`` strongest paths.

The rate of a pair ``(F, W)`` is evaluated with equal power across the
streams and noise colored by the combiner::

    SE = log2 det(I + snr/m (W^H W)^-1 W^H H F F^H H^H W)
"""

from dataclasses import dataclass

import numpy as np

from .array_geometry import ula_matrix
from .metrics import rank_from_singular_values, DEFAULT_RANK_TOL

__all__ = ["Beamformers", "RankDeficiencyError", "SingularCombinerError",
           "cm_fd_beamformers", "an_beamformers", "spectral_efficiency", "CM_FD", "AN"]

CM_FD = "cm_fd"
AN = "an_steering"


class RankDeficiencyError(ValueError):
    """More streams were requested than the channel (or path list) supports."""


class SingularCombinerError(ValueError):
    """The combiner Gram matrix ``W^H W`` is singular."""


@dataclass(frozen=True)
class Beamformers:
    precoder: np.ndarray
    combiner: np.ndarray
    method: str
    m: int


def _entries(h):
    return np.asarray(getattr(h, "entries", h))


def _received_snr_entries(h):
    # ChannelMatrix inputs are referred to the receiver; raw arrays are taken as-is
    e = _entries(h)
    gain = getattr(h, "large_scale_gain", 1.0)
    return e / np.sqrt(gain) if gain != 1.0 else e


def cm_fd_beamformers(h, m: int, strict_rank: bool = True) -> Beamformers:
    """
    Top-``m`` singular-vector beamformers.

    Parameters
    ----------
    h : ChannelMatrix or ndarray
        ``N_R x N_T`` channel.
    m : int
        Number of streams.
    strict_rank : bool
        With ``False``, streams beyond the numerical rank are allowed; they
        use null-space singular vectors and carry no signal.

    Raises
    ------
    RankDeficiencyError
        If ``m`` exceeds ``min(N_R, N_T)``, or the numerical rank of ``h``
        when ``strict_rank`` is set.
    """
    e = _entries(h)
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m > min(e.shape):
        raise RankDeficiencyError(f"m={m} exceeds min(N_R, N_T)={min(e.shape)}")
    u, s, vh = np.linalg.svd(e, full_matrices=False)
    rank = rank_from_singular_values(s, DEFAULT_RANK_TOL)
    if strict_rank and m > rank:
        raise RankDeficiencyError(f"m={m} exceeds the numerical rank {rank} of the channel")
    return Beamformers(vh[:m].conj().T, u[:, :m], CM_FD, int(m))


def an_beamformers(paths, m: int, n_t: int, n_r: int) -> Beamformers:
    """
    Beam-steering vectors toward the ``m`` strongest paths.

    ``paths`` is a flattened path list of ``(alpha, aoa, aod)`` tuples;
    strength is ``|alpha|^2`` and ties keep the input order.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m > len(paths):
        raise RankDeficiencyError(f"m={m} exceeds the number of paths {len(paths)}")
    order = sorted(range(len(paths)), key=lambda k: -abs(paths[k][0]) ** 2)
    chosen = [paths[k] for k in order[:m]]
    pairs = {(p[1], p[2]) for p in chosen}
    if len(pairs) < m:
        raise RankDeficiencyError("fewer distinct path directions than requested streams")
    f = ula_matrix([p[2] for p in chosen], n_t)
    w = ula_matrix([p[1] for p in chosen], n_r)
    return Beamformers(f, w, AN, int(m))


def spectral_efficiency(h, bf: Beamformers, snr_linear: float) -> float:
    """Achievable rate in bit/s/Hz of ``bf`` over ``h`` at received SNR ``snr_linear``."""
    if not snr_linear > 0:
        raise ValueError(f"snr must be positive, got {snr_linear}")
    e = _received_snr_entries(h)
    f, w, m = bf.precoder, bf.combiner, bf.m
    if f.shape[0] != e.shape[1] or w.shape[0] != e.shape[0]:
        raise ValueError(f"beamformer shapes {f.shape}, {w.shape} do not fit channel {e.shape}")
    gram = w.conj().T @ w
    if np.linalg.cond(gram) > 1e12:
        raise SingularCombinerError("combiner columns are linearly dependent")
    chol = np.linalg.cholesky(gram)
    b = np.linalg.solve(chol, w.conj().T @ e @ f)
    mat = np.eye(m) + (snr_linear / m) * (b @ b.conj().T)
    sign, logdet = np.linalg.slogdet(mat)
    return float(logdet / np.log(2.0))
