"""Scalar channel diagnostics: entry-imbalance ratio, rank and antenna selection."""

from dataclasses import dataclass

import numpy as np

__all__ = ["ChannelDiagnostics", "eta_metric", "numerical_rank", "rank_from_singular_values",
           "select_best_antenna", "frob_power", "diagnose", "DEFAULT_RANK_TOL"]

DEFAULT_RANK_TOL = 1e-9


def _entries(h) -> np.ndarray:
    return np.asarray(getattr(h, "entries", h))


@dataclass(frozen=True)
class ChannelDiagnostics:
    eta: float
    numerical_rank: int
    frob_power: float
    best_antenna: tuple


def frob_power(h) -> float:
    """Squared Frobenius norm, i.e. ``tr(H^H H)``."""
    e = _entries(h)
    return float(np.vdot(e, e).real)


def eta_metric(h) -> float:
    """
    Ratio of the largest squared entry magnitude to the mean squared magnitude.

    Always in ``[1, N_R * N_T]``; raises ``ValueError`` on an all-zero matrix.
    """
    e = _entries(h)
    p = np.abs(e) ** 2
    total = p.sum()
    if total == 0:
        raise ValueError("eta is undefined for an all-zero channel")
    return float(p.max() * p.size / total)


def rank_from_singular_values(s: np.ndarray, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s.max()))


def numerical_rank(h, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``rel_tol`` times the largest one."""
    s = np.linalg.svd(_entries(h), compute_uv=False)
    return rank_from_singular_values(s, rel_tol)


def select_best_antenna(h):
    """
    Pick the transmit/receive antenna pair with the strongest entry.

    Returns
    -------
    (i, j, gain) : tuple
        Row (receive) index, column (transmit) index and ``|H_ij|^2``.
        Ties go to the lexicographically smallest ``(i, j)``.
    """
    e = _entries(h)
    p = np.abs(e) ** 2
    if not np.any(p > 0):
        raise ValueError("antenna selection is undefined for an all-zero channel")
    # argmax returns the first maximum in row-major order
    i, j = np.unravel_index(int(np.argmax(p)), p.shape)
    return int(i), int(j), float(p[i, j])


def diagnose(h, rel_tol: float = DEFAULT_RANK_TOL) -> ChannelDiagnostics:
    i, j, _ = select_best_antenna(h)
    return ChannelDiagnostics(eta_metric(h), numerical_rank(h, rel_tol), frob_power(h), (i, j))
