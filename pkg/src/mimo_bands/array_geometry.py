"""Half-wavelength uniform linear array (ULA) responses.

Only azimuth ULAs are modeled. Element spacing is fixed at half a
wavelength, so the phase progression across the array is ``pi * sin(angle)``
per element.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["SteeringVector", "ula_response", "ula_matrix", "coherence",
           "dirichlet_coherence"]


@dataclass(frozen=True)
class SteeringVector:
    """Unit-norm array response of an ``N``-element ULA at ``angle``."""
    elements: np.ndarray
    angle: float

    @property
    def n_antennas(self) -> int:
        return self.elements.shape[0]


def ula_response(angle: float, n_antennas: int) -> SteeringVector:
    """
    Normalized ULA response vector.

    Element ``k`` equals ``exp(-j*pi*k*sin(angle)) / sqrt(N)`` for
    ``k = 0, ..., N-1``. Angles outside ``[-pi/2, pi/2]`` are accepted since
    the formula is well defined for them.

    Parameters
    ----------
    angle : float
        Azimuth angle in radians.
    n_antennas : int
        Number of array elements, at least 1.

    Returns
    -------
    SteeringVector
    """
    if int(n_antennas) != n_antennas or n_antennas < 1:
        raise ValueError(f"n_antennas must be a positive integer, got {n_antennas!r}")
    if not np.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    k = np.arange(int(n_antennas))
    elements = np.exp(-1j * np.pi * k * np.sin(angle)) / np.sqrt(n_antennas)
    return SteeringVector(elements=elements, angle=float(angle))


def ula_matrix(angles, n_antennas: int) -> np.ndarray:
    """Stack ULA responses for several angles as columns (``N x len(angles)``)."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if int(n_antennas) != n_antennas or n_antennas < 1:
        raise ValueError(f"n_antennas must be a positive integer, got {n_antennas!r}")
    k = np.arange(int(n_antennas))[:, None]
    return np.exp(-1j * np.pi * k * np.sin(angles)[None, :]) / np.sqrt(n_antennas)


def coherence(a1: float, a2: float, n_antennas: int) -> float:
    """Magnitude of the inner product between two ULA responses, in [0, 1]."""
    v1 = ula_response(a1, n_antennas).elements
    v2 = ula_response(a2, n_antennas).elements
    # |<v1, v2>| == |<v2, v1>|; abs of the conjugate is bitwise the same
    return float(min(abs(np.vdot(v1, v2)), 1.0))


def dirichlet_coherence(a1: float, a2: float, n_antennas: int) -> float:
    """
    Closed-form coherence via the normalized Dirichlet kernel.

    Returns ``|sin(N*pi*u/2) / (N*sin(pi*u/2))|`` with
    ``u = sin(a1) - sin(a2)``, and 1 where the denominator vanishes.
    """
    n = int(n_antennas)
    u = np.sin(a1) - np.sin(a2)
    den = n * np.sin(np.pi * u / 2)
    if abs(den) < 1e-300:
        return 1.0
    return float(abs(np.sin(n * np.pi * u / 2) / den))
