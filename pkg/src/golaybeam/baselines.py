"""
Reference beamformers: DFT beam, phase-tapered DFT beam and an
amplitude-tapered broad beam.

All three put the same weights on both polarizations.  The amplitude taper
uses alternating projections (magnitude constraint on a sampled azimuth
grid, least-squares back to M weights) from many random starts and keeps
the lowest-PAPR candidate that meets its ripple band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .patterns import ArrayGeometry, psi_y
from .sequences import WeightPair


def _geometry(m: int, geometry: ArrayGeometry | None) -> ArrayGeometry:
    if m < 1:
        raise InvalidInputError("M must be >= 1")
    if geometry is None:
        return ArrayGeometry(m)
    if geometry.m != m:
        raise InvalidInputError(f"geometry has {geometry.m} columns, expected {m}")
    return geometry


def dft_phases(m: int, phi0: float = 0.0, geometry: ArrayGeometry | None = None) -> np.ndarray:
    g = _geometry(m, geometry)
    return -np.arange(m) * psi_y(phi0, np.pi / 2, g.dy)


def dft_weights(m: int, phi0: float = 0.0, geometry: ArrayGeometry | None = None) -> WeightPair:
    """Linear-phase beam steered to azimuth ``phi0``, identical on both polarizations."""
    w = np.exp(1j * dft_phases(m, phi0, geometry))
    return WeightPair(w, w)


def dirichlet_kernel(m: int, dy: float, phi, phi0: float = 0.0, theta=np.pi / 2):
    """``sin(M x) / sin(x)`` with ``x`` half the phase difference to the steering direction.

    Its square equals the single-polarization power of ``dft_weights`` at the
    same angle.  The removable singularity is replaced by its limit.
    """
    if m < 1:
        raise InvalidInputError("M must be >= 1")
    x = np.pi * dy * (np.sin(theta) * np.sin(phi) - np.sin(phi0))
    x = np.asarray(x, dtype=float)
    s = np.sin(x)
    near = np.abs(s) < 1e-12
    safe = np.where(near, 1.0, s)
    out = np.where(near, m * np.cos(m * x) / np.cos(x), np.sin(m * x) / safe)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PhaseTaperParams:
    p: int = 3
    c: float = 24.0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise InvalidInputError("p must be a positive integer")
        if self.c < 0:
            raise InvalidInputError("c must be nonnegative")


def broadener(m: int, params: PhaseTaperParams) -> np.ndarray:
    """``f_m = |4 pi c ((2m - M - 1) / (2 (M - 1)))^p|`` for m = 1..M."""
    if m < 2:
        raise InvalidInputError("phase taper needs M >= 2")
    idx = np.arange(1, m + 1)
    return np.abs(4 * np.pi * params.c * ((2 * idx - m - 1) / (2 * (m - 1))) ** params.p)


def phase_taper_weights(m: int, phi0: float = 0.0, params: PhaseTaperParams = PhaseTaperParams(),
                        geometry: ArrayGeometry | None = None) -> WeightPair:
    w = np.exp(1j * (dft_phases(m, phi0, geometry) + broadener(m, params)))
    return WeightPair(w, w)


@dataclass(frozen=True)
class AmplitudeTaperParams:
    """``zeta``: ripple tolerance of the target ``1 + zeta*cos(2 phi)``.

    ``slack`` is the extra relative band allowed to the solver on top of
    ``zeta``; a candidate is accepted when the sampled power stays within
    ``M * [1 - zeta - slack, 1 + zeta + slack]``.
    """

    zeta: float = 0.01
    slack: float = 0.05
    max_iterations: int = 500
    grid_points: int = 721
    starts: int = 50
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.zeta < 1:
            raise InvalidInputError("zeta must lie in [0, 1)")
        if not 0 <= self.slack <= 0.05:
            raise InvalidInputError("slack must lie in [0, 0.05]")
        if self.max_iterations < 1 or self.starts < 1:
            raise InvalidInputError("iteration and start counts must be positive")
        if self.grid_points < 2:
            raise InvalidInputError("grid_points must be >= 2")


@dataclass
class AmplitudeTaperResult:
    weights: WeightPair
    converged: bool
    deviation: float    # max |P(phi)/M - 1| on the constraint grid
    papr: float         # M max|w|^2 / ||w||^2


def amplitude_taper_weights(m: int, params: AmplitudeTaperParams = AmplitudeTaperParams(),
                            geometry: ArrayGeometry | None = None) -> AmplitudeTaperResult:
    g = _geometry(m, geometry)
    if m == 1:
        w = np.ones(1, dtype=complex)
        return AmplitudeTaperResult(WeightPair(w, w), True, 0.0, 1.0)

    phi = np.linspace(-np.pi / 2, np.pi / 2, params.grid_points)
    S = np.exp(1j * np.outer(psi_y(phi, np.pi / 2, g.dy), np.arange(m)))
    S_pinv = np.linalg.pinv(S)
    target = np.sqrt(m * (1 + params.zeta * np.cos(2 * phi)))
    band = params.zeta + params.slack
    rng = np.random.default_rng(params.seed)

    best = None
    for _ in range(params.starts):
        w = rng.normal(size=m) + 1j * rng.normal(size=m)
        for _ in range(params.max_iterations):
            y = S @ w
            w = S_pinv @ (target * np.exp(1j * np.angle(y)))
        power = np.abs(S @ w) ** 2
        dev = float(np.max(np.abs(power / m - 1)))
        papr = float(m * np.max(np.abs(w) ** 2) / np.sum(np.abs(w) ** 2))
        ok = dev <= band
        key = (not ok, papr if ok else dev)
        if best is None or key < best[0]:
            best = (key, w, ok, dev, papr)

    _, w, ok, dev, papr = best
    return AmplitudeTaperResult(WeightPair(w, w), ok, dev, papr)
