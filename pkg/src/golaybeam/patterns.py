"""
Steering vectors, power-domain array factors and beam metrics.

Angles are in radians: azimuth ``phi`` in [-pi, pi] and elevation ``theta``
measured from the z-axis in [0, pi].  The progressive phase shifts are

    psi_y = 2*pi*d_y*sin(theta)*sin(phi),    psi_z = 2*pi*d_z*cos(theta).

Patterns are kept in linear power; dB only appears at export time.  A
``PatternGrid`` stores values with shape ``(len(theta), len(phi))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NotMeasurableError
from .sequences import WeightPair

AF = "array_factor"
TOTAL = "total"
EIRP = "eirp"
KINDS = (AF, TOTAL, EIRP)


@dataclass(frozen=True)
class ArrayGeometry:
    """``m`` columns along y, ``n`` rows along z; spacings in wavelengths."""

    m: int
    n: int = 1
    dy: float = 0.5
    dz: float = 0.5

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InvalidInputError("array dimensions must be >= 1")
        if not (self.dy > 0 and self.dz > 0):
            raise InvalidInputError("element spacings must be > 0")

    @property
    def is_ula(self) -> bool:
        return self.n == 1

    @classmethod
    def for_weights(cls, weights: WeightPair, dy: float = 0.5, dz: float = 0.5) -> "ArrayGeometry":
        if weights.is_2d:
            n, m = weights.shape
            return cls(m=m, n=n, dy=dy, dz=dz)
        return cls(m=weights.size, dy=dy, dz=dz)


@dataclass(frozen=True, eq=False)
class AngleGrid:
    phi: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        for name, x, lo, hi in (("phi", phi, -np.pi, np.pi), ("theta", theta, 0.0, np.pi)):
            if x.ndim != 1 or x.size == 0:
                raise InvalidInputError(f"{name} samples must be a non-empty 1-D array")
            if np.any(np.diff(x) <= 0):
                raise InvalidInputError(f"{name} samples must be strictly increasing")
            if x[0] < lo - 1e-12 or x[-1] > hi + 1e-12:
                raise InvalidInputError(f"{name} samples must lie in [{lo:.4f}, {hi:.4f}]")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)

    @property
    def shape(self) -> tuple[int, int]:
        return self.theta.size, self.phi.size

    @classmethod
    def azimuth_cut(cls, step_deg: float = 0.25, theta: float = np.pi / 2,
                    lo_deg: float = -90.0, hi_deg: float = 90.0) -> "AngleGrid":
        n = int(round((hi_deg - lo_deg) / step_deg)) + 1
        return cls(np.deg2rad(np.linspace(lo_deg, hi_deg, n)), np.array([theta]))

    @classmethod
    def hemisphere(cls, step_deg: float = 1.0) -> "AngleGrid":
        """Front hemisphere: phi in [-90, 90] deg, theta in [0, 180] deg."""
        nphi = int(round(180.0 / step_deg)) + 1
        return cls(np.deg2rad(np.linspace(-90, 90, nphi)), np.deg2rad(np.linspace(0, 180, nphi)))


@dataclass(frozen=True, eq=False)
class PatternGrid:
    values: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    kind: str = AF

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"kind must be one of {KINDS}")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (np.size(self.theta), np.size(self.phi)):
            raise InvalidInputError("values must have shape (len(theta), len(phi))")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise InvalidInputError("pattern values must be finite and nonnegative")
        object.__setattr__(self, "values", v)

    def db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.values)

    def cut(self, theta: float = np.pi / 2) -> tuple[np.ndarray, np.ndarray]:
        """Azimuth cut at the sampled elevation closest to ``theta``."""
        i = int(np.argmin(np.abs(self.theta - theta)))
        return self.phi, self.values[i]

    def scaled(self, g: float, kind: str | None = None) -> "PatternGrid":
        return PatternGrid(self.values * g, self.phi, self.theta, kind or self.kind)


# ---------------------------------------------------------------------------
# Steering


def psi_y(phi, theta, dy: float):
    return 2 * np.pi * dy * np.sin(theta) * np.sin(phi)


def psi_z(theta, dz: float):
    return 2 * np.pi * dz * np.cos(theta)


def steering_vector(geometry: ArrayGeometry, phi: float, theta: float = np.pi / 2) -> np.ndarray:
    """``a_m = exp(j*m*psi_y)`` for m = 0..M-1."""
    return np.exp(1j * np.arange(geometry.m) * psi_y(phi, theta, geometry.dy))


def steering_matrix(geometry: ArrayGeometry, phi: float, theta: float = np.pi / 2) -> np.ndarray:
    """N x M matrix ``A[n, m] = exp(j*n*psi_z) * exp(j*m*psi_y)``."""
    az = np.exp(1j * np.arange(geometry.n) * psi_z(theta, geometry.dz))
    return np.outer(az, steering_vector(geometry, phi, theta))


def _weights_2d(weights: WeightPair, geometry: ArrayGeometry):
    a, b = np.asarray(weights.a), np.asarray(weights.b)
    if a.ndim == 1:
        a, b = a[None, :], b[None, :]
    if a.shape != (geometry.n, geometry.m):
        raise InvalidInputError(
            f"weights of shape {weights.shape} do not fit a {geometry.n} x {geometry.m} array")
    return a, b


def af_power_at(weights: WeightPair, geometry: ArrayGeometry, phi, theta=np.pi / 2) -> np.ndarray:
    """Power-domain array factor at broadcastable angle arrays ``phi``, ``theta``.

    Sums ``|a_z^T W a_y|^2`` over both polarizations.
    """
    A, B = _weights_2d(weights, geometry)
    phi, theta = np.broadcast_arrays(np.asarray(phi, dtype=float), np.asarray(theta, dtype=float))
    ay = np.exp(1j * psi_y(phi, theta, geometry.dy)[..., None] * np.arange(geometry.m))
    az = np.exp(1j * psi_z(theta, geometry.dz)[..., None] * np.arange(geometry.n))
    out = np.zeros(phi.shape)
    for W in (A, B):
        field = np.einsum("...n,...n->...", az, ay @ W.T)
        out += field.real ** 2 + field.imag ** 2
    return out


def array_factor_power(weights: WeightPair, geometry: ArrayGeometry, grid: AngleGrid) -> PatternGrid:
    th, ph = np.meshgrid(grid.theta, grid.phi, indexing="ij")
    return PatternGrid(af_power_at(weights, geometry, ph, th), grid.phi, grid.theta, AF)


# ---------------------------------------------------------------------------
# Element model


@dataclass(frozen=True)
class ElementModel:
    """Parabolic-in-dB sub-element pattern clamped ``floor_db`` below the peak.

    ``elevation=True`` adds a term of the same form in theta around
    ``theta0`` (off by default; the azimuth-only model is the reference).
    """

    peak_db: float = 8.0
    phi0: float = 0.0
    hpbw: float = np.pi / 2
    floor_db: float = 30.0
    elevation: bool = False
    theta0: float = np.pi / 2
    hpbw_theta: float = np.pi / 2

    def __post_init__(self):
        if not (self.hpbw > 0 and self.hpbw_theta > 0):
            raise InvalidInputError("element HPBW must be > 0")
        if not self.floor_db > 0:
            raise InvalidInputError("floor must be > 0 dB")

    @classmethod
    def isotropic(cls) -> "ElementModel":
        return cls(peak_db=0.0, hpbw=np.inf, floor_db=np.inf)


def _wrap_angle(x):
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


def element_gain(model: ElementModel, phi, theta=np.pi / 2):
    """Element gain in dB."""
    att = 12.0 * (_wrap_angle(np.asarray(phi, dtype=float) - model.phi0) / model.hpbw) ** 2
    if model.elevation:
        att = att + 12.0 * ((np.asarray(theta, dtype=float) - model.theta0) / model.hpbw_theta) ** 2
    return model.peak_db - np.minimum(att, model.floor_db)


def element_gain_linear(model: ElementModel, phi, theta=np.pi / 2):
    return 10.0 ** (element_gain(model, phi, theta) / 10.0)


def total_pattern(weights: WeightPair, geometry: ArrayGeometry, model: ElementModel,
                  grid: AngleGrid) -> PatternGrid:
    af = array_factor_power(weights, geometry, grid)
    th, ph = np.meshgrid(grid.theta, grid.phi, indexing="ij")
    return PatternGrid(af.values * element_gain_linear(model, ph, th), grid.phi, grid.theta, TOTAL)


def eirp_normalize(weights: WeightPair) -> WeightPair:
    """Scale by ``1 / (sqrt(K) * max|w|)`` with K the total element-port count."""
    peak = max(np.max(np.abs(weights.a)), np.max(np.abs(weights.b)))
    if peak == 0:
        raise InvalidInputError("cannot normalize all-zero weights")
    return weights.scaled(1.0 / (np.sqrt(2 * weights.size) * peak))


def eirp_pattern(weights: WeightPair, geometry: ArrayGeometry, model: ElementModel,
                 grid: AngleGrid) -> PatternGrid:
    """Total pattern of the EIRP-normalized weights (watts per 1 W budget)."""
    tp = total_pattern(eirp_normalize(weights), geometry, model, grid)
    return tp.scaled(1.0, EIRP)


def power_utilization(weights: WeightPair) -> float:
    """``||w||^2 / (K * max|w|^2)`` over both polarizations, K ports in total."""
    w = np.concatenate([np.ravel(weights.a), np.ravel(weights.b)])
    peak = np.max(np.abs(w)) ** 2
    if peak == 0:
        raise InvalidInputError("power utilization undefined for all-zero weights")
    return float(np.sum(np.abs(w) ** 2) / (w.size * peak))


# ---------------------------------------------------------------------------
# Metrics


def _cut_values(pattern, theta):
    if isinstance(pattern, PatternGrid):
        return pattern.cut(theta)
    phi, values = pattern
    return np.asarray(phi, dtype=float), np.asarray(values, dtype=float)


def hpbw(pattern, theta: float = np.pi / 2) -> float:
    """Half-power beamwidth in degrees of an azimuth cut.

    ``pattern`` is a ``PatternGrid`` (cut taken at ``theta``) or a
    ``(phi, values)`` tuple.  Crossings are linearly interpolated in power.
    """
    phi, v = _cut_values(pattern, theta)
    i0 = int(np.argmax(v))
    half = v[i0] / 2.0

    def crossing(step):
        i = i0
        while 0 <= i + step < v.size:
            j = i + step
            if v[j] < half:
                t = (v[i] - half) / (v[i] - v[j])
                return phi[i] + t * (phi[j] - phi[i])
            i = j
        raise NotMeasurableError("pattern does not drop 3 dB below its peak within the cut")

    return float(np.rad2deg(crossing(1) - crossing(-1)))


def ripple(pattern: PatternGrid, phi_range=None, theta_range=None) -> float:
    """Max-to-min ratio in dB over the samples inside the given angle ranges."""
    ph_mask = np.ones(pattern.phi.size, bool)
    th_mask = np.ones(pattern.theta.size, bool)
    if phi_range is not None:
        ph_mask = (pattern.phi >= phi_range[0] - 1e-12) & (pattern.phi <= phi_range[1] + 1e-12)
    if theta_range is not None:
        th_mask = (pattern.theta >= theta_range[0] - 1e-12) & (pattern.theta <= theta_range[1] + 1e-12)
    region = pattern.values[np.ix_(th_mask, ph_mask)]
    if region.size == 0:
        raise InvalidInputError("ripple region contains no grid samples")
    lo, hi = region.min(), region.max()
    if lo == 0:
        return float("inf")
    return float(10.0 * np.log10(hi / lo))
