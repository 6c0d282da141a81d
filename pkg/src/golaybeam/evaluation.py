"""
Monte-Carlo sector evaluation of broadcast beams.

UEs are dropped uniformly over an annular sector in front of the array
(azimuth uniform, radius area-uniform) and each gets the spectral
efficiency ``log2(1 + rho * gamma * G(phi) * d**-alpha)``, where G is the
EIRP-normalized total pattern in the horizontal plane.  Shadow fading is
ignored and the UE antenna is omnidirectional.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .patterns import ArrayGeometry, ElementModel, af_power_at, eirp_normalize, element_gain_linear
from .sequences import WeightPair


@dataclass(frozen=True)
class SectorConfig:
    half_width_deg: float = 60.0
    r_min: float = 25.0
    r_max: float = 300.0
    drops: int = 10_000
    pathloss_exp: float = 2.2
    offset_db: float = 57.0
    snr_db: tuple = (-10.0, 0.0, 10.0, 20.0, 30.0)
    seed: int = 0

    def __post_init__(self):
        if self.drops < 1:
            raise InvalidInputError("number of drops must be >= 1")
        if not 0 < self.r_min < self.r_max:
            raise InvalidInputError("radii must satisfy 0 < r_min < r_max")
        if not self.pathloss_exp > 0:
            raise InvalidInputError("pathloss exponent must be > 0")
        if not 0 < self.half_width_deg <= 90:
            raise InvalidInputError("sector half-width must lie in (0, 90] degrees")
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))


def drop_ues(config: SectorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Azimuths (rad) and distances (m) of ``config.drops`` UEs."""
    rng = np.random.default_rng(config.seed)
    hw = np.deg2rad(config.half_width_deg)
    phi = rng.uniform(-hw, hw, config.drops)
    d = np.sqrt(rng.uniform(config.r_min ** 2, config.r_max ** 2, config.drops))
    return phi, d


def spectral_efficiency(gain, d, rho, gamma, alpha):
    """``log2(1 + rho*gamma*gain*d**-alpha)`` in bit/s/Hz (all inputs linear)."""
    return np.log2(1.0 + rho * gamma * np.asarray(gain) * np.asarray(d, dtype=float) ** (-alpha))


@dataclass
class SeReport:
    label: str
    snr_db: tuple
    mean_se: np.ndarray
    samples: np.ndarray | None = field(default=None, repr=False)   # (len(snr), drops)

    def rows(self):
        for s, c in zip(self.snr_db, self.mean_se):
            yield self.label, s, float(c)


def evaluate_gain(gain_fn, config: SectorConfig, label: str = "", keep_samples: bool = False) -> SeReport:
    """Average SE for a pattern given as a callable of azimuth (linear gain)."""
    phi, d = drop_ues(config)
    gain = np.asarray(gain_fn(phi), dtype=float)
    gamma = 10.0 ** (config.offset_db / 10.0)
    rho = 10.0 ** (np.asarray(config.snr_db) / 10.0)
    se = spectral_efficiency(gain[None, :], d[None, :], rho[:, None], gamma, config.pathloss_exp)
    mean = se.mean(axis=1)   # numpy's pairwise summation
    return SeReport(label, config.snr_db, mean, se if keep_samples else None)


def evaluate_method(weights: WeightPair, geometry: ArrayGeometry | None = None,
                    model: ElementModel | None = None, config: SectorConfig | None = None,
                    label: str = "", keep_samples: bool = False) -> SeReport:
    """EIRP-normalize ``weights`` and evaluate their horizontal-plane total pattern."""
    geometry = geometry or ArrayGeometry.for_weights(weights)
    model = model or ElementModel()
    config = config or SectorConfig()
    w = eirp_normalize(weights)

    def gain(phi):
        return af_power_at(w, geometry, phi, np.pi / 2) * element_gain_linear(model, phi)

    return evaluate_gain(gain, config, label, keep_samples)
