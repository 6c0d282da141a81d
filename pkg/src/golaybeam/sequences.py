"""
Sequences, weight pairs and aperiodic autocorrelation.

Conventions
-----------
The aperiodic autocorrelation (AACF) of a length-M sequence is

    R_u(tau) = sum_m u[m] * conj(u[m + tau]),     |tau| < M,

and zero elsewhere.  For an N x M array the two-dimensional AACF is

    R_U(tn, tm) = sum_{n,m} U[n, m] * conj(U[n + tn, m + tm]).

Both are computed by direct summation (no FFT) so that results are
deterministic to the last bit for a given input.  AACF values are stored
densely with lag ``-(M-1)`` at index 0.

A pair (u, v) is Golay complementary when R_u + R_v vanishes at every
nonzero lag, and eps-complementary when every nonzero-lag magnitude of the
sum stays within ``eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InvalidInputError, NotAvailableError

TWO_PI = 2.0 * np.pi

# Numerical tolerance for "exact" complementarity; distinct from any eps relaxation.
DEFAULT_TOL = 1e-9
UNIMODULAR_TOL = 1e-12


def canonical_phases(phases) -> np.ndarray:
    """Wrap phases (radians) into [0, 2*pi)."""
    p = np.asarray(phases, dtype=float)
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("phases must be finite")
    out = np.mod(p, TWO_PI)
    # np.mod can round tiny negatives up to exactly 2*pi
    out[out >= TWO_PI] = 0.0
    return out


def unimodular(phases) -> np.ndarray:
    """Map phases to unit-modulus complex weights ``exp(1j * phases)``."""
    return np.exp(1j * canonical_phases(phases))


def is_unimodular(x, tol: float = UNIMODULAR_TOL) -> bool:
    x = np.asarray(x)
    return x.size > 0 and bool(np.all(np.abs(np.abs(x) - 1.0) <= tol))


def _as_sequence(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 1:
        raise InvalidInputError(f"expected a 1-D sequence, got shape {u.shape}")
    if u.size == 0:
        raise InvalidInputError("sequence must have at least one entry")
    return u


def _as_array2d(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2:
        raise InvalidInputError(f"expected a 2-D array, got shape {U.shape}")
    if U.size == 0:
        raise InvalidInputError("array must have at least one entry")
    return U


# ---------------------------------------------------------------------------
# Weight pairs


@dataclass(frozen=True, eq=False)
class WeightPair:
    """Dual-polarized excitation: ``a`` on polarization A, ``b`` on B.

    Both members share one shape, either ``(M,)`` for a linear array or
    ``(N, M)`` for a rectangular one (rows along z, columns along y).
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        b = np.array(self.b, dtype=complex)
        if a.shape != b.shape:
            raise InvalidInputError(f"polarization shapes differ: {a.shape} vs {b.shape}")
        if a.ndim not in (1, 2) or a.size == 0:
            raise InvalidInputError(f"weights must be a non-empty 1-D or 2-D array, got {a.shape}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_phases(cls, phases_a, phases_b) -> "WeightPair":
        return cls(unimodular(phases_a), unimodular(phases_b))

    @property
    def shape(self) -> tuple:
        return self.a.shape

    @property
    def size(self) -> int:
        """Elements per polarization."""
        return self.a.size

    @property
    def is_2d(self) -> bool:
        return self.a.ndim == 2

    def phases(self) -> tuple[np.ndarray, np.ndarray]:
        return canonical_phases(np.angle(self.a)), canonical_phases(np.angle(self.b))

    def is_unimodular(self, tol: float = UNIMODULAR_TOL) -> bool:
        return is_unimodular(self.a, tol) and is_unimodular(self.b, tol)

    def scaled(self, factor: float) -> "WeightPair":
        return WeightPair(self.a * factor, self.b * factor)

    def __iter__(self):
        return iter((self.a, self.b))

    def __repr__(self) -> str:
        return f"WeightPair(shape={self.shape})"


# ---------------------------------------------------------------------------
# AACF


@dataclass(frozen=True, eq=False)
class Aacf:
    """AACF of a length-M sequence, lags ``-(M-1) .. M-1``."""

    values: np.ndarray

    @property
    def length(self) -> int:
        return (self.values.size + 1) // 2

    @property
    def lags(self) -> np.ndarray:
        m = self.length
        return np.arange(-(m - 1), m)

    def at(self, tau: int) -> complex:
        m = self.length
        if abs(tau) >= m:
            return 0j
        return complex(self.values[tau + m - 1])

    def sidelobes(self) -> np.ndarray:
        """Values at nonzero lags."""
        m = self.length
        return np.delete(self.values, m - 1)

    def __add__(self, other: "Aacf") -> "Aacf":
        if self.values.shape != other.values.shape:
            raise InvalidInputError("cannot add AACFs of different lengths")
        return Aacf(self.values + other.values)


@dataclass(frozen=True, eq=False)
class Aacf2d:
    """AACF of an N x M array; ``values[tn + N - 1, tm + M - 1]``."""

    values: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.values.shape
        return (rows + 1) // 2, (cols + 1) // 2

    def at(self, tau_n: int, tau_m: int) -> complex:
        n, m = self.shape
        if abs(tau_n) >= n or abs(tau_m) >= m:
            return 0j
        return complex(self.values[tau_n + n - 1, tau_m + m - 1])

    def sidelobes(self) -> np.ndarray:
        n, m = self.shape
        flat = self.values.ravel()
        return np.delete(flat, (n - 1) * self.values.shape[1] + (m - 1))

    def __add__(self, other: "Aacf2d") -> "Aacf2d":
        if self.values.shape != other.values.shape:
            raise InvalidInputError("cannot add AACFs of different shapes")
        return Aacf2d(self.values + other.values)


def aacf(u) -> Aacf:
    """Aperiodic autocorrelation of a sequence by direct summation."""
    u = _as_sequence(u)
    m = u.size
    vals = np.empty(2 * m - 1, dtype=complex)
    cu = np.conj(u)
    for tau in range(m):
        r = np.dot(u[: m - tau], cu[tau:])
        vals[m - 1 + tau] = r
        vals[m - 1 - tau] = np.conj(r)
    # R(0) is exactly the energy
    vals[m - 1] = np.sum(np.abs(u) ** 2)
    return Aacf(vals)


def aacf2d(U) -> Aacf2d:
    """Two-dimensional aperiodic autocorrelation by direct summation."""
    U = _as_array2d(U)
    n, m = U.shape
    vals = np.zeros((2 * n - 1, 2 * m - 1), dtype=complex)
    cU = np.conj(U)
    for tn in range(n):
        for tm in range(-(m - 1), m):
            if tm >= 0:
                r = np.sum(U[: n - tn, : m - tm] * cU[tn:, tm:])
            else:
                r = np.sum(U[: n - tn, -tm:] * cU[tn:, : m + tm])
            vals[n - 1 + tn, m - 1 + tm] = r
            vals[n - 1 - tn, m - 1 - tm] = np.conj(r)
    vals[n - 1, m - 1] = np.sum(np.abs(U) ** 2)
    return Aacf2d(vals)


def _check_pair(u, v, two_d: bool):
    conv = _as_array2d if two_d else _as_sequence
    u, v = conv(u), conv(v)
    if u.shape != v.shape:
        raise InvalidInputError(f"pair shapes differ: {u.shape} vs {v.shape}")
    return u, v


def sum_aacf(u, v) -> Aacf:
    u, v = _check_pair(u, v, two_d=False)
    return aacf(u) + aacf(v)


def sum_aacf2d(U, V) -> Aacf2d:
    U, V = _check_pair(U, V, two_d=True)
    return aacf2d(U) + aacf2d(V)


def max_sidelobe(u, v) -> float:
    """Largest |R_u + R_v| over nonzero lags; 1-D or 2-D inputs.

    Returns 0.0 when there is no nonzero lag (single-element inputs).
    """
    u = np.asarray(u)
    if u.ndim == 2:
        side = sum_aacf2d(u, v).sidelobes()
    else:
        side = sum_aacf(u, v).sidelobes()
    return float(np.max(np.abs(side))) if side.size else 0.0


def pair_sidelobe(pair: WeightPair) -> float:
    return max_sidelobe(pair.a, pair.b)


def is_golay_pair(u, v, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise InvalidInputError("tol must be nonnegative")
    return max_sidelobe(u, v) <= tol


def is_golay_array_pair(U, V, tol: float = DEFAULT_TOL) -> bool:
    if np.asarray(U).ndim != 2:
        raise InvalidInputError("expected 2-D arrays")
    return is_golay_pair(U, V, tol)


def is_eps_complementary(u, v, eps: float, tol: float = 0.0) -> bool:
    """True iff every nonzero-lag |R_u + R_v| is at most ``eps`` (+ ``tol``)."""
    if eps < 0:
        raise InvalidInputError("eps must be nonnegative")
    return max_sidelobe(u, v) <= eps + tol


is_eps_complementary2d = is_eps_complementary


def ripple_bound(length: int, eps: float) -> float:
    """Upper bound on max |S_u + S_v - 2M| for an eps-pair of ``length`` elements.

    The sum spectrum is the Fourier series of the sum AACF, which has
    ``2 * (length - 1)`` nonzero lags each bounded by ``eps``.
    """
    return 2.0 * (length - 1) * eps


def sum_spectrum(u, v, psi) -> np.ndarray:
    """|u^T a(psi)|^2 + |v^T a(psi)|^2 for 1-D sequences, at each ``psi``."""
    u, v = _check_pair(u, v, two_d=False)
    psi = np.atleast_1d(np.asarray(psi, dtype=float))
    steer = np.exp(1j * np.outer(psi, np.arange(u.size)))
    return np.abs(steer @ u) ** 2 + np.abs(steer @ v) ** 2


# ---------------------------------------------------------------------------
# Known binary kernels and Golay lengths

# Binary kernels, found by scripts/find_binary_kernels.py and re-verified in tests.
_BINARY_KERNELS = {
    1: ([1], [1]),
    2: ([1, 1], [1, -1]),
    10: (
        [1, 1, -1, -1, 1, 1, 1, -1, 1, -1],
        [1, -1, -1, 1, -1, 1, 1, 1, 1, 1],
    ),
    26: (
        [1, 1, 1, 1, -1, 1, 1, -1, -1, 1, -1, 1, 1, 1, 1, 1, -1, 1, -1, -1, -1, 1, 1, -1, -1, -1],
        [1, 1, 1, -1, -1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1, 1, -1, 1, 1, 1, 1],
    ),
}

KERNEL_LENGTHS = tuple(sorted(_BINARY_KERNELS))


def golay_kernel(length: int) -> tuple[np.ndarray, np.ndarray]:
    """Binary Golay kernel pair of the given length (1, 2, 10 or 26)."""
    if length not in _BINARY_KERNELS:
        raise NotAvailableError(
            f"no kernel of length {length}; supported lengths: {list(KERNEL_LENGTHS)}"
        )
    a, b = _BINARY_KERNELS[length]
    return np.array(a, dtype=complex), np.array(b, dtype=complex)


def _factor_exponent(m: int, p: int) -> tuple[int, int]:
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return m, k


def is_known_golay_length(m: int) -> bool:
    """Whether ``m`` is among the known quaternary Golay lengths.

    Known lengths are 2^(a+f) 3^b 5^c 11^d 13^e with f <= c + e and
    b + c + d + e <= a + 2f + 1, all exponents nonnegative.
    """
    if m < 1:
        raise InvalidInputError("length must be positive")
    rest, p2 = _factor_exponent(m, 2)
    rest, b = _factor_exponent(rest, 3)
    rest, c = _factor_exponent(rest, 5)
    rest, d = _factor_exponent(rest, 11)
    rest, e = _factor_exponent(rest, 13)
    if rest != 1:
        return False
    # a = p2 - f; the second constraint loosens as f grows, so take f maximal.
    f = min(p2, c + e)
    return b + c + d + e <= p2 + f + 1


def known_golay_lengths(limit: int) -> list[int]:
    return [m for m in range(1, limit + 1) if is_known_golay_length(m)]


def binary_golay_lengths(limit: int) -> list[int]:
    """Lengths 2^a 10^b 26^c up to ``limit``."""
    out = set()
    for a, b, c in product(range(limit.bit_length() + 1), repeat=3):
        val = 2**a * 10**b * 26**c
        if val <= limit:
            out.add(val)
    return sorted(out)


# ---------------------------------------------------------------------------
# A published-quality eps-pair of length 7 (two-decimal phases, radians)

PAIR7_PHASES_A = (0.0, 0.97, 1.83, 4.98, 0.16, 3.34, 1.20)
PAIR7_PHASES_B = (0.0, 1.75, 0.86, 2.21, 1.12, 5.75, 4.41)


def pair7() -> WeightPair:
    """Length-7 eps-complementary pair designed for eps = 0.14."""
    return WeightPair.from_phases(PAIR7_PHASES_A, PAIR7_PHASES_B)
