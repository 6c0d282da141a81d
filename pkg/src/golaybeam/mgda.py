"""
Modified Great Deluge search for eps-complementary pairs.

The state is the stacked phase vector ``phi = [vec(phi_U); vec(phi_V)]``
of length 2K (K = N*M; ``vec`` stacks columns, so for a 1-D search it is
simply ``[phi_u; phi_v]``).  The utility is minus the largest sum-AACF
sidelobe, and the search stops once that sidelobe is within ``tolerance``.

Zooming in: every coordinate is tried with a forward step, then a backward
step, and a candidate is accepted whenever its utility stays at or above
the water level.  If neither direction is accepted the step shrinks by
``scale_factor`` and the attempt repeats, at most ``shrink_cap`` times per
coordinate per sweep.  Flooding: after every sweep the water level rises by
``rain_intensity``.  Zooming out: a sweep without any accepted move is an
unsuccessful step; after ``d_max`` of them in a row the state jumps by a
fresh random step vector and the water level resets to the new utility.

Two step-size rules go beyond the bare scheme and are on by default because
without them the coordinate search stalls on the kinks of the max-based
utility (see ``MgdaConfig``):

* ``underflow="redraw"``: a step that shrinks below ``step_floor`` is
  redrawn from U[0, 2*pi) instead of freezing its coordinate until the
  next jump (``underflow="freeze"``);
* ``step_growth``: an accepted step is multiplied by this factor (capped at
  2*pi); 1.0 disables it.

The sweeps run in a numba kernel that keeps the half-plane sum-AACF up to
date incrementally (O(K) per candidate) and recomputes it from scratch at
the start of every sweep.  All randomness comes from a
``numpy.random.Generator`` seeded with ``config.seed``, so a run is
reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numba
import numpy as np

from .errors import InvalidInputError
from .sequences import TWO_PI, WeightPair, canonical_phases, max_sidelobe

CONVERGED, JUMP, BUDGET, REFILL = 0, 1, 2, 3


@dataclass(frozen=True)
class MgdaConfig:
    """Search parameters.

    ``tolerance`` is in absolute sum-AACF units; use ``from_percent`` to
    give it relative to the main lobe 2*N*M.  ``rain_intensity=None`` means
    ``1e-4 * N * M``.
    """

    tolerance: float
    rain_intensity: float | None = None
    scale_factor: float = 0.5
    d_max: int = 20
    seed: int = 0
    max_iterations: int = 5_000_000
    step_floor: float = 1e-7
    shrink_cap: int = 50
    step_growth: float = 2.0
    underflow: str = "redraw"
    pin_gauge: bool = False
    record_trace: bool = False
    trace_capacity: int = 200_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be > 0")
        if self.rain_intensity is not None and not self.rain_intensity > 0:
            raise InvalidInputError("rain_intensity must be > 0")
        if not 0 < self.scale_factor <= 1:
            raise InvalidInputError("scale_factor must lie in (0, 1]")
        if self.d_max < 1:
            raise InvalidInputError("d_max must be a positive integer")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be positive")
        if not self.step_floor > 0:
            raise InvalidInputError("step_floor must be > 0")
        if self.shrink_cap < 0:
            raise InvalidInputError("shrink_cap must be nonnegative")
        if self.step_growth < 1:
            raise InvalidInputError("step_growth must be >= 1")
        if self.underflow not in ("redraw", "freeze"):
            raise InvalidInputError("underflow must be 'redraw' or 'freeze'")

    def rain_for(self, n: int, m: int) -> float:
        if self.rain_intensity is not None:
            return self.rain_intensity
        return 1e-4 * n * m

    @classmethod
    def from_percent(cls, eps_percent: float, n: int, m: int, **kwargs) -> "MgdaConfig":
        """Tolerance given as percent of the sum-AACF main lobe (2*N*M)."""
        return cls(tolerance=eps_percent / 100.0 * 2 * n * m, **kwargs)


@dataclass
class MgdaResult:
    phases: np.ndarray
    shape: tuple
    achieved_sidelobe: float
    iterations: int
    converged: bool
    jumps: int = 0
    restarts: int = 1
    seed: int = 0
    trace: np.ndarray | None = field(default=None, repr=False)

    @property
    def utility(self) -> float:
        return -self.achieved_sidelobe

    def pair(self) -> WeightPair:
        return decode_phases(self.phases, self.shape)


# ---------------------------------------------------------------------------
# Phase-vector layout


def _norm_shape(shape) -> tuple[int, int]:
    if isinstance(shape, (int, np.integer)):
        return 1, int(shape)
    shape = tuple(int(s) for s in shape)
    if len(shape) == 1:
        return 1, shape[0]
    if len(shape) == 2:
        return shape
    raise InvalidInputError(f"bad shape {shape}")


def split_phases(phases, shape) -> tuple[np.ndarray, np.ndarray]:
    """Unstack a phase vector into the two phase arrays of the given shape."""
    phases = np.asarray(phases, dtype=float)
    n, m = _norm_shape(shape)
    k = n * m
    if phases.ndim != 1 or phases.size != 2 * k:
        raise InvalidInputError(f"expected {2 * k} stacked phases, got {phases.size}")
    pa, pb = phases[:k], phases[k:]
    if isinstance(shape, (int, np.integer)) or len(tuple(shape)) == 1:
        return pa, pb
    # vec() stacks columns
    return pa.reshape(m, n).T, pb.reshape(m, n).T


def decode_phases(phases, shape) -> WeightPair:
    """Split a stacked phase vector into a weight pair of the given shape."""
    return WeightPair.from_phases(*split_phases(phases, shape))


def encode_phases(pair: WeightPair) -> np.ndarray:
    pa, pb = pair.phases()
    return np.concatenate([pa.ravel(order="F"), pb.ravel(order="F")])


def utility(phases, shape) -> float:
    """Minus the maximal sum-AACF sidelobe of the decoded pair (always <= 0)."""
    phases = np.asarray(phases, dtype=float)
    if phases.ndim != 1 or phases.size % 2:
        raise InvalidInputError("stacked phase vector must have even length")
    pair = decode_phases(phases, shape)
    return -max_sidelobe(pair.a, pair.b)


# ---------------------------------------------------------------------------
# numba kernels


@numba.njit(cache=True)
def _half_sum_aacf(U, V):
    n, m = U.shape
    S = np.zeros((n, 2 * m - 1), dtype=np.complex128)
    for tn in range(n):
        tm0 = 1 if tn == 0 else -(m - 1)
        for tm in range(tm0, m):
            acc = 0j
            for a in range(n - tn):
                for b in range(m):
                    bb = b + tm
                    if 0 <= bb < m:
                        acc += U[a, b] * np.conj(U[a + tn, bb]) + V[a, b] * np.conj(V[a + tn, bb])
            S[tn, tm + m - 1] = acc
    return S


@numba.njit(cache=True)
def _half_max(S):
    n = S.shape[0]
    m = (S.shape[1] + 1) // 2
    best = 0.0
    for tn in range(n):
        tm0 = 1 if tn == 0 else -(m - 1)
        for tm in range(tm0, m):
            z = S[tn, tm + m - 1]
            mag = z.real * z.real + z.imag * z.imag
            if mag > best:
                best = mag
    return math.sqrt(best)


@numba.njit(cache=True)
def _candidate(S, X, p, q, delta, out):
    """Sum-AACF after X[p, q] += delta, written to ``out``; returns its max sidelobe."""
    n = S.shape[0]
    m = (S.shape[1] + 1) // 2
    cdelta = np.conj(delta)
    best = 0.0
    for tn in range(n):
        tm0 = 1 if tn == 0 else -(m - 1)
        for tm in range(tm0, m):
            col = tm + m - 1
            val = S[tn, col]
            a_n = p + tn
            a_m = q + tm
            if a_n < n and 0 <= a_m < m:
                val += delta * np.conj(X[a_n, a_m])
            b_n = p - tn
            b_m = q - tm
            if b_n >= 0 and 0 <= b_m < m:
                val += X[b_n, b_m] * cdelta
            out[tn, col] = val
            mag = val.real * val.real + val.imag * val.imag
            if mag > best:
                best = mag
    return math.sqrt(best)


@numba.njit(cache=True)
def _wrap(x):
    y = x % TWO_PI
    if y >= TWO_PI:
        y = 0.0
    return y


@numba.njit(cache=True)
def _epoch(phi, dphi, frozen, pinned, n, m, eps, rain, alpha, d_max, floor, shrink_cap,
           growth, redraw, budget, pool, state, best_phi, best_val, trace, trace_count):
    """Local exploration from the current state.

    Runs whole sweeps until the pair converges, ``d_max`` unsuccessful sweeps
    in a row ask for a jump, the evaluation budget runs out, or the pool of
    pre-drawn step sizes may not cover another sweep.  ``state`` holds
    ``[water_level, d, pool_index, evaluations]`` and is updated in place.
    """
    k = n * m
    lam = state[0]
    d = int(state[1])
    pidx = int(state[2])
    evals = int(state[3])
    U = np.empty((n, m), dtype=np.complex128)
    V = np.empty((n, m), dtype=np.complex128)
    for i in range(k):
        U[i % n, i // n] = np.exp(1j * phi[i])
        V[i % n, i // n] = np.exp(1j * phi[k + i])
    S = _half_sum_aacf(U, V)
    out = np.empty_like(S)
    cur = _half_max(S)
    status = CONVERGED
    if cur < best_val[0]:
        best_val[0] = cur
        best_phi[:] = phi
    if cur > eps:
        status = -1
    while status < 0:
        if pool.size - pidx < 2 * k:
            status = REFILL
            break
        # drop accumulated rounding from the incremental updates
        S = _half_sum_aacf(U, V)
        accepted_any = False
        for i in range(2 * k):
            if frozen[i] or pinned[i]:
                continue
            if i < k:
                X = U
                j = i
            else:
                X = V
                j = i - k
            p = j % n
            q = j // n
            base = phi[i]
            accepted = False
            for s in range(shrink_cap + 1):
                step = dphi[i]
                for sign in (1.0, -1.0):
                    newp = _wrap(base + sign * step)
                    newx = np.exp(1j * newp)
                    val = _candidate(S, X, p, q, newx - X[p, q], out)
                    evals += 1
                    if -val >= lam:
                        phi[i] = newp
                        X[p, q] = newx
                        S[:, :] = out
                        cur = val
                        accepted = True
                        dphi[i] = min(dphi[i] * growth, TWO_PI)
                        break
                    if evals >= budget:
                        break
                if accepted or s == shrink_cap or evals >= budget:
                    break
                dphi[i] *= alpha
                if dphi[i] < floor:
                    if redraw:
                        dphi[i] = pool[pidx]
                        pidx += 1
                    else:
                        frozen[i] = True
                    break
            if accepted:
                accepted_any = True
                c = trace_count[0]
                if c < trace.shape[0]:
                    trace[c, 0] = -cur
                    trace[c, 1] = lam
                    trace_count[0] = c + 1
                if cur < best_val[0]:
                    best_val[0] = cur
                    best_phi[:] = phi
                if cur <= eps:
                    status = CONVERGED
                    break
            if evals >= budget:
                status = BUDGET
                break
        if status >= 0:
            break
        # flooding
        lam += rain
        if accepted_any:
            d = 0
        else:
            d += 1
        if d >= d_max:
            status = JUMP
    state[0] = lam
    state[1] = d
    state[2] = pidx
    state[3] = evals
    return status


# ---------------------------------------------------------------------------
# Drivers


def _run(n: int, m: int, config: MgdaConfig, shape) -> MgdaResult:
    if n < 1 or m < 1:
        raise InvalidInputError("array dimensions must be >= 1")
    k = n * m
    rng = np.random.default_rng(config.seed)
    phi = rng.uniform(0.0, TWO_PI, 2 * k)
    dphi = rng.uniform(0.0, TWO_PI, 2 * k)
    pinned = np.zeros(2 * k, dtype=np.bool_)
    if config.pin_gauge:
        pinned[0] = pinned[k] = True
        phi[pinned] = 0.0
    frozen = np.zeros(2 * k, dtype=np.bool_)
    best_phi = phi.copy()
    best_val = np.array([np.inf])
    trace = np.zeros((config.trace_capacity if config.record_trace else 0, 2))
    trace_count = np.zeros(1, dtype=np.int64)
    epochs: list[int] = []
    pool_size = max(4096, 8 * k)
    pool = rng.uniform(0.0, TWO_PI, pool_size)
    # water level, unsuccessful sweeps, pool index, evaluations
    state = np.array([utility(phi, shape), 0.0, 0.0, 0.0])
    jumps = 0
    while True:
        before = int(trace_count[0])
        status = _epoch(
            phi, dphi, frozen, pinned, n, m, config.tolerance, config.rain_for(n, m),
            config.scale_factor, config.d_max, config.step_floor, config.shrink_cap,
            config.step_growth, config.underflow == "redraw", config.max_iterations,
            pool, state, best_phi, best_val, trace, trace_count,
        )
        epochs.extend([jumps] * (int(trace_count[0]) - before))
        if status == REFILL:
            pool = rng.uniform(0.0, TWO_PI, pool_size)
            state[2] = 0
            continue
        if status != JUMP:
            break
        # zooming-out: fresh random steps, jump, reset the water level
        dphi = rng.uniform(0.0, TWO_PI, 2 * k)
        phi = canonical_phases(np.where(pinned, 0.0, phi + dphi))
        frozen[:] = False
        state[0] = utility(phi, shape)
        state[1] = 0
        jumps += 1

    best_phi = canonical_phases(best_phi)
    achieved = -utility(best_phi, shape)
    result = MgdaResult(
        phases=best_phi,
        shape=shape,
        achieved_sidelobe=achieved,
        iterations=int(state[3]),
        converged=bool(achieved <= config.tolerance),
        jumps=jumps,
        seed=config.seed,
    )
    if config.record_trace:
        cnt = int(trace_count[0])
        result.trace = np.column_stack([trace[:cnt], np.asarray(epochs[:cnt], dtype=float)])
    return result


def search(m: int, config: MgdaConfig) -> MgdaResult:
    """Search for a length-``m`` pair whose sum-AACF sidelobes are within tolerance."""
    return _run(1, int(m), config, (int(m),))


def search2d(n: int, m: int, config: MgdaConfig) -> MgdaResult:
    """Search for an ``n`` x ``m`` array pair (phases stacked column-wise)."""
    return _run(int(n), int(m), config, (int(n), int(m)))


def search_with_restarts(m: int, config: MgdaConfig, max_restarts: int = 10,
                         n: int | None = None) -> MgdaResult:
    """Run seeds ``seed, seed+1, ...`` until one converges; otherwise return the best."""
    if max_restarts < 1:
        raise InvalidInputError("max_restarts must be >= 1")
    best = None
    for r in range(max_restarts):
        cfg = replace(config, seed=config.seed + r)
        res = search(m, cfg) if n is None else search2d(n, m, cfg)
        res.restarts = r + 1
        if res.converged:
            return res
        if best is None or res.achieved_sidelobe < best.achieved_sidelobe:
            best = res
    best.restarts = max_restarts
    return best
