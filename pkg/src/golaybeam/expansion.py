"""
Pattern-preserving enlargement of dual-polarized weight pairs.

All constructions stack a protoarray next to its pattern-orthogonal
complement (reversed, conjugated and cross-polarized weights), so that the
fields of the two halves add in power.  With a Golay pair ``(u, v)`` of
length N as expanders the power pattern is scaled by 2N and otherwise left
unchanged; with eps-complementary expanders it picks up a bounded ripple
(see ``sidelobe_bound_after_expansion``).

Array convention: rows run along z (index n), columns along y (index m).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .sequences import WeightPair, is_unimodular

VERTICAL = "vertical"
HORIZONTAL = "horizontal"
ORIENTATIONS = (VERTICAL, HORIZONTAL)


def exchange(x) -> np.ndarray:
    """Apply the exchange (index-reversal) matrix along every axis.

    For a vector this is ``E x``; for a matrix it is ``E_N X E_M``.
    """
    x = np.asarray(x)
    return x[tuple(slice(None, None, -1) for _ in range(x.ndim))]


def _orientation(orientation: str) -> str:
    if orientation not in ORIENTATIONS:
        raise InvalidInputError(f"orientation must be one of {ORIENTATIONS}, got {orientation!r}")
    return orientation


def _expanders(u, v, ndim: int):
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if ndim == 2 and u.ndim == 1:
        u, v = u[:, None], v[:, None]
    if u.shape != v.shape or u.ndim != ndim or u.size == 0:
        raise InvalidInputError(f"expanders must share a {ndim}-D shape, got {u.shape} and {v.shape}")
    if not (is_unimodular(u) and is_unimodular(v)):
        raise InvalidInputError("expanders must be unimodular")
    return u, v


def _proto(proto: WeightPair, ndim: int) -> WeightPair:
    if not isinstance(proto, WeightPair):
        proto = WeightPair(*proto)
    if proto.a.ndim != ndim:
        raise InvalidInputError(f"expected a {ndim}-D protoarray, got shape {proto.shape}")
    return proto


def companion(proto: WeightPair) -> WeightPair:
    """Companion weights: ``(-E conj(w_B), E conj(w_A))``.

    Works for 1-D and 2-D pairs; in 2-D both axes are reversed.
    """
    proto = proto if isinstance(proto, WeightPair) else WeightPair(*proto)
    return WeightPair(-exchange(np.conj(proto.b)), exchange(np.conj(proto.a)))


def asi_double(proto: WeightPair) -> WeightPair:
    """Stack the companion in front of the protoarray: ``[w_C; w_P]``."""
    proto = _proto(proto, 1)
    comp = companion(proto)
    return WeightPair(np.concatenate([comp.a, proto.a]), np.concatenate([comp.b, proto.b]))


def expand_ula(proto: WeightPair, expanders) -> WeightPair:
    """Length-2NM linear array from a length-M proto and length-N expanders.

    ``w_A = [u (x) p_A; -v (x) E conj(p_B)]`` and
    ``w_B = [u (x) p_B;  v (x) E conj(p_A)]``.
    """
    proto = _proto(proto, 1)
    u, v = _expanders(*expanders, ndim=1)
    comp = companion(proto)
    a = np.concatenate([np.kron(u, proto.a), np.kron(v, comp.a)])
    b = np.concatenate([np.kron(u, proto.b), np.kron(v, comp.b)])
    return WeightPair(a, b)


def expand_ula_to_ura(proto: WeightPair, expanders, orientation: str = VERTICAL) -> WeightPair:
    """Lift a length-M linear pair to a rectangular one with length-N expanders.

    Vertical stacking gives a 2N x M array, horizontal an N x 2M array.
    """
    proto = _proto(proto, 1)
    u, v = _expanders(*expanders, ndim=1)
    comp = companion(proto)
    join = np.vstack if _orientation(orientation) == VERTICAL else np.hstack
    a = join([np.outer(u, proto.a), np.outer(v, comp.a)])
    b = join([np.outer(u, proto.b), np.outer(v, comp.b)])
    return WeightPair(a, b)


def block_kron(U, W) -> np.ndarray:
    """``out[l*N + n, k*M + m] = U[l, k] * W[n, m]``."""
    U = np.asarray(U)
    W = np.asarray(W)
    (L, K), (N, M) = U.shape, W.shape
    return np.einsum("lk,nm->lnkm", U, W).reshape(L * N, K * M)


def expand_ura(proto: WeightPair, expanders, orientation: str = VERTICAL) -> WeightPair:
    """Expand an N x M array pair with L x K expander arrays ``(U, V)``.

    Vertical gives 2LN x KM, horizontal LN x 2KM.  A 1-D expander is read
    as a column (L x 1).
    """
    proto = _proto(proto, 2)
    U, V = _expanders(*expanders, ndim=2)
    comp = companion(proto)
    join = np.vstack if _orientation(orientation) == VERTICAL else np.hstack
    a = join([block_kron(U, proto.a), block_kron(V, comp.a)])
    b = join([block_kron(U, proto.b), block_kron(V, comp.b)])
    return WeightPair(a, b)


def sidelobe_bound_after_expansion(proto_ripple: float, expander_ripple: float, n: int,
                                   proto_level: float = 0.0) -> float:
    """Bound on the array-factor ripple after one expansion step.

    The expanded pattern factorizes as ``(2n + e)(G_P + r)`` where ``|e|`` is
    at most ``expander_ripple`` and ``|r|`` at most ``proto_ripple`` around the
    proto level ``proto_level``.  The deviation from ``2n * proto_level`` is
    then at most ``2n*r + e*(proto_level + r)``.
    """
    if proto_ripple < 0 or expander_ripple < 0 or proto_level < 0 or n < 1:
        raise InvalidInputError("bound inputs must be nonnegative and n >= 1")
    return 2 * n * proto_ripple + expander_ripple * (proto_level + proto_ripple)


# ---------------------------------------------------------------------------
# Multi-step chains


@dataclass(frozen=True)
class ExpansionStep:
    """One step of a chain.

    ``mode`` is one of ``ula``, ``ula2ura-v``, ``ula2ura-h``, ``ura-v``, ``ura-h``.
    """

    mode: str
    u: tuple
    v: tuple


MODES = ("ula", "ula2ura-v", "ula2ura-h", "ura-v", "ura-h")


def apply_step(pair: WeightPair, step: ExpansionStep) -> WeightPair:
    u, v = np.asarray(step.u, dtype=complex), np.asarray(step.v, dtype=complex)
    if step.mode == "ula":
        return expand_ula(pair, (u, v))
    if step.mode in ("ula2ura-v", "ula2ura-h"):
        return expand_ula_to_ura(pair, (u, v), VERTICAL if step.mode.endswith("v") else HORIZONTAL)
    if step.mode in ("ura-v", "ura-h"):
        return expand_ura(pair, (u, v), VERTICAL if step.mode.endswith("v") else HORIZONTAL)
    raise InvalidInputError(f"unknown expansion mode {step.mode!r}; expected one of {MODES}")


def run_chain(proto: WeightPair, steps) -> WeightPair:
    pair = proto
    for step in steps:
        pair = apply_step(pair, step)
    return pair


def chain_gain(steps) -> int:
    """Overall pattern scale of a chain with Golay expanders."""
    g = 1
    for s in steps:
        g *= 2 * np.asarray(s.u).size
    return g


# Horizontal lift of a length-7 pair to 2 x 14, then two vertical doublings
# with column expanders: 2 -> 8 -> 32 rows.
URA_32X14_STEPS = (
    ExpansionStep("ula2ura-h", (1, 1), (-1, 1)),
    ExpansionStep("ura-v", (1, 1), (-1, 1)),
    ExpansionStep("ura-v", (1, 1), (-1, 1)),
)

URA_4X7_STEPS = (ExpansionStep("ula2ura-v", (1j, 1), (-1, -1j)),)


def ura_32x14(proto: WeightPair) -> WeightPair:
    """32 x 14 array from a length-7 linear pair."""
    proto = _proto(proto, 1)
    if proto.size != 7:
        raise InvalidInputError(f"expected a length-7 protoarray, got {proto.size}")
    return run_chain(proto, URA_32X14_STEPS)


def ura_4x7(proto: WeightPair) -> WeightPair:
    """4 x 7 array from a length-7 linear pair with expanders ``[j, 1]``, ``[-1, -j]``."""
    return run_chain(_proto(proto, 1), URA_4X7_STEPS)
