import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from golaybeam.errors import InvalidInputError
from golaybeam.expansion import (
    URA_32X14_STEPS, ExpansionStep, apply_step, asi_double, block_kron, chain_gain, companion,
    exchange, expand_ula, expand_ula_to_ura, expand_ura, run_chain, sidelobe_bound_after_expansion,
    ura_4x7, ura_32x14,
)
from golaybeam.sequences import (
    WeightPair, golay_kernel, is_golay_array_pair, is_golay_pair, is_unimodular, max_sidelobe,
    pair7, ripple_bound,
)

from oracles import af_power_1d, af_power_2d, field_1d, max_sidelobe_brute, random_unimodular

PSI = np.linspace(-np.pi, np.pi, 721)
KERNEL2 = (np.array([1, 1]), np.array([1, -1]))


def spectrum(pair, psi=PSI):
    a, b = pair
    return np.array([af_power_1d(a, b, p) for p in psi])


def random_pair(rng, m):
    return WeightPair(random_unimodular(rng, m), random_unimodular(rng, m))


def test_exchange_involution(rng):
    x = rng.normal(size=7)
    np.testing.assert_array_equal(exchange(exchange(x)), x)
    X = rng.normal(size=(3, 4))
    np.testing.assert_array_equal(exchange(X), X[::-1, ::-1])


def test_companion_examples():
    c = companion(WeightPair([1], [1]))
    assert c.a.tolist() == [-1] and c.b.tolist() == [1]
    c = companion(WeightPair([1, 1j], [1, 1]))
    np.testing.assert_allclose(c.a, [-1, -1])
    np.testing.assert_allclose(c.b, [-1j, 1])


def test_companion_doubling_pattern(rng):
    p = random_pair(rng, 5)
    d = asi_double(p)
    np.testing.assert_allclose(spectrum(d), 2 * spectrum(p), rtol=1e-9)
    dd = asi_double(d)
    np.testing.assert_allclose(spectrum(dd), 4 * spectrum(p), rtol=1e-9)


def test_expand_ula_trivial_expanders_is_doubling(rng):
    p = random_pair(rng, 4)
    out = expand_ula(p, ([1], [1]))
    c = companion(p)
    np.testing.assert_allclose(out.a, np.concatenate([p.a, c.a]))
    np.testing.assert_allclose(out.b, np.concatenate([p.b, c.b]))
    np.testing.assert_allclose(spectrum(out), spectrum(asi_double(p)), rtol=1e-9)


def test_expand_ula_unit_proto_gives_golay():
    out = expand_ula(WeightPair([1], [1]), KERNEL2)
    assert out.size == 4
    assert is_golay_pair(out.a, out.b)


def test_expand_ula_eps_proto_sidelobe():
    p = pair7()
    out = expand_ula(p, KERNEL2)
    assert out.size == 28
    s_out = max_sidelobe_brute(out.a.tolist(), out.b.tolist())
    # Golay expanders scale the whole sum-AACF by 2N
    assert s_out == pytest.approx(4 * max_sidelobe(p.a, p.b), abs=1e-12)
    assert s_out <= 2 * 0.2


def test_expand_ula_rejects_bad_expanders():
    p = WeightPair([1, 1], [1, -1])
    with pytest.raises(InvalidInputError):
        expand_ula(p, ([1, 1], [1]))
    with pytest.raises(InvalidInputError):
        expand_ula(p, ([1, 2], [1, 1]))


@given(st.integers(0, 10_000), st.integers(1, 9), st.sampled_from([2, 10]))
def test_expand_ula_preserves_pattern(seed, m, n):
    r = np.random.default_rng(seed)
    p = random_pair(r, m)
    out = expand_ula(p, golay_kernel(n))
    base = spectrum(p, PSI[::8])
    got = spectrum(out, PSI[::8])
    np.testing.assert_allclose(got, 2 * n * base, rtol=0, atol=1e-9 * 2 * n * 2 * m)
    assert is_unimodular(out.a) and is_unimodular(out.b)


def test_halves_radiate_orthogonally(rng):
    p = random_pair(rng, 6)
    u, v = KERNEL2
    out = expand_ula(p, (u, v))
    half = out.size // 2
    for x in PSI[::20]:
        e1 = [field_1d(w[:half], x) for w in (out.a, out.b)]
        e2 = [field_1d(w[half:], x) * np.exp(1j * half * x) for w in (out.a, out.b)]
        cross = np.conj(e1[0]) * e2[0] + np.conj(e1[1]) * e2[1]
        assert abs(cross) <= 1e-9


def test_golay_closure():
    a, b = golay_kernel(10)
    out = expand_ula(WeightPair(a, b), golay_kernel(2))
    assert out.size == 40 and is_golay_pair(out.a, out.b)


def test_ula_to_ura_vertical_example():
    out = expand_ula_to_ura(WeightPair([1], [1]), KERNEL2, "vertical")
    assert out.shape == (4, 1)
    np.testing.assert_allclose(out.a[:, 0], [1, 1, -1, 1])
    np.testing.assert_allclose(out.b[:, 0], [1, 1, 1, -1])


def test_ula_to_ura_horizontal_flat():
    out = expand_ula_to_ura(WeightPair([1], [1]), KERNEL2, "horizontal")
    assert out.shape == (2, 2)
    vals = [af_power_2d(out.a, out.b, y, z) for y in PSI[::30] for z in PSI[::30]]
    np.testing.assert_allclose(vals, 8, atol=1e-9)
    assert is_golay_array_pair(out.a, out.b)


@pytest.mark.parametrize("orientation", ["vertical", "horizontal"])
def test_ula_to_ura_factorizes(rng, orientation):
    p = random_pair(rng, 5)
    u, v = random_unimodular(rng, 3), random_unimodular(rng, 3)
    out = expand_ula_to_ura(p, (u, v), orientation)
    assert out.shape == ((6, 5) if orientation == "vertical" else (3, 10))
    for y in PSI[::40]:
        for z in PSI[::40]:
            expander = af_power_1d(u, v, z)
            assert af_power_2d(out.a, out.b, y, z) == pytest.approx(expander * af_power_1d(p.a, p.b, y),
                                                                    rel=1e-9)


def test_four_by_seven():
    out = ura_4x7(pair7())
    assert out.shape == (4, 7)
    assert is_unimodular(out.a) and is_unimodular(out.b)
    p = pair7()
    for y in PSI[::40]:
        for z in PSI[::60]:
            assert af_power_2d(out.a, out.b, y, z) == pytest.approx(4 * af_power_1d(p.a, p.b, y), rel=1e-9)


def test_block_kron_index_formula(rng):
    U = rng.normal(size=(2, 3))
    W = rng.normal(size=(4, 5))
    out = block_kron(U, W)
    for l in range(2):
        for k in range(3):
            for n in range(4):
                for m in range(5):
                    assert out[l * 4 + n, k * 5 + m] == U[l, k] * W[n, m]
    np.testing.assert_array_equal(out, np.kron(U, W))


def test_expand_ura_trivial_expanders(rng):
    P = WeightPair(random_unimodular(rng, (2, 3)), random_unimodular(rng, (2, 3)))
    out = expand_ura(P, ([[1]], [[1]]), "vertical")
    c = companion(P)
    np.testing.assert_allclose(out.a, np.vstack([P.a, c.a]))
    np.testing.assert_allclose(out.b, np.vstack([P.b, c.b]))


def test_expand_ura_row_expanders_flat():
    P = WeightPair([[1]], [[1]])
    out = expand_ura(P, (np.array([[1, 1]]), np.array([[1, -1]])), "vertical")
    assert out.shape == (2, 2)
    vals = [af_power_2d(out.a, out.b, y, z) for y in PSI[::45] for z in PSI[::45]]
    np.testing.assert_allclose(vals, 8, atol=1e-9)


@pytest.mark.parametrize("orientation,shape", [("vertical", (12, 6)), ("horizontal", (6, 12))])
def test_expand_ura_preserves_pattern(rng, orientation, shape):
    P = WeightPair(random_unimodular(rng, (3, 3)), random_unimodular(rng, (3, 3)))
    U, V = np.array([[1, 1], [1, -1]]), np.array([[1, 1], [-1, 1]])
    assert is_golay_array_pair(U, V)
    out = expand_ura(P, (U, V), orientation)
    assert out.shape == shape
    for y in PSI[::45]:
        for z in PSI[::45]:
            assert af_power_2d(out.a, out.b, y, z) == pytest.approx(
                8 * af_power_2d(P.a, P.b, y, z), rel=1e-9)


def test_expand_ura_rejects():
    P = WeightPair(np.ones((2, 2)), np.ones((2, 2)))
    with pytest.raises(InvalidInputError):
        expand_ura(P, ([[1, 1]], [[1]]))
    with pytest.raises(InvalidInputError):
        expand_ura(P, ([[1]], [[1]]), "diagonal")
    with pytest.raises(InvalidInputError):
        expand_ura(WeightPair([1, 1], [1, 1]), ([[1]], [[1]]))


def test_sidelobe_bound_examples():
    assert sidelobe_bound_after_expansion(0, 0, 2) == 0
    assert sidelobe_bound_after_expansion(1.5, 0, 3) == pytest.approx(9)
    with pytest.raises(InvalidInputError):
        sidelobe_bound_after_expansion(-1, 0, 2)


def test_sidelobe_bound_dense_grid():
    p = pair7()
    r = ripple_bound(7, 0.14)
    bound = sidelobe_bound_after_expansion(r, 0, 2, proto_level=14)
    assert bound == pytest.approx(4 * (2 * 6 * 0.14))
    out = expand_ula(p, KERNEL2)
    psi = np.linspace(-np.pi, np.pi, 4001)
    got = np.array([af_power_1d(out.a, out.b, x) for x in psi])
    assert np.max(np.abs(got - 4 * 14)) <= bound


def test_sidelobe_bound_with_eps_expanders(rng):
    p = random_pair(rng, 4)
    u, v = random_unimodular(rng, 3), random_unimodular(rng, 3)
    r_p = ripple_bound(4, max_sidelobe(p.a, p.b))
    r_e = ripple_bound(3, max_sidelobe(u, v))
    bound = sidelobe_bound_after_expansion(r_p, r_e, 3, proto_level=8)
    out = expand_ula(p, (u, v))
    got = np.array([af_power_1d(out.a, out.b, x) for x in PSI[::4]])
    assert np.max(np.abs(got - 6 * 8)) <= bound + 1e-9


def test_chain_32x14():
    out = ura_32x14(pair7())
    assert out.shape == (32, 14)
    assert is_unimodular(out.a) and is_unimodular(out.b)
    assert chain_gain(URA_32X14_STEPS) == 64
    with pytest.raises(InvalidInputError):
        ura_32x14(WeightPair([1, 1], [1, -1]))


def test_run_chain_and_modes():
    p = WeightPair([1], [1])
    out = run_chain(p, [ExpansionStep("ula", (1, 1), (1, -1)), ExpansionStep("ula2ura-v", (1,), (1,))])
    assert out.shape == (2, 4)
    with pytest.raises(InvalidInputError):
        apply_step(p, ExpansionStep("sideways", (1,), (1,)))
