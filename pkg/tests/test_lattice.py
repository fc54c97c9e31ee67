"""Mod-lattice algebra, dithered encoding, and the AWGN Monte Carlo.

Analytic error probabilities for the bracket tests were frozen from a
high-precision Gaussian-tail evaluation of the decision-region geometry.
"""

import math

import numpy as np
import pytest

from mwrc import (
    NestedLatticePair,
    encode_lattice,
    mod_lattice,
    random_dithers,
    relay_decode_sum,
    simulate_awgn_fdf,
)

# analytic relay error estimates at (L=2, M=2), unit noise, p' = p
NAIVE_TAIL_0DB = 0.38647623077123266   # 2 Q(gamma/4), gamma = sqrt(12)
NAIVE_TAIL_20DB = 4.7071405901403864e-18
WRAPPED_EXACT_0DB = 0.37711636330469051  # mod-2 folding of the index error


def test_pair_construction():
    pair = NestedLatticePair(4.0, 4)
    assert pair.power == pytest.approx(16.0 / 12.0, rel=1e-15)
    assert pair.fine_spacing == pytest.approx(1.0, rel=1e-15)
    rt = NestedLatticePair.for_power(2.5, 8)
    assert rt.power == pytest.approx(2.5, rel=1e-12)
    assert rt.m == 8


def test_pair_validation():
    with pytest.raises(ValueError):
        NestedLatticePair(0.0, 4)
    with pytest.raises(ValueError):
        NestedLatticePair(-1.0, 4)
    with pytest.raises(ValueError):
        NestedLatticePair(math.inf, 4)
    with pytest.raises(ValueError):
        NestedLatticePair(1.0, 1)


def test_mod_lattice_examples():
    pair = NestedLatticePair(4.0, 4)
    assert mod_lattice(0.0, pair) == 0.0
    assert mod_lattice(3.0, pair) == pytest.approx(-1.0, abs=1e-15)  # 0.75 gamma
    assert mod_lattice(2.0, pair) == -2.0   # tie at +gamma/2 folds down
    assert mod_lattice(-2.0, pair) == -2.0
    for k in range(-5, 6):
        for r in (-1.9, -0.7, 0.0, 1.3, 1.99):
            assert mod_lattice(k * 4.0 + r, pair) == pytest.approx(r, abs=1e-9 * 4.0)


def test_mod_lattice_idempotent_and_ranged():
    pair = NestedLatticePair(math.sqrt(12.0), 4)
    rng = np.random.default_rng(21)
    x = rng.uniform(-10 * pair.gamma, 10 * pair.gamma, size=10_000)
    once = mod_lattice(x, pair)
    assert np.array_equal(mod_lattice(once, pair), once)
    g = pair.gamma
    assert np.all(once >= -g / 2 - 1e-9 * g)
    assert np.all(once < g / 2 + 1e-9 * g)


def test_mod_lattice_group_property():
    pair = NestedLatticePair(2.5, 2)
    rng = np.random.default_rng(22)
    a = rng.uniform(-20.0, 20.0, size=10_000)
    b = rng.uniform(-20.0, 20.0, size=10_000)
    lhs = mod_lattice(mod_lattice(a, pair) + mod_lattice(b, pair), pair)
    rhs = mod_lattice(a + b, pair)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * pair.gamma


def test_encode_examples():
    pair = NestedLatticePair(4.0, 4)
    assert encode_lattice(0, 0.0, pair) == 0.0
    assert encode_lattice(1, 0.0, pair) == pytest.approx(1.0, abs=1e-15)
    assert encode_lattice(3, 0.0, pair) == pytest.approx(-1.0, abs=1e-15)  # folds
    with pytest.raises(ValueError):
        encode_lattice(4, 0.0, pair)
    with pytest.raises(ValueError):
        encode_lattice(-1, 0.0, pair)


def test_encode_power_compliance():
    # uniform-on-cell output: E[x^2] = gamma^2/12 within 3 standard errors
    pair = NestedLatticePair(math.sqrt(12.0), 4)
    rng = np.random.default_rng(5)
    w = rng.integers(0, pair.m, size=1_000_000)
    d = random_dithers(pair, 1_000_000, rng)
    x = encode_lattice(w, d, pair)
    assert np.all(np.abs(x) <= pair.gamma / 2 + 1e-12)
    tol = 3.0 * math.sqrt(4.0 / 5.0) / 1e3  # 3 * sqrt(Var[x^2]/N), N = 1e6
    assert abs(np.mean(x * x) - pair.power) <= tol


def test_random_dithers_range():
    pair = NestedLatticePair(6.0, 2)
    d = random_dithers(pair, 5000, np.random.default_rng(77))
    assert np.all(d >= -3.0) and np.all(d < 3.0)
    assert np.std(d) == pytest.approx(pair.gamma / math.sqrt(12.0), rel=0.05)


@pytest.mark.parametrize("m", [2, 4, 8])
def test_relay_decode_noiseless_exhaustive(m):
    pair = NestedLatticePair.for_power(1.7, m)
    rng = np.random.default_rng(100 + m)
    d = random_dithers(pair, (1000, 2), rng)
    for wa in range(m):
        for wb in range(m):
            xa = encode_lattice(wa, d[:, 0], pair)
            xb = encode_lattice(wb, d[:, 1], pair)
            got = relay_decode_sum(xa + xb, d[:, 0], d[:, 1], pair)
            assert np.all(got == (wa + wb) % m), (m, wa, wb)


def test_relay_decode_trivial_and_boundary():
    pair = NestedLatticePair(4.0, 4)
    assert relay_decode_sum(0.0, 0.0, 0.0, pair) == 0
    # fine-cell half-width is gamma/(2M) = 0.5; 1.5x that must misdecode
    assert relay_decode_sum(0.75, 0.0, 0.0, pair) != 0
    assert relay_decode_sum(0.4, 0.0, 0.0, pair) == 0


def test_relay_decode_neighbor_slip():
    # noise just past the boundary lands exactly one index over, mod M
    pair = NestedLatticePair.for_power(3.0, 8)
    rng = np.random.default_rng(9)
    step = 0.51 * pair.fine_spacing
    for _ in range(50):
        wa, wb = rng.integers(0, 8, size=2)
        d = random_dithers(pair, 2, rng)
        y = encode_lattice(wa, d[0], pair) + encode_lattice(wb, d[1], pair)
        assert relay_decode_sum(y + step, d[0], d[1], pair) == (wa + wb + 1) % 8
        assert relay_decode_sum(y - step, d[0], d[1], pair) == (wa + wb - 1) % 8


def test_relay_decode_dither_invariance():
    pair = NestedLatticePair.for_power(0.9, 4)
    rng = np.random.default_rng(31)
    for wa, wb in ((0, 0), (1, 3), (2, 2), (3, 1)):
        d = random_dithers(pair, (1000, 2), rng)
        xa = encode_lattice(wa, d[:, 0], pair)
        xb = encode_lattice(wb, d[:, 1], pair)
        got = relay_decode_sum(xa + xb, d[:, 0], d[:, 1], pair)
        assert np.unique(got).size == 1
        assert got[0] == (wa + wb) % 4


def test_simulate_validation():
    with pytest.raises(ValueError):
        simulate_awgn_fdf(1, 2, [0.0], 10, seed=0)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 1, [0.0], 10, seed=0)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [], 10, seed=0)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [0.0], 0, seed=0)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [math.nan], 10, seed=0)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [-math.inf], 10, seed=0)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [0.0], 10, seed=0, workers=-1)
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [0.0], 10, seed=-1)


def test_simulate_noiseless_sentinel():
    pts = simulate_awgn_fdf(5, 4, [math.inf], 3000, seed=3)
    assert pts[0].relay_errors == 0 and pts[0].tuple_errors == 0
    assert pts[0].relay_ser == 0.0 and pts[0].e2e_error_rate == 0.0
    # rotation covers all 5 shifts across 3000 trials; exactness proves the
    # relabeled encode/decode bookkeeping is consistent
    mixed = simulate_awgn_fdf(3, 8, [0.0, math.inf], 2000, seed=4)
    assert mixed[1].relay_errors == 0
    assert mixed[0].relay_errors > 0


def test_simulate_deterministic():
    a = simulate_awgn_fdf(2, 2, [0.0, 10.0], 20_000, seed=17)
    b = simulate_awgn_fdf(2, 2, [0.0, 10.0], 20_000, seed=17)
    assert a == b
    c = simulate_awgn_fdf(2, 2, [0.0, 10.0], 20_000, seed=18)
    assert a != c


def test_simulate_worker_count_invariance():
    runs = [
        simulate_awgn_fdf(3, 4, [0.0, 6.0], 12_000, seed=8, workers=w)
        for w in (1, 2, 8)
    ]
    assert runs[0] == runs[1] == runs[2]


def test_simulate_env_worker_control(monkeypatch):
    base = simulate_awgn_fdf(2, 2, [4.0], 9000, seed=12, workers=1)
    monkeypatch.setenv("MWRC_THREADS", "3")
    assert simulate_awgn_fdf(2, 2, [4.0], 9000, seed=12) == base
    monkeypatch.setenv("MWRC_THREADS", "0")
    assert simulate_awgn_fdf(2, 2, [4.0], 9000, seed=12) == base
    monkeypatch.setenv("MWRC_THREADS", "many")
    with pytest.raises(ValueError):
        simulate_awgn_fdf(2, 2, [4.0], 9000, seed=12)


def test_simulate_ser_monotone_in_snr():
    grid = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0]
    trials = 20_000
    pts = simulate_awgn_fdf(2, 2, grid, trials, seed=23)
    for lo, hi in zip(pts, pts[1:]):
        sigma = math.sqrt(max(lo.relay_ser * (1 - lo.relay_ser), 1e-12) / trials)
        sigma += math.sqrt(max(hi.relay_ser * (1 - hi.relay_ser), 1e-12) / trials)
        assert hi.relay_ser <= lo.relay_ser + 3.0 * sigma


def test_simulate_matches_analytic_bracket():
    # within a factor of 4 of the pairwise-boundary estimate, plus Monte
    # Carlo slack that dominates when the true rate is far below 1/trials
    trials = 100_000
    pts = simulate_awgn_fdf(2, 2, [0.0, 20.0], trials, seed=29)
    for pt, analytic in ((pts[0], NAIVE_TAIL_0DB), (pts[1], NAIVE_TAIL_20DB)):
        slack = 5.0 * math.sqrt(analytic * (1 - analytic) / trials) + 5.0 / trials
        assert analytic / 4 - slack <= pt.relay_ser <= 4 * analytic + slack
    assert pts[0].relay_ser == pytest.approx(WRAPPED_EXACT_0DB, abs=0.008)
    assert pts[1].relay_ser < pts[0].relay_ser


def test_simulate_two_user_block_structure():
    # one block for two users: tuple errors and relay errors coincide
    pts = simulate_awgn_fdf(2, 2, [0.0], 30_000, seed=41)
    assert pts[0].tuple_errors == pts[0].relay_errors
    assert pts[0].e2e_error_rate == pts[0].relay_ser


def test_simulate_multiuser_error_bounds():
    # any block error spoils the tuple, so the rates sandwich
    pts = simulate_awgn_fdf(3, 2, [0.0], 20_000, seed=43)
    pt = pts[0]
    assert pt.relay_ser <= pt.e2e_error_rate <= 2 * pt.relay_ser + 1e-12
    assert pt.relay_errors > 0


def test_simulate_downlink_feasibility_flag():
    pts = simulate_awgn_fdf(2, 2, [0.0, 20.0], 1000, seed=2)
    assert not pts[0].downlink_ok   # log2(2) = 1 > log2(2)/2
    assert pts[1].downlink_ok


def test_simulate_chunk_straddling_trial_counts():
    # 4097 trials spans two chunks; totals must still be consistent
    pts = simulate_awgn_fdf(2, 2, [0.0], 4097, seed=6)
    assert pts[0].trials == 4097
    assert 0 < pts[0].relay_errors < 4097
    again = simulate_awgn_fdf(2, 2, [0.0], 4097, seed=6, workers=4)
    assert pts == again
