"""Scalar nested-lattice coding over the AWGN sum uplink, with Monte Carlo.

One-dimensional stand-in for high-dimensional nested lattice codes: the
coarse lattice gamma*Z shapes power, the fine lattice (gamma/m)*Z carries the
m-ary codebook inside the cell [-gamma/2, gamma/2), and the relay decodes the
mod-m sum index of the two users active in each block.  The mod-lattice
algebra is exact and fully testable at n = 1; what a scalar lattice cannot do
is reach the high-dimensional rate thresholds, so the simulator only makes
error-rate claims (exact zero without noise, decaying error rate with SNR),
never rate claims.
"""

from __future__ import annotations

import math
import operator
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .rates import db_to_linear

__all__ = [
    "LatticeSimPoint",
    "NestedLatticePair",
    "encode_lattice",
    "mod_lattice",
    "random_dithers",
    "relay_decode_sum",
    "simulate_awgn_fdf",
]

# Trials are packed into fixed-size chunks; each chunk owns a counter-based
# RNG stream keyed by (seed, snr index, chunk index), so any assignment of
# chunks to workers reproduces the same bits.
_TRIAL_CHUNK = 4096


@dataclass(frozen=True)
class NestedLatticePair:
    """Coarse lattice gamma*Z nested in the fine lattice (gamma/m)*Z.

    The cell [-gamma/2, gamma/2) contains exactly ``m`` fine points, the
    per-block codebook; ``power`` is the second moment of the uniform
    distribution on the cell, gamma^2/12.
    """

    gamma: float
    m: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "m", operator.index(self.m))
        if not (math.isfinite(self.gamma) and self.gamma > 0.0):
            raise ValueError(f"coarse spacing must be finite and > 0, got {self.gamma}")
        if self.m < 2:
            raise ValueError(f"fine-to-coarse ratio must be >= 2, got {self.m}")

    @property
    def power(self) -> float:
        return self.gamma * self.gamma / 12.0

    @property
    def fine_spacing(self) -> float:
        return self.gamma / self.m

    @classmethod
    def for_power(cls, power: float, m: int) -> "NestedLatticePair":
        """Pair whose cell second moment equals ``power``."""
        return cls(math.sqrt(12.0 * float(power)), m)


def mod_lattice(x, pair: NestedLatticePair):
    """Reduce x into the cell [-gamma/2, gamma/2).

    Subtracts the nearest coarse point gamma*round(x/gamma), with ties
    rounded toward +inf (so +gamma/2 folds to -gamma/2); one fixed rule keeps
    exact boundary tests reproducible.  Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=np.float64)
    g = pair.gamma
    out = arr - g * np.floor(arr / g + 0.5)
    return float(out) if out.ndim == 0 else out


def encode_lattice(w, d, pair: NestedLatticePair):
    """Dithered codeword for index w in [0, m): x = (v(w) + d) mod-lattice.

    v(w) folds w*gamma/m into the cell.  With d uniform on the cell the
    transmitted x is uniform on the cell for every w, so the transmit power
    is exactly pair.power.
    """
    w_arr = np.asarray(w)
    if np.any((w_arr < 0) | (w_arr >= pair.m)):
        raise ValueError(f"message index out of [0, {pair.m})")
    v = mod_lattice(w_arr * (pair.gamma / pair.m), pair)
    return mod_lattice(v + d, pair)


def relay_decode_sum(y, d_a, d_b, pair: NestedLatticePair):
    """Decode the mod-m sum index of the two active users from one block.

    Strips both dithers and folds: s = mod(y - d_a - d_b) is congruent to
    v(w_a) + v(w_b) plus channel noise, so snapping s to the fine grid and
    reducing mod m yields (w_a + w_b) mod m whenever the folded noise stays
    inside the fine cell (magnitude below gamma/(2m)); with zero noise the
    result is exact for every message pair and any dithers.
    """
    s = mod_lattice(np.asarray(y, dtype=np.float64) - d_a - d_b, pair)
    k = np.floor(np.asarray(s) * (pair.m / pair.gamma) + 0.5)  # ties toward +inf
    idx = k.astype(np.int64) % pair.m
    return int(idx) if idx.ndim == 0 else idx


def random_dithers(pair: NestedLatticePair, size, rng: np.random.Generator):
    """Draw dithers uniform on the cell [-gamma/2, gamma/2)."""
    return (rng.random(size) - 0.5) * pair.gamma


@dataclass(frozen=True)
class LatticeSimPoint:
    """Monte Carlo result at one SNR point.

    ``relay_ser`` is the fraction of block function decodes that were wrong,
    ``e2e_error_rate`` the fraction of trials where any user's decode chain
    recovered any message incorrectly.  ``downlink_ok`` reports whether a
    matched-power relay (p0 = p) could reliably carry one of the m function
    values per downlink use, log2(m) <= log2(1 + p)/2; the simulator models
    that broadcast as reliable either way.
    """

    snr_db: float
    relay_ser: float
    e2e_error_rate: float
    trials: int
    relay_errors: int
    tuple_errors: int
    downlink_ok: bool


def _simulate_chunk(num_users, pair, dithers, sigma, seed, snr_index, chunk_index, start, count):
    """Integer error counts for trials [start, start+count) at one SNR point."""
    rng = np.random.Generator(np.random.Philox([seed, snr_index, chunk_index]))
    m = pair.m
    msgs = rng.integers(0, m, size=(count, num_users))
    noise = rng.standard_normal(size=(count, num_users - 1))

    # Rotation: trial j runs message tuple j+1, whose chain position c holds
    # user (c + j) % L -- the same assignment rotated_schedule makes.
    rows = np.arange(count)[:, None]
    shift = (start + np.arange(count)) % num_users
    pos_user = (np.arange(num_users)[None, :] + shift[:, None]) % num_users
    w_chain = msgs[rows, pos_user]
    d_chain = dithers[pos_user]
    x_chain = encode_lattice(w_chain, d_chain, pair)

    blocks = num_users - 1
    f_hat = np.empty((count, blocks), dtype=np.int64)
    for bl in range(blocks):
        y = x_chain[:, bl] + x_chain[:, bl + 1] + sigma * noise[:, bl]
        f_hat[:, bl] = relay_decode_sum(y, d_chain[:, bl], d_chain[:, bl + 1], pair)
    f_true = (w_chain[:, :-1] + w_chain[:, 1:]) % m
    relay_errors = int(np.count_nonzero(f_hat != f_true))

    # Reliable broadcast of f_hat; every user walks the decode chain from its
    # own chain position, exactly as in the finite-field protocol.
    tuple_error = np.zeros(count, dtype=bool)
    for pos in range(num_users):
        cur = w_chain[:, pos]
        for k in range(pos, blocks):  # forward pass
            cur = (f_hat[:, k] - cur) % m
            tuple_error |= cur != w_chain[:, k + 1]
        cur = w_chain[:, pos]
        for k in range(pos - 1, -1, -1):  # backward pass
            cur = (f_hat[:, k] - cur) % m
            tuple_error |= cur != w_chain[:, k]
    return relay_errors, int(np.count_nonzero(tuple_error))


def _resolve_workers(workers) -> int:
    if workers is None:
        raw = os.environ.get("MWRC_THREADS", "0")
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"MWRC_THREADS must be an integer, got {raw!r}") from None
    workers = operator.index(workers)
    if workers < 0:
        raise ValueError(f"worker count must be >= 0, got {workers}")
    return workers if workers > 0 else (os.cpu_count() or 1)


def simulate_awgn_fdf(
    num_users: int,
    m: int,
    snr_db_grid,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> list[LatticeSimPoint]:
    """Monte Carlo of rotated-schedule FDF over the AWGN sum uplink.

    At each grid point p = 10^(dB/10), active users burst at p' = (L/2) p
    (gamma = sqrt(12 p')) against unit-variance relay noise.  Per trial: draw
    a uniform message tuple, encode the two active users per block with fixed
    per-user dithers, pass the sum channel, let the relay decode each block's
    pair-sum index, then run every user's decode chain over Z_m on the
    (reliably broadcast) indices.  An entry of +inf dB is the noiseless
    sentinel: zero noise variance at reference power p = 1, where exact
    mod-lattice algebra forces both error rates to 0.

    Dithers are fixed per user for the whole experiment (drawn once from the
    seed, scaled to each point's cell).  Trials are chunked; each chunk draws
    from a counter-based stream keyed by (seed, snr index, chunk index) and
    contributes integer error counts, so results are bit-identical for any
    ``workers`` (None reads MWRC_THREADS; 0 or unset means CPU count).
    """
    l_users = operator.index(num_users)
    m = operator.index(m)
    trials = operator.index(trials)
    seed = operator.index(seed)
    if l_users < 2:
        raise ValueError(f"need at least 2 users, got {l_users}")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    if m < 2:
        raise ValueError(f"codebook size must be >= 2, got {m}")
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    grid = [float(s) for s in snr_db_grid]
    if not grid:
        raise ValueError("empty SNR grid")
    for s in grid:
        if math.isnan(s) or s == -math.inf:
            raise ValueError(f"bad SNR grid entry {s}")
    workers = _resolve_workers(workers)

    # Scale-free dither draw, fixed per user per experiment.
    dither_units = np.random.Generator(np.random.Philox([seed])).random(l_users) - 0.5

    chunk_bounds = [
        (ci, lo, min(lo + _TRIAL_CHUNK, trials) - lo)
        for ci, lo in enumerate(range(0, trials, _TRIAL_CHUNK))
    ]
    points = []
    for snr_index, snr_db in enumerate(grid):
        if math.isinf(snr_db):
            p, sigma = 1.0, 0.0
        else:
            p, sigma = db_to_linear(snr_db), 1.0
        pair = NestedLatticePair.for_power(l_users / 2.0 * p, m)
        dithers = pair.gamma * dither_units

        def run(args):
            ci, lo, cnt = args
            return _simulate_chunk(
                l_users, pair, dithers, sigma, seed, snr_index, ci, lo, cnt
            )

        if workers == 1 or len(chunk_bounds) == 1:
            results = [run(args) for args in chunk_bounds]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run, chunk_bounds))
        relay_errors = sum(r for r, _ in results)
        tuple_errors = sum(t for _, t in results)
        points.append(
            LatticeSimPoint(
                snr_db=snr_db,
                relay_ser=relay_errors / (trials * (l_users - 1)),
                e2e_error_rate=tuple_errors / trials,
                trials=trials,
                relay_errors=relay_errors,
                tuple_errors=tuple_errors,
                downlink_ok=math.log2(m) <= 0.5 * math.log2(1.0 + p),
            )
        )
    return points
