"""Functional-decode-forward over exact channels: schedules and modular algebra.

The uplink works in blocks: in each block exactly two users transmit and the
relay learns the modular sum of their messages.  After L-1 blocks the relay
holds the chain of pairwise sums, broadcasts them (modeled as reliable here),
and every user peels out all other messages from its own message and the
chain.  Everything in this module is integer arithmetic over Z_q, so decoding
is exact and the round error rate must be exactly zero; the noisy-channel
counterpart lives in :mod:`mwrc.lattice`.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "FiniteFieldMessage",
    "PairFunction",
    "PowerAccounting",
    "ScheduleBlock",
    "ThreeUserExampleReport",
    "ThreeUserTrial",
    "TransmissionSchedule",
    "TrialOutcome",
    "basic_schedule",
    "chain_position",
    "chain_user",
    "ff_trials",
    "relay_pair_functions",
    "rotated_schedule",
    "rotation_shift",
    "run_ff_round",
    "three_user_example",
    "user_decode_chain",
    "verify_power_accounting",
]


@dataclass(frozen=True)
class ScheduleBlock:
    """One uplink block: within message tuple ``tuple_index``, the
    ``block_index``-th block, with the two transmitting users in ``pair``."""

    tuple_index: int
    block_index: int
    pair: tuple[int, int]


@dataclass(frozen=True)
class TransmissionSchedule:
    """Block-by-block active-pair assignment over ``window`` message tuples.

    Each block activates exactly two users; all others stay silent.  Within
    one tuple the L-1 active pairs form a path that visits every user, so the
    pairwise sums collected along it determine all messages given any one.
    """

    num_users: int
    window: int
    blocks: tuple[ScheduleBlock, ...]

    def blocks_for_tuple(self, tuple_index: int) -> list[ScheduleBlock]:
        try:
            by_tuple = self._by_tuple
        except AttributeError:
            by_tuple = {}
            for b in self.blocks:
                by_tuple.setdefault(b.tuple_index, []).append(b)
            object.__setattr__(self, "_by_tuple", by_tuple)  # lazy index cache
        if tuple_index not in by_tuple:
            raise ValueError(f"schedule has no tuple {tuple_index}")
        return list(by_tuple[tuple_index])


def basic_schedule(num_users: int) -> TransmissionSchedule:
    """Fixed pairing for one message tuple: block l activates users l and l+1."""
    l_users = operator.index(num_users)
    if l_users < 2:
        raise ValueError(f"need at least 2 users, got {l_users}")
    blocks = tuple(
        ScheduleBlock(tuple_index=1, block_index=l, pair=(l, l + 1))
        for l in range(1, l_users)
    )
    return TransmissionSchedule(num_users=l_users, window=1, blocks=blocks)


def rotation_shift(tuple_index: int, num_users: int) -> int:
    """Relabeling offset of the rotated schedule for a given message tuple."""
    return (tuple_index - 1) % num_users


def chain_user(position: int, shift: int, num_users: int) -> int:
    """User id sitting at 1-based chain position ``position`` under ``shift``."""
    return (position - 1 + shift) % num_users + 1


def chain_position(user: int, shift: int, num_users: int) -> int:
    """Inverse of chain_user: chain position of ``user`` under ``shift``."""
    return (user - 1 - shift) % num_users + 1


def rotated_schedule(num_users: int, tuples: int) -> TransmissionSchedule:
    """Rotate the active pair one position per message tuple.

    In block l of tuple t the users ((l+t-2) mod L)+1 and ((l+t-1) mod L)+1
    transmit.  Over any window of L consecutive tuples every user is active
    in exactly 2L-2 of the L(L-1) blocks, which is what lets each burst at
    (L/2)P while averaging P.
    """
    l_users = operator.index(num_users)
    num_tuples = operator.index(tuples)
    if l_users < 2:
        raise ValueError(f"need at least 2 users, got {l_users}")
    if num_tuples < 1:
        raise ValueError(f"need at least 1 tuple, got {num_tuples}")
    blocks = []
    for t in range(1, num_tuples + 1):
        for l in range(1, l_users):
            a = (l + t - 2) % l_users + 1
            b = (l + t - 1) % l_users + 1
            blocks.append(ScheduleBlock(tuple_index=t, block_index=l, pair=(a, b)))
    return TransmissionSchedule(num_users=l_users, window=num_tuples, blocks=tuple(blocks))


class PowerAccounting(NamedTuple):
    p_prime: float
    average: float


def verify_power_accounting(num_users: int, p: float) -> PowerAccounting:
    """Burst power and window-average power of the rotated schedule.

    Each active user bursts at p' = (L/2) p; being active in 2L-2 of the
    L(L-1) blocks per window brings the average back to exactly p.
    """
    l_users = operator.index(num_users)
    p = float(p)
    if l_users < 2:
        raise ValueError(f"need at least 2 users, got {l_users}")
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError(f"power must be finite and > 0, got {p}")
    p_prime = l_users / 2.0 * p
    average = p_prime * (2 * l_users - 2) / (l_users * (l_users - 1))
    return PowerAccounting(p_prime=p_prime, average=average)


@dataclass(frozen=True, eq=False)
class FiniteFieldMessage:
    """A length-n message over Z_q; symbols are integers in [0, q)."""

    q: int
    symbols: np.ndarray

    def __post_init__(self):
        q = operator.index(self.q)
        symbols = np.asarray(self.symbols, dtype=np.int64)
        if q < 2:
            raise ValueError(f"alphabet size must be >= 2, got {q}")
        if symbols.ndim != 1 or symbols.size == 0:
            raise ValueError("symbols must be a nonempty 1-d vector")
        if symbols.min() < 0 or symbols.max() >= q:
            raise ValueError(f"symbols out of range for Z_{q}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "symbols", symbols)

    @property
    def n(self) -> int:
        return self.symbols.size

    def __eq__(self, other):
        if not isinstance(other, FiniteFieldMessage):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.symbols, other.symbols)


def _wrap_message(q: int, symbols: np.ndarray) -> FiniteFieldMessage:
    # Fast path for arrays already reduced mod q (skips re-validation).
    msg = object.__new__(FiniteFieldMessage)
    object.__setattr__(msg, "q", q)
    object.__setattr__(msg, "symbols", symbols)
    return msg


@dataclass(frozen=True, eq=False)
class PairFunction:
    """The relay's decoded pairwise sum for chain positions (index, index+1)."""

    index: int
    q: int
    value: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, PairFunction):
            return NotImplemented
        return (
            self.index == other.index
            and self.q == other.q
            and np.array_equal(self.value, other.value)
        )


def relay_pair_functions(
    messages: list[FiniteFieldMessage],
    schedule: TransmissionSchedule,
    tuple_index: int = 1,
) -> list[PairFunction]:
    """Pairwise modular sums the relay extracts from one tuple's blocks.

    For the block at position l with active pair (a, b) the relay obtains
    (W_a + W_b) mod q; only the two active users transmit, so the sum-channel
    output is exactly this pair sum.  Under rotation the active pair in block
    l occupies chain positions (l, l+1) of the relabeled user order, so the
    returned functions always form the chain for that tuple.
    """
    if len(messages) != schedule.num_users:
        raise ValueError(
            f"expected {schedule.num_users} messages, got {len(messages)}"
        )
    q = messages[0].q
    n = messages[0].n
    for m in messages:
        if m.q != q or m.n != n:
            raise ValueError("messages must share one alphabet size and length")
    blocks = schedule.blocks_for_tuple(tuple_index)
    if len(blocks) != schedule.num_users - 1:
        raise ValueError("tuple does not cover the full chain")
    out = []
    for block in blocks:
        a, b = block.pair
        value = (messages[a - 1].symbols + messages[b - 1].symbols) % q
        out.append(PairFunction(index=block.block_index, q=q, value=value))
    return out


def user_decode_chain(
    i: int,
    own: FiniteFieldMessage,
    functions: list[PairFunction],
) -> dict[int, FiniteFieldMessage]:
    """Recover every other chain position's message from one's own.

    Position i walks the chain forward, peeling W_{k+1} = (f_k - W_k) mod q
    for k = i..L-1, then backward with W_{k-1} = (f_{k-1} - W_k) mod q down
    to position 1.  The order matters: each step consumes the message
    recovered by the previous one.  Returns {position: message} for every
    position except ``i``.  Exact by modular arithmetic.
    """
    num_positions = len(functions) + 1
    if not 1 <= i <= num_positions:
        raise ValueError(f"decoder position {i} outside [1, {num_positions}]")
    q = own.q
    by_index: dict[int, np.ndarray] = {}
    for f in functions:
        if f.q != q:
            raise ValueError("pair function alphabet does not match the message")
        if f.value.shape != own.symbols.shape:
            raise ValueError("pair function length does not match the message")
        by_index[f.index] = f.value
    if sorted(by_index) != list(range(1, num_positions)):
        raise ValueError("need exactly one pair function per chain edge")
    raw = _chain_decode(i, own.symbols, by_index, q, num_positions)
    return {pos: _wrap_message(q, sym) for pos, sym in raw.items()}


def _chain_decode(
    pos: int,
    own: np.ndarray,
    values: dict[int, np.ndarray],
    q: int,
    num_positions: int,
) -> dict[int, np.ndarray]:
    """Both chain passes on raw symbol arrays, validation already done."""
    out: dict[int, np.ndarray] = {}
    cur = own
    for k in range(pos, num_positions):  # forward pass
        cur = (values[k] - cur) % q
        out[k + 1] = cur
    cur = own
    for k in range(pos, 1, -1):  # backward pass
        cur = (values[k - 1] - cur) % q
        out[k - 1] = cur
    return out


@dataclass(eq=False)
class TrialOutcome:
    """Decode results of one protocol round.

    ``messages`` holds the drawn truth (index j-1 is user j's message),
    ``decoded`` the per-user estimates (index i-1 maps source user id to
    user i's estimate), and ``errors`` the (L, L) flag matrix with
    errors[i-1, j-1] set iff user i misdecoded user j (diagonal stays False).
    """

    messages: tuple[FiniteFieldMessage, ...]
    decoded: tuple[dict[int, FiniteFieldMessage], ...]
    errors: np.ndarray

    @property
    def any_error(self) -> bool:
        return bool(self.errors.any())


def ff_trials(
    num_users: int,
    q: int,
    n: int,
    trials: int,
    seed: int,
    rotation: bool = False,
) -> Iterator[TrialOutcome]:
    """Run protocol rounds over uniform message tuples, yielding each outcome.

    Trial j draws its randomness from a counter-based stream keyed by
    (seed, j), so the outcome stream is reproducible and independent of any
    batching a caller applies.  With ``rotation`` the tuple index advances
    with the trial index, cycling the schedule through all L relabelings.
    """
    l_users = operator.index(num_users)
    q = operator.index(q)
    n = operator.index(n)
    seed = operator.index(seed)
    if l_users < 2 or q < 2 or n < 1:
        raise ValueError("invalid protocol sizes")
    if operator.index(trials) < 1:
        raise ValueError("need at least one trial")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    schedule = rotated_schedule(l_users, l_users) if rotation else basic_schedule(l_users)
    base = np.arange(l_users)
    # Solving est[m+1] = f[m] - est[m] from any anchor gives
    # est[m] = A[m] + (-1)^(m-p) * (own - A[p]) with A the alternating
    # prefix A[0] = 0, A[m] = f[m-1] - A[m-1].  parity[p, m] is that sign,
    # so one broadcast evaluates every decoder at every chain position.
    parity = 1 - 2 * ((base[None, :] - base[:, None]) & 1)
    for j in range(trials):
        rng = np.random.Generator(np.random.Philox([seed, j]))
        drawn = rng.integers(0, q, size=(l_users, n))
        messages = tuple(_wrap_message(q, drawn[u]) for u in range(l_users))
        tuple_index = (j % l_users) + 1 if rotation else 1
        shift = rotation_shift(tuple_index, l_users)
        functions = relay_pair_functions(list(messages), schedule, tuple_index)
        user_at = (base + shift) % l_users
        chain = drawn[user_at]
        f_mat = np.empty((l_users - 1, n), dtype=np.int64)
        for f in functions:
            f_mat[f.index - 1] = f.value
        alt = np.zeros((l_users, n), dtype=np.int64)
        for m in range(1, l_users):
            alt[m] = f_mat[m - 1] - alt[m - 1]
        est = (alt[None, :, :] + parity[:, :, None] * (chain - alt)[:, None, :]) % q
        wrong = (est != chain[None, :, :]).any(axis=2)
        errors = np.zeros((l_users, l_users), dtype=bool)
        errors[np.ix_(user_at, user_at)] = wrong
        decoded = [None] * l_users
        for p in range(l_users):
            row = est[p]
            decoded[user_at[p]] = {
                int(user_at[m]) + 1: _wrap_message(q, row[m])
                for m in range(l_users)
                if m != p
            }
        yield TrialOutcome(messages=messages, decoded=tuple(decoded), errors=errors)


def run_ff_round(
    num_users: int,
    q: int,
    n: int,
    trials: int,
    seed: int,
    rotation: bool = False,
) -> float:
    """Fraction of trials where any user misdecodes any message.

    The protocol is exact modular arithmetic over reliable channels, so this
    must come out exactly 0; anything else is an implementation fault.
    """
    failed = sum(
        1 for outcome in ff_trials(num_users, q, n, trials, seed, rotation)
        if outcome.any_error
    )
    return failed / trials


@dataclass(frozen=True)
class ThreeUserTrial:
    """One message tuple of the three-user walkthrough."""

    messages: tuple[int, int, int]
    relay: tuple[int, int]
    correct: bool


@dataclass(frozen=True)
class ThreeUserExampleReport:
    """Rates and exhaustive decode results of the three-user XOR walkthrough."""

    fdf_rate: float
    cdf_bound: float
    ceiling: float
    trials: tuple[ThreeUserTrial, ...]
    all_correct: bool


def three_user_example() -> ThreeUserExampleReport:
    """Three users exchanging one bit each through a relay in two XOR phases.

    Phase one: users 1 and 2 transmit, user 3 silent, so the parity uplink
    hands the relay W1 xor W2.  Phase two: users 2 and 3 transmit, giving
    W2 xor W3.  The relay broadcasts both parities and each user recovers the
    other two bits by chaining xors with its own bit.  One bit per user in
    two channel uses makes the rate 1/2, which matches the cut-set ceiling;
    a relay that insisted on decoding both foreign messages in full would
    need at least three uses, capping it at 1/3.
    """
    schedule = basic_schedule(3)
    results = []
    for bits in product((0, 1), repeat=3):
        messages = [FiniteFieldMessage(2, np.array([w])) for w in bits]
        functions = relay_pair_functions(messages, schedule)
        relay = (int(functions[0].value[0]), int(functions[1].value[0]))
        correct = True
        for i in (1, 2, 3):
            estimates = user_decode_chain(i, messages[i - 1], functions)
            for j, est in estimates.items():
                if int(est.symbols[0]) != bits[j - 1]:
                    correct = False
        results.append(ThreeUserTrial(messages=bits, relay=relay, correct=correct))
    return ThreeUserExampleReport(
        fdf_rate=0.5,
        cdf_bound=1.0 / 3.0,
        ceiling=0.5,
        trials=tuple(results),
        all_correct=all(r.correct for r in results),
    )
