"""Closed-form common-rate formulas for the AWGN multi-way relay channel.

L users exchange their messages through a single relay; there are no direct
user-to-user links.  Every user transmits at the same power p, the relay at
p0, and all noise variances are 1, so p doubles as the per-user SNR.  All
rates are in bits per channel use and every log is base two.

The module covers the cut-set upper bound, the complete-decode-forward (CDF),
compress-forward (CF), and functional-decode-forward (FDF, basic and
power-rotated) achievable rates, the bound gaps of each strategy, the
CDF/bound crossover power, and regime classification.
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "NO_CROSSOVER",
    "CdfGapReport",
    "RateReport",
    "Regime",
    "RegimeClassification",
    "SystemConfig",
    "TwoUserGapBound",
    "cdf_asymptotic_gap",
    "cdf_rate",
    "cdf_suboptimal_threshold",
    "cdf_ub_crossover",
    "cf_gap",
    "cf_rate",
    "classify_regime",
    "cutset_upper_bound",
    "db_to_linear",
    "fdf_capacity_threshold",
    "fdf_gap_bound_two_user",
    "fdf_rate_basic",
    "fdf_rate_improved",
    "rate_sweep",
]

LN2 = math.log(2.0)


def db_to_linear(snr_db: float) -> float:
    """Convert an SNR in dB to linear power (noise variance is 1)."""
    return 10.0 ** (float(snr_db) / 10.0)


@dataclass(frozen=True)
class SystemConfig:
    """One operating point: ``num_users`` users at power ``p``, relay at ``p0``.

    Powers are linear and noise-normalized.  ``num_users >= 2`` and both
    powers must be finite and nonnegative.
    """

    num_users: int
    p: float
    p0: float

    def __post_init__(self):
        object.__setattr__(self, "num_users", operator.index(self.num_users))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "p0", float(self.p0))
        if self.num_users < 2:
            raise ValueError(f"need at least 2 users, got {self.num_users}")
        if not (math.isfinite(self.p) and self.p >= 0.0):
            raise ValueError(f"user power must be finite and >= 0, got {self.p}")
        if not (math.isfinite(self.p0) and self.p0 >= 0.0):
            raise ValueError(f"relay power must be finite and >= 0, got {self.p0}")

    @classmethod
    def equal_power(cls, num_users: int, p: float) -> "SystemConfig":
        """Config with the relay power matched to the user power (p0 = p)."""
        return cls(num_users, p, p)


def _downlink_rate(num_users: int, p0: float) -> float:
    # Relay-to-user broadcast bottleneck, shared by every strategy and the
    # bound.  Written once so equal regimes compare bit-identically.
    return math.log2(1.0 + p0) / (2.0 * (num_users - 1))


def cutset_upper_bound(cfg: SystemConfig) -> float:
    """Cut-set upper bound on the common rate.

    min{ log2(1 + (L-1)p), log2(1 + p0) } / (2(L-1)).  With p0 = p the
    downlink argument is the smaller one, leaving log2(1 + p) / (2(L-1)).
    """
    l = cfg.num_users
    uplink = math.log2(1.0 + (l - 1) * cfg.p) / (2.0 * (l - 1))
    return min(uplink, _downlink_rate(l, cfg.p0))


def cdf_rate(cfg: SystemConfig) -> float:
    """Common rate achieved when the relay decodes every message in full.

    min{ log2(1 + Lp) / (2L), log2(1 + p0) / (2(L-1)) }.
    """
    l = cfg.num_users
    uplink = math.log2(1.0 + l * cfg.p) / (2.0 * l)
    return min(uplink, _downlink_rate(l, cfg.p0))


def cf_rate(cfg: SystemConfig) -> float:
    """Common rate achieved when the relay quantizes and forwards its input.

    log2(1 + (L-1) p p0 / (1 + (L-1)p + p0)) / (2(L-1)).
    """
    l = cfg.num_users
    effective = (l - 1) * cfg.p * cfg.p0 / (1.0 + (l - 1) * cfg.p + cfg.p0)
    return math.log2(1.0 + effective) / (2.0 * (l - 1))


def fdf_rate_basic(cfg: SystemConfig) -> float:
    """Functional-decode-forward rate without schedule rotation.

    min{ {log2(1/2 + p')}+ , log2(1 + p0) } / (2(L-1)), where the burst power
    is p' = p for two users and ((L-1)/2) p otherwise: with a fixed schedule
    the interior users only get to spend their power budget in two of the
    L-1 uplink blocks.
    """
    l = cfg.num_users
    p_prime = cfg.p if l == 2 else (l - 1) / 2.0 * cfg.p
    uplink = max(math.log2(0.5 + p_prime) / (2.0 * (l - 1)), 0.0)
    return min(uplink, _downlink_rate(l, cfg.p0))


def fdf_rate_improved(cfg: SystemConfig) -> float:
    """Functional-decode-forward rate with the rotated schedule.

    min{ {log2(1/2 + (L/2) p)}+ , log2(1 + p0) } / (2(L-1)).  Rotating the
    active pair across message tuples lets every user burst at (L/2) p while
    still averaging p, which dominates the basic schedule for L >= 3.
    """
    l = cfg.num_users
    uplink = max(math.log2(0.5 + l / 2.0 * cfg.p) / (2.0 * (l - 1)), 0.0)
    return min(uplink, _downlink_rate(l, cfg.p0))


class TwoUserGapBound(NamedTuple):
    """Additive and normalized bounds on the two-user FDF-to-bound gap."""

    epsilon: float
    normalized: float
    normalized_bound: float


def fdf_gap_bound_two_user(p: float) -> TwoUserGapBound:
    """How far the cut-set bound can exceed two-user FDF at power p.

    epsilon = min{1/2, 1/(2(2p+1) ln 2)} satisfies
    fdf <= ub < fdf + epsilon and vanishes as p grows.  ``normalized`` is
    epsilon relative to the bound itself, and ``normalized_bound`` is the
    closed-form dominator 1/((2p+1) ln(1+p)) of that ratio.
    """
    p = float(p)
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError(f"power must be finite and > 0, got {p}")
    epsilon = min(0.5, 1.0 / (2.0 * (2.0 * p + 1.0) * LN2))
    upper = 0.5 * math.log2(1.0 + p)
    return TwoUserGapBound(
        epsilon=epsilon,
        normalized=epsilon / upper,
        normalized_bound=1.0 / ((2.0 * p + 1.0) * math.log(1.0 + p)),
    )


def cf_gap(cfg: SystemConfig) -> float:
    """Exact shortfall of compress-forward from the cut-set bound (p0 = p only).

    log2(1 + 1/((L-1) + 1/p)) / (2(L-1)).  Equals
    cutset_upper_bound - cf_rate, grows toward log2(L/(L-1)) / (2(L-1)) as
    p -> oo, and stays strictly below 1/(2(L-1)) at every power.
    """
    if cfg.p0 != cfg.p:
        raise ValueError("cf_gap requires matched powers (p0 = p)")
    if cfg.p <= 0.0:
        raise ValueError("cf_gap requires p > 0")
    l = cfg.num_users
    return math.log2(1.0 + 1.0 / ((l - 1) + 1.0 / cfg.p)) / (2.0 * (l - 1))


@dataclass(frozen=True)
class CdfGapReport:
    """Shortfall of complete-decode-forward from the cut-set bound (p0 = p).

    ``gap`` is the closed-form asymptote (log2(1+p) - (L-1) log2 L)/(2L(L-1)),
    meaningful when the relay's full-decoding constraint is the binding one;
    ``uplink_limited`` flags that regime and ``exact_gap`` is the directly
    computed ub - cdf at this power.  ``strict_suboptimal`` reports the
    sufficient condition p > L^(L-1) - 1 under which cdf < ub is guaranteed.
    """

    strict_suboptimal: bool
    gap: float
    exact_gap: float
    uplink_limited: bool


def cdf_asymptotic_gap(cfg: SystemConfig) -> CdfGapReport:
    """Closed-form and exact bound gaps of complete-decode-forward (p0 = p)."""
    if cfg.p0 != cfg.p:
        raise ValueError("cdf_asymptotic_gap requires matched powers (p0 = p)")
    l = cfg.num_users
    p = cfg.p
    gap = (math.log2(1.0 + p) - (l - 1) * math.log2(l)) / (2.0 * l * (l - 1))
    ub = cutset_upper_bound(cfg)
    uplink = math.log2(1.0 + l * p) / (2.0 * l)
    return CdfGapReport(
        strict_suboptimal=p > float(l) ** (l - 1) - 1.0,
        gap=gap,
        exact_gap=ub - cdf_rate(cfg),
        uplink_limited=uplink <= _downlink_rate(l, p),
    )


class _NoCrossoverType:
    __slots__ = ()

    def __repr__(self):
        return "NO_CROSSOVER"


#: Distinguished result of cdf_ub_crossover for two users, where
#: complete-decode-forward sits strictly below the bound at every p > 0.
NO_CROSSOVER = _NoCrossoverType()


def cdf_ub_crossover(num_users: int, tol: float = 1e-9, max_iter: int = 200):
    """Largest power at which complete-decode-forward still meets the bound.

    Solves ((1 + Lp)/(1 + p))^(L-1) = 1 + p for p by bisection on
    [1, L^(L-1)] to absolute tolerance ``tol``; the left side dominates at
    the low end and loses by the high end, with a single sign change in
    between.  Below the root, cdf_rate equals cutset_upper_bound (p0 = p);
    above it, cdf_rate is strictly smaller.  The root is always >= 1.

    Returns NO_CROSSOVER for ``num_users == 2``: there the left side is
    smaller for every p > 0, so the bound is never met.
    """
    l = operator.index(num_users)
    if l < 2:
        raise ValueError(f"need at least 2 users, got {l}")
    if l == 2:
        return NO_CROSSOVER

    def excess(p: float) -> float:
        return ((1.0 + l * p) / (1.0 + p)) ** (l - 1) - (1.0 + p)

    lo, hi = 1.0, float(l) ** (l - 1)
    if not (excess(lo) > 0.0 and excess(hi) < 0.0):
        raise ArithmeticError(f"crossover bracket failed for L={l}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def fdf_capacity_threshold(num_users: int) -> float:
    """Power above which functional-decode-forward meets the bound (L >= 3)."""
    l = operator.index(num_users)
    if l < 3:
        raise ValueError("threshold defined for 3 or more users")
    return 1.0 / (l - 2)


def cdf_suboptimal_threshold(num_users: int) -> float:
    """Power above which complete-decode-forward is guaranteed below the bound."""
    l = operator.index(num_users)
    if l < 2:
        raise ValueError(f"need at least 2 users, got {l}")
    return float(l) ** (l - 1) - 1.0


class Regime(enum.Enum):
    CDF_OPTIMAL = "CDF_OPTIMAL"
    FDF_OPTIMAL = "FDF_OPTIMAL"
    BOTH_OPTIMAL = "BOTH_OPTIMAL"
    TWO_USER_BOUNDED = "TWO_USER_BOUNDED"


@dataclass(frozen=True)
class RegimeClassification:
    """Which strategy provably meets the cut-set bound at one power.

    For three or more users ``capacity`` carries the common-rate capacity
    log2(1+p)/(2(L-1)) and ``lower``/``upper`` are None.  For two users no
    strategy closes the gap, so ``capacity`` is None and the classification
    carries the FDF achievable rate and the cut-set bound instead.
    """

    regime: Regime
    capacity: float | None
    lower: float | None
    upper: float | None


def classify_regime(num_users: int, p: float) -> RegimeClassification:
    """Classify the operating point (p0 = p implied).

    With L >= 3 the bound log2(1+p)/(2(L-1)) is the capacity:
    complete-decode-forward meets it for 0 < p <= 1 and
    functional-decode-forward for p >= 1/(L-2), so both claims hold on
    [1/(L-2), 1] and the point is labeled accordingly.
    """
    l = operator.index(num_users)
    p = float(p)
    if l < 2:
        raise ValueError(f"need at least 2 users, got {l}")
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError(f"power must be finite and > 0, got {p}")
    if l == 2:
        cfg = SystemConfig.equal_power(2, p)
        return RegimeClassification(
            regime=Regime.TWO_USER_BOUNDED,
            capacity=None,
            lower=fdf_rate_improved(cfg),
            upper=cutset_upper_bound(cfg),
        )
    capacity = math.log2(1.0 + p) / (2.0 * (l - 1))
    cdf_meets = p <= 1.0
    fdf_meets = p * (l - 2) >= 1.0
    if cdf_meets and fdf_meets:
        regime = Regime.BOTH_OPTIMAL
    elif cdf_meets:
        regime = Regime.CDF_OPTIMAL
    else:
        regime = Regime.FDF_OPTIMAL
    return RegimeClassification(regime=regime, capacity=capacity, lower=None, upper=None)


@dataclass(frozen=True)
class RateReport:
    """Every strategy rate, the bound, and the bound gaps at one grid point."""

    snr_db: float
    p: float
    p0: float
    r_ub: float
    r_cdf: float
    r_cf: float
    r_fdf_basic: float
    r_fdf_improved: float
    gap_cdf: float
    gap_cf: float
    gap_fdf: float


def rate_sweep(num_users: int, snr_db_grid, p0: float | None = None) -> list[RateReport]:
    """Evaluate every strategy across an SNR grid.

    Parameters
    ----------
    num_users : int
        Number of users L >= 2.
    snr_db_grid : iterable of float
        Per-user SNR points in dB; converted as p = 10^(dB/10).
    p0 : float or None
        None lets the relay power track p (the matched-power comparison);
        a number fixes the relay power across the whole sweep.

    Returns
    -------
    list of RateReport, one per grid point in the given order.  The gap
    columns are r_ub minus the strategy rate; gap_fdf uses the improved
    (rotated) FDF rate.
    """
    grid = [float(d) for d in snr_db_grid]
    if not grid:
        raise ValueError("empty SNR grid")
    reports = []
    for snr_db in grid:
        p = db_to_linear(snr_db)
        cfg = SystemConfig(num_users, p, p if p0 is None else p0)
        r_ub = cutset_upper_bound(cfg)
        r_cdf = cdf_rate(cfg)
        r_cf = cf_rate(cfg)
        r_fdf_basic = fdf_rate_basic(cfg)
        r_fdf_improved = fdf_rate_improved(cfg)
        reports.append(
            RateReport(
                snr_db=snr_db,
                p=cfg.p,
                p0=cfg.p0,
                r_ub=r_ub,
                r_cdf=r_cdf,
                r_cf=r_cf,
                r_fdf_basic=r_fdf_basic,
                r_fdf_improved=r_fdf_improved,
                gap_cdf=r_ub - r_cdf,
                gap_cf=r_ub - r_cf,
                gap_fdf=r_ub - r_fdf_improved,
            )
        )
    return reports
