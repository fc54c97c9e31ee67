"""AWGN multi-way relay channel: rate formulas, exact protocol, Monte Carlo.

L users exchange messages through a single relay with no direct links.  The
package computes every closed-form rate, bound, and gap for the standard
relaying strategies, runs the functional-decode-forward protocol exactly over
finite fields, and simulates its scalar nested-lattice realization over AWGN.
"""

from .lattice import (
    LatticeSimPoint,
    NestedLatticePair,
    encode_lattice,
    mod_lattice,
    random_dithers,
    relay_decode_sum,
    simulate_awgn_fdf,
)
from .protocol import (
    FiniteFieldMessage,
    PairFunction,
    PowerAccounting,
    ScheduleBlock,
    ThreeUserExampleReport,
    ThreeUserTrial,
    TransmissionSchedule,
    TrialOutcome,
    basic_schedule,
    chain_position,
    chain_user,
    ff_trials,
    relay_pair_functions,
    rotated_schedule,
    rotation_shift,
    run_ff_round,
    three_user_example,
    user_decode_chain,
    verify_power_accounting,
)
from .rates import (
    NO_CROSSOVER,
    CdfGapReport,
    RateReport,
    Regime,
    RegimeClassification,
    SystemConfig,
    TwoUserGapBound,
    cdf_asymptotic_gap,
    cdf_rate,
    cdf_suboptimal_threshold,
    cdf_ub_crossover,
    cf_gap,
    cf_rate,
    classify_regime,
    cutset_upper_bound,
    db_to_linear,
    fdf_capacity_threshold,
    fdf_gap_bound_two_user,
    fdf_rate_basic,
    fdf_rate_improved,
    rate_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CdfGapReport",
    "FiniteFieldMessage",
    "LatticeSimPoint",
    "NO_CROSSOVER",
    "NestedLatticePair",
    "PairFunction",
    "PowerAccounting",
    "RateReport",
    "Regime",
    "RegimeClassification",
    "ScheduleBlock",
    "SystemConfig",
    "ThreeUserExampleReport",
    "ThreeUserTrial",
    "TransmissionSchedule",
    "TrialOutcome",
    "TwoUserGapBound",
    "basic_schedule",
    "cdf_asymptotic_gap",
    "cdf_rate",
    "cdf_suboptimal_threshold",
    "cdf_ub_crossover",
    "cf_gap",
    "cf_rate",
    "chain_position",
    "chain_user",
    "classify_regime",
    "cutset_upper_bound",
    "db_to_linear",
    "encode_lattice",
    "fdf_capacity_threshold",
    "fdf_gap_bound_two_user",
    "fdf_rate_basic",
    "fdf_rate_improved",
    "ff_trials",
    "mod_lattice",
    "random_dithers",
    "rate_sweep",
    "relay_decode_sum",
    "relay_pair_functions",
    "rotated_schedule",
    "rotation_shift",
    "run_ff_round",
    "simulate_awgn_fdf",
    "three_user_example",
    "user_decode_chain",
    "verify_power_accounting",
]
