"""Command-line front end: sweeps, regime tables, simulations, CSV out.

Every command is deterministic given its full flag set, emits CSV (comma,
``.`` decimal, LF endings, header row) or a small text table, and writes to
``--out PATH`` or stdout.  Exit status 0 means the command completed; any
failure exits nonzero with a single-line diagnostic.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from .lattice import simulate_awgn_fdf
from .protocol import (
    ff_trials,
    rotated_schedule,
    verify_power_accounting,
)
from .rates import (
    NO_CROSSOVER,
    cdf_suboptimal_threshold,
    cdf_ub_crossover,
    db_to_linear,
    fdf_capacity_threshold,
    rate_sweep,
)

__all__ = ["main"]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _parse_db_grid(text: str) -> list[float]:
    """Parse ``start:stop:step`` in dB, endpoints inclusive.

    Steps with exact decimal arithmetic so the row count never drifts with
    floating rounding; requires step > 0 and start <= stop.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"SNR grid must be start:stop:step in dB, got {text!r}"
        )
    try:
        start, stop, step = (Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"SNR grid must be start:stop:step in dB, got {text!r}"
        ) from None
    if step <= 0:
        raise argparse.ArgumentTypeError(f"SNR step must be > 0, got {parts[2]}")
    if start > stop:
        raise argparse.ArgumentTypeError(
            f"empty SNR range: start {parts[0]} exceeds stop {parts[1]}"
        )
    grid = []
    point = start
    while point <= stop:
        grid.append(float(point))
        point += step
    return grid


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _users(text: str) -> int:
    value = _positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 users, got {value}")
    return value


def cmd_rates(args) -> str:
    if args.p0 == "equal":
        p0 = None
    else:
        try:
            p0 = db_to_linear(float(args.p0))
        except ValueError:
            raise ValueError(
                f"--p0 must be 'equal' or a relay SNR in dB, got {args.p0!r}"
            ) from None
    rows = [
        "snr_db,p,r_ub,r_cdf,r_cf,r_fdf_basic,r_fdf_improved,gap_cdf,gap_cf,gap_fdf"
    ]
    for r in rate_sweep(args.l, args.snr_db, p0=p0):
        rows.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.snr_db,
                    r.p,
                    r.r_ub,
                    r.r_cdf,
                    r.r_cf,
                    r.r_fdf_basic,
                    r.r_fdf_improved,
                    r.gap_cdf,
                    r.gap_cf,
                    r.gap_fdf,
                )
            )
        )
    return "\n".join(rows) + "\n"


def cmd_regimes(args) -> str:
    rows = ["l,p_star,fdf_threshold,cdf_suboptimal_threshold"]
    for l in args.l:
        p_star = cdf_ub_crossover(l)
        star = "NO_CROSSOVER" if p_star is NO_CROSSOVER else _fmt(p_star)
        fdf = _fmt(fdf_capacity_threshold(l)) if l >= 3 else "inf"
        rows.append(f"{l},{star},{fdf},{_fmt(cdf_suboptimal_threshold(l))}")
    return "\n".join(rows) + "\n"


def cmd_sim_ff(args) -> str:
    errors = 0
    for trial in ff_trials(
        args.l, args.q, args.n, args.trials, args.seed, rotation=args.rotation
    ):
        errors += bool(trial.any_error)
    rows = [
        "l,q,n,trials,seed,errors,error_rate",
        f"{args.l},{args.q},{args.n},{args.trials},{args.seed},{errors},"
        f"{_fmt(errors / args.trials)}",
    ]
    return "\n".join(rows) + "\n"


def cmd_sim_lattice(args) -> str:
    points = simulate_awgn_fdf(args.l, args.m, args.snr_db, args.trials, args.seed)
    rows = ["snr_db,relay_ser,e2e_err_rate,trials"]
    for pt in points:
        rows.append(
            f"{_fmt(pt.snr_db)},{_fmt(pt.relay_ser)},{_fmt(pt.e2e_error_rate)},"
            f"{pt.trials}"
        )
    return "\n".join(rows) + "\n"


def cmd_schedule(args) -> str:
    schedule = rotated_schedule(args.l, args.tuples)
    rows = ["tuple_index,block_index,user_a,user_b"]
    for block in schedule.blocks:
        rows.append(
            f"{block.tuple_index},{block.block_index},{block.pair[0]},{block.pair[1]}"
        )
    acct = verify_power_accounting(args.l, args.p)
    rows.append(
        f"power: p = {_fmt(args.p)}, burst p_prime = (l/2) p = {_fmt(acct.p_prime)}, "
        f"window average = {_fmt(acct.average)}"
    )
    return "\n".join(rows) + "\n"


# Values like "-20:-20:1" start with "-" but are grid arguments, not flags;
# widen the matcher argparse uses to spot negative-number-shaped values.
_NEGATIVE_VALUE = re.compile(r"^-\d+$|^-\d*\.\d+$|^-?[\d.]+:[-\d.:]+$")


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures stay on one line."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if hasattr(self, "_negative_number_matcher"):
            self._negative_number_matcher = _NEGATIVE_VALUE

    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mwrc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rates = sub.add_parser("rates", help="rate/bound/gap sweep over an SNR grid")
    rates.add_argument("--l", type=_users, required=True, help="number of users (>= 2)")
    rates.add_argument(
        "--snr-db",
        type=_parse_db_grid,
        required=True,
        metavar="START:STOP:STEP",
        help="per-user SNR grid in dB, endpoints inclusive",
    )
    rates.add_argument(
        "--p0",
        default="equal",
        help="relay power: 'equal' tracks the user SNR (default), or a fixed dB value",
    )
    rates.set_defaults(func=cmd_rates)

    regimes = sub.add_parser("regimes", help="per-L thresholds and crossover powers")
    regimes.add_argument(
        "--l", type=_users, required=True, nargs="+", help="user counts (each >= 2)"
    )
    regimes.set_defaults(func=cmd_regimes)

    sim_ff = sub.add_parser("sim-ff", help="exact finite-field protocol round")
    sim_ff.add_argument("--l", type=_users, required=True, help="number of users (>= 2)")
    sim_ff.add_argument("--q", type=_positive_int, required=True, help="field/ring modulus (>= 2)")
    sim_ff.add_argument("--n", type=_positive_int, required=True, help="symbols per message")
    sim_ff.add_argument("--trials", type=_positive_int, required=True, help="number of trials")
    sim_ff.add_argument("--seed", type=int, required=True, help="RNG seed")
    sim_ff.add_argument(
        "--rotation", action="store_true", help="cycle the active pair across trials"
    )
    sim_ff.set_defaults(func=cmd_sim_ff)

    sim_lat = sub.add_parser(
        "sim-lattice", help="nested-lattice AWGN Monte Carlo sweep"
    )
    sim_lat.add_argument("--l", type=_users, required=True, help="number of users (>= 2)")
    sim_lat.add_argument("--m", type=_positive_int, required=True, help="codebook size (>= 2)")
    sim_lat.add_argument(
        "--snr-db",
        type=_parse_db_grid,
        required=True,
        metavar="START:STOP:STEP",
        help="per-user SNR grid in dB, endpoints inclusive",
    )
    sim_lat.add_argument("--trials", type=_positive_int, required=True, help="trials per SNR point")
    sim_lat.add_argument("--seed", type=int, required=True, help="RNG seed")
    sim_lat.set_defaults(func=cmd_sim_lattice)

    schedule = sub.add_parser("schedule", help="print the rotated block/pair table")
    schedule.add_argument("--l", type=_users, required=True, help="number of users (>= 2)")
    schedule.add_argument(
        "--tuples", type=_positive_int, required=True, help="message tuples to list"
    )
    schedule.add_argument(
        "--p", type=float, default=1.0, help="average per-user power for the accounting line"
    )
    schedule.set_defaults(func=cmd_schedule)

    for p in (rates, regimes, sim_ff, sim_lat, schedule):
        p.add_argument("--out", default=None, help="output path (default stdout)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"mwrc: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
