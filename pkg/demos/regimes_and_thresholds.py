"""Where each strategy is provably optimal, and the powers where that flips.

Run:  python3 demos/regimes_and_thresholds.py
"""

from mwrc import (
    NO_CROSSOVER,
    SystemConfig,
    cdf_asymptotic_gap,
    cdf_suboptimal_threshold,
    cdf_ub_crossover,
    classify_regime,
    fdf_capacity_threshold,
    fdf_gap_bound_two_user,
)


def threshold_table(l_values):
    print(f"{'L':>3} {'fdf from':>10} {'cdf until':>12} {'strict after':>13}")
    for l in l_values:
        star = cdf_ub_crossover(l)
        star_txt = f"{star:.4f}" if star is not NO_CROSSOVER else "never met"
        fdf_txt = f"{fdf_capacity_threshold(l):.4f}" if l >= 3 else "never met"
        print(f"{l:>3} {fdf_txt:>10} {star_txt:>12} {cdf_suboptimal_threshold(l):>13.1f}")
    print()
    print("fdf from:      rotated FDF achieves the bound at powers >= this")
    print("cdf until:     full decoding still meets the bound up to this root")
    print("strict after:  past L^(L-1)-1 the full-decoding rate is strictly below it")


def classify_samples():
    print("\nSample operating points:")
    for l, p in ((3, 0.5), (3, 0.8), (3, 2.0), (3, 20.0), (5, 0.2), (5, 0.5), (2, 4.0)):
        c = classify_regime(l, p)
        if c.capacity is not None:
            detail = f"capacity {c.capacity:.4f}"
        else:
            detail = f"bracket [{c.lower:.4f}, {c.upper:.4f}]"
        print(f"  L={l} p={p:<5g} -> {c.regime.value:<16} {detail}")


def two_user_shrink():
    print("\nTwo users: the bound-to-FDF shortfall cap eps(p) vanishes with power:")
    for p in (1.0, 10.0, 100.0, 1e4, 1e6):
        print(f"  p = {p:<8g} eps = {fdf_gap_bound_two_user(p).epsilon:.3e}")


def cdf_far_field():
    print("\nFull decoding far past its threshold (p = 1e8, matched powers):")
    for l in (2, 3, 4):
        rep = cdf_asymptotic_gap(SystemConfig.equal_power(l, 1e8))
        print(
            f"  L={l} exact shortfall {rep.exact_gap:.6f}"
            f"  closed form {rep.gap:.6f}  strict: {rep.strict_suboptimal}"
        )


def main():
    threshold_table(range(2, 7))
    classify_samples()
    two_user_shrink()
    cdf_far_field()


if __name__ == "__main__":
    main()
