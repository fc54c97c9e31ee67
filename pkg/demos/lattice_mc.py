"""Scalar nested-lattice coding on the AWGN sum uplink, algebra then noise.

Run:  python3 demos/lattice_mc.py
"""

import numpy as np

from mwrc import (
    NestedLatticePair,
    encode_lattice,
    mod_lattice,
    random_dithers,
    relay_decode_sum,
    simulate_awgn_fdf,
)


def algebra_tour():
    pair = NestedLatticePair.for_power(2.0, 4)
    print(f"Coarse spacing gamma = {pair.gamma:.4f}, 4 codewords {pair.fine_spacing:.4f} apart")
    print(f"  cell fold of 1.3*gamma: {mod_lattice(1.3 * pair.gamma, pair):+.4f}")

    rng = np.random.default_rng(3)
    d = random_dithers(pair, 2, rng)
    wa, wb = 3, 2
    xa = encode_lattice(wa, d[0], pair)
    xb = encode_lattice(wb, d[1], pair)
    clean = relay_decode_sum(xa + xb, d[0], d[1], pair)
    print(f"  sent ({wa}, {wb}) dithered to ({xa:+.3f}, {xb:+.3f});"
          f" relay reads sum index {clean} = ({wa}+{wb}) mod 4")
    noisy = relay_decode_sum(xa + xb + 0.9 * pair.fine_spacing, d[0], d[1], pair)
    print(f"  the same block pushed one fine cell over decodes as {noisy}")


def monte_carlo():
    print("\nTwo users, binary codebook, 20000 trials per SNR point:")
    points = simulate_awgn_fdf(2, 2, [0.0, 4.0, 8.0, 12.0, 16.0, 20.0], 20_000, seed=7)
    print(f"{'dB':>6} {'relay SER':>10} {'tuple err':>10} {'downlink ok':>12}")
    for pt in points:
        print(f"{pt.snr_db:6.1f} {pt.relay_ser:10.5f} {pt.e2e_error_rate:10.5f} {str(pt.downlink_ok):>12}")

    again = simulate_awgn_fdf(2, 2, [0.0, 4.0, 8.0, 12.0, 16.0, 20.0], 20_000, seed=7, workers=8)
    print(f"  rerun with 8 workers identical: {points == again}")


def larger_alphabet():
    print("\nFive users, 16-ary codebook (chains of four pair sums per tuple):")
    for pt in simulate_awgn_fdf(5, 16, [10.0, 20.0, 30.0], 20_000, seed=13):
        print(f"  {pt.snr_db:5.1f} dB: relay SER {pt.relay_ser:.5f}, tuple err {pt.e2e_error_rate:.5f}")


def main():
    algebra_tour()
    monte_carlo()
    larger_alphabet()


if __name__ == "__main__":
    main()
