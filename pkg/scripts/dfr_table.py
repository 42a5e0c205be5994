"""DFR of every shipped parameter set, model against the tabulated value.

Optionally adds a Monte-Carlo column at a small pinned shape, since the
shipped failure rates (around 2^-133 and below) cannot be sampled.
"""
import argparse
import random

from rqcag.gabidulin import dfr_monte_carlo, dfr_probability
from rqcag.scheme import PARAMS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--monte-carlo", type=int, default=0, metavar="TRIALS")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"{'set':22} {'delta':>5} {'n-nprime':>8} {'eps':>4} {'log2 DFR':>9} {'table':>6}")
    for p in PARAMS.values():
        print(f"{p.name:22} {p.delta:5d} {p.gab_len - p.n_prime:8d} {p.epsilon:4d} "
              f"{p.dfr_bits():9.2f} {p.dfr_reference:6d}")

    if args.monte_carlo:
        rng = random.Random(args.seed)
        print()
        for shape in [(6, 8, 5), (4, 4, 4), (10, 10, 9)]:
            got = dfr_monte_carlo(rng, *shape, args.monte_carlo)
            print(f"delta,tail,eps={shape}: measured {got:.5f}  model {float(dfr_probability(*shape)):.5f}")


if __name__ == "__main__":
    main()
