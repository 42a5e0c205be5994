"""Every applicable attack estimate against each shipped parameter set.

Rows are tagged pk (key recovery) or ct (message recovery); the last column
says whether the estimate clears the set's security level.
"""
import argparse

from rqcag.estimator import design_costs
from rqcag.scheme import PARAMS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--extra-N", type=int, nargs="*", default=[],
                    help="extra syndrome counts for the ciphertext support-learning estimates")
    ap.add_argument("--omega", type=float, default=2.81)
    args = ap.parse_args()

    worst_margin = None
    for p in PARAMS.values():
        print(f"== {p.name} (level {p.level})")
        for rep in design_costs(p, args.omega, args.extra_N):
            inst = " ".join(f"{k}={v}" for k, v in rep.instance.items() if k != "target")
            ok = rep.bits >= p.level
            margin = rep.bits - p.level
            worst_margin = margin if worst_margin is None else min(worst_margin, margin)
            print(f"  {rep.instance['target']:2} {rep.attack:11} {rep.bits:8.2f}  {'ok ' if ok else 'LOW'}  {inst}")
    print(f"smallest margin over all sets: {worst_margin:+.2f} bits")


if __name__ == "__main__":
    main()
