"""Write the cost-versus-N series for [m, n, k, r] = [61, 100, 50, 7] as CSV.

With --compare, the combinatorial series is checked against the reference
points in tests/data/figure3_reference.csv and any mismatch is listed.
"""
import argparse
import csv
import sys
from pathlib import Path

from rqcag.estimator import FIG3_HEADER, figure3_series

REF = Path(__file__).resolve().parent.parent / "tests" / "data" / "figure3_reference.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="-")
    ap.add_argument("--N-max", type=int, default=300)
    ap.add_argument("--no-algebraic", action="store_true")
    ap.add_argument("--compare", action="store_true")
    args = ap.parse_args()

    rows = figure3_series(61, 100, 50, 7, N_range=range(44, args.N_max + 1),
                          algebraic=not args.no_algebraic)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(FIG3_HEADER)
    w.writerows([N, name, f"{bits:.4f}"] for N, name, bits in rows)
    if fh is not sys.stdout:
        fh.close()

    if args.compare:
        ours = {N: bits for N, name, bits in rows if name == "rsl-comb"}
        with open(REF) as ref:
            pts = [(int(r["N"]), int(r["bits"])) for r in csv.DictReader(ref)
                   if r["series"] == "combinatorial"]
        bad = [(N, b, ours.get(N)) for N, b in pts if ours.get(N) != b]
        print(f"combinatorial: {len(pts) - len(bad)}/{len(pts)} reference points match", file=sys.stderr)
        for N, b, got in bad:
            print(f"  N={N}: reference {b}, computed {got}", file=sys.stderr)
        sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
