"""Full-field error of a reduction preset against a fine reference, as a
function of the RK4 step density. Prints a table and the observed order."""
import argparse
import math

import numpy as np

from pesym.fields import sample_points
from pesym.reduction import ReducedSolution, spec_from_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="general")
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--densities", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--reference", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    spec = spec_from_preset(args.preset)
    pts = sample_points(args.seed, args.points, spec.box)
    ref = ReducedSolution(spec, args.reference).value(pts)
    print(f"{'steps/unit':>10} {'max error':>12} {'order':>7}")
    prev = None
    for n in args.densities:
        err = float(np.max(np.abs(ReducedSolution(spec, n).value(pts) - ref)))
        order = "" if prev is None or err == 0 else f"{math.log2(prev / err) / math.log2(n / last):7.2f}"
        print(f"{n:>10d} {err:12.3e} {order:>7}")
        prev, last = err, n


if __name__ == "__main__":
    main()
