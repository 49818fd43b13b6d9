"""Truncation error of the smoothed sum against the Hurwitz oracle.

The sum stops at n <= y_max sqrt(p/pi).  The kernel decays only like
exp(-(log y)^2/4), so a cutoff of the form C sqrt(p) log p leaves an error
near 1e-4; this script measures the error per log2(y_max) instead.
"""

import argparse

from lresonance.kernels import v_kernel
from lresonance.lcentral import afe_params, l_central_afe, l_central_oracle


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--primes", default="100049,400033,999953")
    args = ap.parse_args()
    for y in (1e3, 1e4, 3e4, 1e5):
        print(f"|V({y:.0e})| = {abs(v_kernel(y)):.2e}")
    for p in (int(v) for v in args.primes.split(",")):
        ref = l_central_oracle(p).value
        errs = []
        for k in (8, 10, 12, 14, 16):
            errs.append(f"2^{k}: {abs(l_central_afe(p, afe_params(k)).value - ref):.1e}")
        print(f"p={p} L={ref:.12f}  " + "  ".join(errs))


if __name__ == "__main__":
    main()
