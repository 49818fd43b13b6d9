"""Residue at s = 0 against the contour integral I_{p,m0}.

For primes p = 1 (mod 8) spread over [1e5, 1e6] and m0 in {1, 3, 5, 15},
prints |direct - residue| / (p^-1/4 sqrt m0) with the constant derived from
the Laurent coefficients and with the printed closed form.  The second column
grows like p^(1/4) because the two constants differ by 3/2.
"""

import argparse
import math

import numpy as np

from lresonance.arith import sieve_primes
from lresonance.kernels import RESIDUE, i_pm0_direct, i_pm0_residue


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--primes", type=int, default=8)
    args = ap.parse_args()
    pool = sieve_primes(10**5, 10**6, filter_1mod8=True).primes
    picks = pool[np.linspace(0, len(pool) - 1, args.primes).astype(int)].tolist()
    print(f"c0 (Laurent) = {RESIDUE.c0:.15f}")
    print(f"c0 (printed) = {RESIDUE.c0_printed:.15f}")
    print(f"{'p':>8} {'m0':>3} {'direct':>18} {'C derived':>10} {'C printed':>10}")
    worst = [0.0, 0.0]
    for p in picks:
        for m0 in (1, 3, 5, 15):
            direct = i_pm0_direct(p, m0)
            scale = p**-0.25 * math.sqrt(m0)
            c = [abs(direct - i_pm0_residue(p, m0, c0)) / scale
                 for c0 in (RESIDUE.c0, RESIDUE.c0_printed)]
            worst = [max(w, v) for w, v in zip(worst, c)]
            print(f"{p:>8} {m0:>3} {direct:>18.12f} {c[0]:>10.4f} {c[1]:>10.4f}")
    print(f"calibrated C: derived {worst[0]:.4f}, printed {worst[1]:.4f}")


if __name__ == "__main__":
    main()
