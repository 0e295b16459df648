"""How large A = L^-1 U L gets, and what that does to the similarity residual.

For each N the script draws trace-matched pairs and reports the median
max|A|, growth(L), the absolute residual |U L - L A| against the bound
1e-10 N growth(L), and the entrywise backward residual against 1e-12 N.
"""

import argparse

import numpy as np

from spectra_diag.gen import GenConfig, trace_matched_pair
from spectra_diag.mirsky import mirsky_construct
from spectra_diag.verify import verify_mirsky


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6, 8, 12, 16, 24, 32, 40])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--lo", type=float, default=-10.0)
    ap.add_argument("--hi", type=float, default=10.0)
    ap.add_argument("--complex", action="store_true")
    args = ap.parse_args()

    print(f"{'N':>4} {'max|A|':>10} {'growth':>8} {'abs/bound':>10} {'bwd/bound':>10} {'abs ok':>7}")
    for n in args.sizes:
        amax, grow, ratio, bwd, ok = [], [], [], [], 0
        for rep in range(args.reps):
            cfg = GenConfig(seed=10_000 * n + rep, n=n, value_range=(args.lo, args.hi))
            cert = mirsky_construct(*trace_matched_pair(cfg, args.complex))
            r = verify_mirsky(cert)
            amax.append(np.max(np.abs(cert.a)))
            grow.append(cert.growth)
            ratio.append(r.similarity_err / r.tolerances["similarity_err"])
            bwd.append(r.similarity_rel_err / r.tolerances["similarity_rel_err"])
            ok += ratio[-1] <= 1
        print(f"{n:>4} {np.median(amax):>10.2e} {np.median(grow):>8.1f} {np.median(ratio):>10.2e} "
              f"{np.max(bwd):>10.2e} {ok:>4}/{args.reps}")


if __name__ == "__main__":
    main()
