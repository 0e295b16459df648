"""Seeded Horn sweep; prints worst error/threshold ratios per metric."""

import argparse
import time

from spectra_diag.gen import GenConfig, random_majorized_diag, random_spectrum
from spectra_diag.horn import horn_construct
from spectra_diag.verify import verify_horn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=500)
    ap.add_argument("--max-n", type=int, default=40)
    ap.add_argument("--lo", type=float, default=-10.0)
    ap.add_argument("--hi", type=float, default=10.0)
    ap.add_argument("--mix", type=int, default=8)
    ap.add_argument("--debug", action="store_true", help="re-check majorization after every pivot")
    args = ap.parse_args()

    worst = {}
    failures = 0
    t0 = time.perf_counter()
    for seed in range(args.cases):
        cfg = GenConfig(seed=seed, n=1 + seed % args.max_n, value_range=(args.lo, args.hi), mix_count=args.mix)
        lam = random_spectrum(cfg)
        rep = verify_horn(horn_construct(lam, random_majorized_diag(lam, cfg), debug=args.debug))
        failures += not rep.passed
        for k, v in rep.errors.items():
            tol = rep.tolerances[k]
            worst[k] = max(worst.get(k, 0.0), v / tol if tol else float(v > 0) * float("inf"))
    elapsed = time.perf_counter() - t0
    print(f"{args.cases} cases, {failures} failed, {elapsed:.2f}s")
    for k, v in sorted(worst.items()):
        print(f"  {k:<20} worst err/tol {v:.3e}")


if __name__ == "__main__":
    main()
