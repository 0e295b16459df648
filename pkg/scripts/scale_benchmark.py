"""Wall time of Horn construction and verification as N grows."""

import argparse
import time

from spectra_diag.gen import GenConfig, random_majorized_diag, random_spectrum
from spectra_diag.horn import horn_construct
from spectra_diag.verify import verify_horn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200, 400])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    # warm the jit cache so the first row is not compile time
    verify_horn(horn_construct([2.0, 1.0, 0.0], [1.0, 1.0, 1.0]))
    print(f"{'N':>5} {'construct s':>12} {'verify s':>10} {'diag err':>10} {'orth err':>10} pass")
    for n in args.sizes:
        cfg = GenConfig(seed=args.seed, n=n)
        lam = random_spectrum(cfg)
        d = random_majorized_diag(lam, cfg)
        t0 = time.perf_counter()
        cert = horn_construct(lam, d)
        t1 = time.perf_counter()
        rep = verify_horn(cert)
        t2 = time.perf_counter()
        print(f"{n:>5} {t1 - t0:>12.4f} {t2 - t1:>10.4f} {rep.diag_err:>10.2e} {rep.orth_err:>10.2e} {rep.passed}")


if __name__ == "__main__":
    main()
