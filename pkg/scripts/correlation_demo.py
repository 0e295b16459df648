"""Build a correlation matrix (unit diagonal) with a chosen spectrum."""

import argparse

import numpy as np

from spectra_diag.gen import corr_preset
from spectra_diag.horn import hermitian_of, horn_construct
from spectra_diag.verify import jacobi_eigenvalues


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("spectrum", type=float, nargs="*", default=[4.0, 2.0, 1.0, 0.5, 0.5])
    args = ap.parse_args()

    lam, d = corr_preset(args.spectrum)
    cert = horn_construct(lam, d)
    c = hermitian_of(cert.q, lam)
    np.set_printoptions(precision=4, suppress=True)
    print("scaled spectrum:", np.array(lam.values))
    print(c)
    print("diagonal error:", np.max(np.abs(np.diag(c) - 1)))
    print("eigenvalues:   ", jacobi_eigenvalues(c))
    print("min eigenvalue >= 0:", jacobi_eigenvalues(c)[-1] >= -1e-12)


if __name__ == "__main__":
    main()
