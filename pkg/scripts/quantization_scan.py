"""Where does the |+X> readout distribution split into two peaks?

Scans the resolution, counts local maxima of the outcome density and
reports the last resolution that still resolves both eigenvalues.  For two
equal Gaussians a distance 1 apart the split happens at delta = 1/2.
"""

import argparse

import numpy as np

from weakmeas import DensityMatrix, HermitianObservable, MeasurementModel, outcome_pdf
from weakmeas.spinhalf import count_local_maxima
from weakmeas.states import PLUS_X, SZ


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=0.2)
    ap.add_argument("--hi", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=81)
    args = ap.parse_args()

    rho = DensityMatrix.pure(PLUS_X)
    xs = np.linspace(-4, 4, 8001)
    last_bimodal = None
    for delta in np.linspace(args.lo, args.hi, args.n):
        modes = count_local_maxima(outcome_pdf(MeasurementModel(HermitianObservable(SZ), delta), rho, xs))
        print(f"delta={delta:.4f}  maxima={modes}")
        if modes == 2:
            last_bimodal = delta
    print(f"last bimodal resolution: {last_bimodal}")


if __name__ == "__main__":
    main()
