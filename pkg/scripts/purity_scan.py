"""Purity and negativity of the noise-free state at outcome 0 versus resolution."""

import argparse
import math

import numpy as np

from weakmeas import DensityMatrix, HermitianObservable, MeasurementModel, negativity, noise_free_state, purity
from weakmeas.states import PLUS_X, SZ


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=0.2)
    ap.add_argument("--hi", type=float, default=5.0)
    ap.add_argument("--n", type=int, default=25)
    args = ap.parse_args()

    rho = DensityMatrix.pure(PLUS_X)
    print(f"{'delta':>8} {'purity':>14} {'closed form':>14} {'min eig':>12} {'negativity':>12}")
    for delta in np.geomspace(args.lo, args.hi, args.n):
        q = noise_free_state(MeasurementModel(HermitianObservable(SZ), delta), rho, 0.0)
        lo, total = negativity(q)
        closed = 0.5 + 0.5 * math.exp(1 / (4 * delta ** 2))
        print(f"{delta:8.4f} {purity(q):14.6f} {closed:14.6f} {lo:12.6f} {total:12.6f}")


if __name__ == "__main__":
    main()
