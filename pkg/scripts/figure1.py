"""Bloch-plane loci of the noise-free and the full conditional spin state.

Writes the CSV produced by ``weakmeas figure1`` and, when matplotlib is
available and ``--plot`` is given, a PNG with both loci.
"""

import argparse
import math

import numpy as np

from weakmeas.cli import figure1_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--n", type=int, default=201)
    ap.add_argument("--csv", default="figure1.csv")
    ap.add_argument("--plot", help="PNG path (needs matplotlib)")
    args = ap.parse_args()

    rows = np.array(figure1_table(args.delta, args.n))
    np.savetxt(args.csv, rows, delimiter=",", header="outcome,sx_m,sz_m,sx_f,sz_f", comments="", fmt="%.17g")
    ax = math.exp(1 / (8 * args.delta ** 2)) / 2
    print(f"delta={args.delta}  rows={len(rows)}  ellipse semi-axes=({ax:.6f}, 0.5)  -> {args.csv}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(figsize=(5, 5))
        axes.plot(rows[:, 1], rows[:, 2], label="noise-free")
        axes.plot(rows[:, 3], rows[:, 4], "--", label="with back-action")
        axes.set_xlabel("<s_x>")
        axes.set_ylabel("<s_z>")
        axes.set_aspect("equal")
        axes.legend()
        fig.savefig(args.plot, dpi=150, bbox_inches="tight")
        print(f"plot -> {args.plot}")


if __name__ == "__main__":
    main()
