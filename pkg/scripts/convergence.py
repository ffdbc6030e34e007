"""Loss trajectory of the outer loop on synthetic blobs, several seeds.

Writes one CSV row per (seed, iteration) and prints the relative change
per iteration, median over seeds.

    python3 scripts/convergence.py --out convergence.csv
"""

import argparse
import csv

import numpy as np

from gcae import Hyperparameters, run_gcae, synth_multiview


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--clusters", type=int, default=4)
    ap.add_argument("--dims", default="20,30,25")
    ap.add_argument("--bits", type=int, default=32)
    ap.add_argument("--rank", type=int, default=20)
    ap.add_argument("--iters", type=int, default=20)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", default="convergence.csv")
    args = ap.parse_args()

    dims = [int(d) for d in args.dims.split(",")]
    curves = []
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["seed", "iteration", "total", "graph", "autoencoder", "cluster"])
        for seed in range(args.seeds):
            ds = synth_multiview(args.n, args.clusters, dims, seed=seed)
            hyper = Hyperparameters(b=args.bits, r=args.rank, outer_iter=args.iters, seed=seed)
            _, _, traj = run_gcae(ds, hyper, args.clusters)
            for row in traj.rows():
                w.writerow([seed, *row])
            curves.append(np.array(traj.total))

    L = np.vstack(curves)
    rel = np.abs(np.diff(L, axis=1)) / np.abs(L[:, :-1])
    print("iter  median_total  median_rel_change")
    for i in range(1, L.shape[1]):
        print(f"{i:4d}  {np.median(L[:, i]):12.4f}  {np.median(rel[:, i - 1]):.2e}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
