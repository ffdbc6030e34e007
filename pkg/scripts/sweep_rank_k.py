"""Clustering accuracy over the graph rank r and the weight exponent k.

With M views the code terms in the graph update carry weight about
M^-k, while ||B||^2 = b*N dwarfs ||F G^T||^2 = r. When M^-k is not small
the codes stop following the graph, so this sweep is the quickest way
to pick (r, k) for a new dataset shape.

    python3 scripts/sweep_rank_k.py --dims 6,8 --clusters 3 --n 120
"""

import argparse

import numpy as np

from gcae import Hyperparameters, run_gcae, synth_multiview
from gcae.metrics import accuracy


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--clusters", type=int, default=4)
    ap.add_argument("--dims", default="20,30,25")
    ap.add_argument("--bits", type=int, default=32)
    ap.add_argument("--ranks", default="5,10,20,50")
    ap.add_argument("--ks", default="3,5,8")
    ap.add_argument("--iters", type=int, default=10)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    dims = [int(d) for d in args.dims.split(",")]
    ranks = [int(r) for r in args.ranks.split(",")]
    ks = [int(k) for k in args.ks.split(",")]
    data = [synth_multiview(args.n, args.clusters, dims, seed=s) for s in range(args.seeds)]
    print(f"M={len(dims)} N={args.n} c={args.clusters} b={args.bits}")
    print("r".rjust(5) + "".join(f"k={k}".rjust(9) for k in ks))
    for r in ranks:
        if r > args.n:
            continue
        cells = []
        for k in ks:
            accs = []
            for seed, ds in enumerate(data):
                hyper = Hyperparameters(b=args.bits, r=r, k=k, t=min(300, args.n),
                                        outer_iter=args.iters, seed=seed)
                accs.append(accuracy(ds.labels, run_gcae(ds, hyper, args.clusters)[1].labels))
            cells.append(np.median(accs))
        print(f"{r:5d}" + "".join(f"{a:9.3f}" for a in cells))


if __name__ == "__main__":
    main()
