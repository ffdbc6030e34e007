"""GCAE versus the random-projection baseline on synthetic blobs.

Reports all six metrics and runtime, median over seeds, and dumps the
per-seed numbers as JSON.

    python3 scripts/benchmark_synthetic.py --seeds 5 --out bench.json
"""

import argparse
import json
import time

import numpy as np

from gcae import Hyperparameters, run_gcae, synth_multiview
from gcae.baseline import run_baseline
from gcae.metrics import METRIC_NAMES, evaluate


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--clusters", type=int, default=5)
    ap.add_argument("--dims", default="20,30,25")
    ap.add_argument("--separation", type=float, default=8.0)
    ap.add_argument("--bits", type=int, default=64)
    ap.add_argument("--rank", type=int, default=20)
    ap.add_argument("--iters", type=int, default=15)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", default="benchmark_synthetic.json")
    args = ap.parse_args()

    dims = [int(d) for d in args.dims.split(",")]
    rows = {"gcae": [], "baseline": []}
    for seed in range(args.seeds):
        ds = synth_multiview(args.n, args.clusters, dims, separation=args.separation, seed=seed)
        hyper = Hyperparameters(b=args.bits, r=args.rank, outer_iter=args.iters, seed=seed)
        (_, model, _), t_g = timed(run_gcae, ds, hyper, args.clusters)
        (_, base), t_b = timed(run_baseline, ds, hyper, args.clusters)
        for name, labels, t in (("gcae", model.labels, t_g), ("baseline", base.labels, t_b)):
            scores, _ = evaluate(ds.labels, labels)
            rows[name].append({"seed": seed, "seconds": t, **scores})

    print("metric".ljust(10) + "gcae".rjust(10) + "baseline".rjust(10))
    for key in (*METRIC_NAMES, "seconds"):
        med = [np.median([r[key] for r in rows[n]]) for n in rows]
        print(key.ljust(10) + "".join(f"{m:10.4f}" for m in med))
    with open(args.out, "w") as fh:
        json.dump({"args": vars(args), "runs": rows}, fh, indent=2)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
