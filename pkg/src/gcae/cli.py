"""``gcae`` command line: fit, eval, synth, benchmark.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numerical
failure. Failures print one line ``error=<category> message=<text>`` on
stderr.
"""

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .baseline import run_baseline
from .config import RunConfig, RunReport, SynthConfig
from .data import load_labels, load_manifest, save_dataset, save_labels, save_matrix, synth_multiview
from .encoder import run_gcae
from .errors import DataError, GCAEError, ValidationError
from .metrics import METRIC_NAMES, evaluate

log = logging.getLogger("gcae")

TRAJECTORY_HEADER = ("iteration", "total", "graph", "autoencoder", "cluster")


def write_trajectory(traj, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_HEADER)
        for i, *vals in traj.rows():
            w.writerow([i] + [repr(float(v)) for v in vals])


def _prepare(config_path):
    cfg = RunConfig.from_file(config_path)
    ds = load_manifest(cfg.manifest)
    cfg.hyper.validate(ds.n_samples)
    if cfg.clusters > ds.n_samples:
        raise ValidationError(f"clusters={cfg.clusters} exceeds N={ds.n_samples}")
    return cfg, ds


def _mkdir(path):
    try:
        Path(path).mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {path}: {exc}") from exc


def _scores(ds, labels):
    if ds.labels is None:
        return None, []
    return evaluate(ds.labels, labels)


def _config_echo(cfg):
    d = asdict(cfg.hyper)
    d.update(manifest=str(cfg.manifest), clusters=cfg.clusters, output=str(cfg.output))
    return d


def fit(cfg, ds):
    """Run GCAE and write every artifact under ``cfg.output``; returns the report."""
    out = Path(cfg.output)
    _mkdir(out / "model")
    t0 = time.perf_counter()
    state, model, traj = run_gcae(ds, cfg.hyper, cfg.clusters)
    runtime = time.perf_counter() - t0

    labels = model.labels
    save_matrix(state.B.astype(np.int64), out / "codes.csv")
    save_labels(labels, out / "labels.csv")
    save_matrix(model.Q.astype(np.int64), out / "model" / "Q.csv")
    save_matrix(model.H.astype(np.int64), out / "model" / "H.csv")
    save_matrix(state.p, out / "model" / "p.csv")
    for v, W in enumerate(state.W):
        save_matrix(W, out / "model" / f"W{v}.csv")
    write_trajectory(traj, out / "trajectory.csv")

    scores, warns = _scores(ds, labels)
    report = RunReport(
        method="gcae",
        n_samples=ds.n_samples,
        n_views=ds.n_views,
        n_clusters=cfg.clusters,
        code_bits=cfg.hyper.b,
        seed=cfg.hyper.seed,
        runtime_seconds=runtime,
        metrics=scores,
        metric_warnings=warns,
        loss_trajectory=[float(x) for x in traj.total],
        view_weights=[float(x) for x in state.p],
        decorrelation=state.decorrelation(),
        label_values=list(ds.label_values),
        config=_config_echo(cfg),
        config_text=cfg.text,
    )
    report.write(out / "report.json")
    return report


def cmd_fit(args):
    cfg, ds = _prepare(args.config)
    report = fit(cfg, ds)
    print(f"wrote {cfg.output} ({report.runtime_seconds:.2f} s)")
    if report.metrics:
        _print_metrics(report.metrics)
    return 0


def _print_metrics(scores, prefix=""):
    for name in METRIC_NAMES:
        print(f"{prefix}{name}={scores[name]:.6f}")


def cmd_eval(args):
    pred = load_labels(args.pred)
    truth = load_labels(args.truth)
    scores, warns = evaluate(truth, pred)
    report = {"pred": str(args.pred), "truth": str(args.truth), "n_samples": int(pred.size),
              "metrics": scores, "metric_warnings": warns}
    out = Path(args.out)
    _mkdir(out.parent)
    out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    _print_metrics(scores)
    return 0


def cmd_synth(args):
    cfg = SynthConfig.from_file(args.config)
    ds = synth_multiview(cfg.n_samples, cfg.n_clusters, cfg.dims, cfg.separation, cfg.noise, cfg.seed)
    manifest = save_dataset(ds, cfg.output)
    print(f"wrote {manifest}")
    return 0


def benchmark(cfg, ds):
    """GCAE (unless baseline_only) and the random-projection baseline on one dataset."""
    rows = {}
    report = None
    if not cfg.baseline_only:
        report = fit(cfg, ds)
        rows["gcae"] = (report.metrics, report.runtime_seconds)
    _mkdir(cfg.output)
    t0 = time.perf_counter()
    B, model = run_baseline(ds, cfg.hyper, cfg.clusters)
    runtime = time.perf_counter() - t0
    save_labels(model.labels, Path(cfg.output) / "baseline_labels.csv")
    scores, warns = _scores(ds, model.labels)
    rows["baseline"] = (scores, runtime)
    base = {"metrics": scores, "metric_warnings": warns, "runtime_seconds": runtime}
    if report is None:
        report = RunReport(
            method="baseline", n_samples=ds.n_samples, n_views=ds.n_views,
            n_clusters=cfg.clusters, code_bits=cfg.hyper.b, seed=cfg.hyper.seed,
            runtime_seconds=runtime, metrics=scores, metric_warnings=warns,
            label_values=list(ds.label_values), config=_config_echo(cfg), config_text=cfg.text,
        )
    report.baseline = base
    report.write(Path(cfg.output) / "benchmark.json")
    return report, rows


def cmd_benchmark(args):
    cfg, ds = _prepare(args.config)
    _, rows = benchmark(cfg, ds)
    names = list(rows)
    print("metric".ljust(10) + "".join(n.rjust(12) for n in names))
    if all(rows[n][0] for n in names):
        for m in METRIC_NAMES:
            print(m.ljust(10) + "".join(f"{rows[n][0][m]:12.4f}" for n in names))
    print("seconds".ljust(10) + "".join(f"{rows[n][1]:12.2f}" for n in names))
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors are validation failures (exit 1), not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error=validation message={message}", file=sys.stderr)
        sys.exit(1)


def build_parser():
    parser = _Parser(prog="gcae", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("fit", help="fit GCAE on a dataset manifest")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_fit)
    p = sub.add_parser("eval", help="score predicted labels against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out", default="eval_report.json")
    p.set_defaults(func=cmd_eval)
    p = sub.add_parser("synth", help="write a synthetic multi-view dataset")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_synth)
    p = sub.add_parser("benchmark", help="GCAE versus the random-projection baseline")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except GCAEError as exc:
        msg = " ".join(str(exc).split())
        print(f"error={exc.category} message={msg}", file=sys.stderr)
        return exc.exit_code
    except np.linalg.LinAlgError as exc:
        print(f"error=numerical message={exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
