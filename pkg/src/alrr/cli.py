"""Command-line pipeline: data -> solver -> spectral labels -> metrics.

Verbs: cluster (one run with reports and figures), sweep (grid over the
regularization weights), synth (write a synthetic dataset as CSV), and
export-graph (convert a saved affinity to CSV or PGM). Exit codes:
0 success, 1 configuration or usage error, 2 numerical failure.
"""

import argparse
import csv
import dataclasses
import itertools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import data as datamod
from . import reporting
from .graphs import symmetrize
from .metrics import evaluate
from .solver import Hyperparams, NumericalFailure, solve
from .spectral import ncut

__all__ = ["main", "entry", "DEFAULT_GRID"]

DEFAULT_GRID = [5.0**p for p in range(-5, 6)]

_CONFIG_TYPES = {
    "data": str,
    "synthetic": str,
    "n": int,
    "arms": int,
    "noise_std": float,
    "dims": int,
    "separation": float,
    "noise_features": int,
    "label_column": str,
    "no_header": bool,
    "k": int,
    "knn": int,
    "lambda1": float,
    "lambda2": float,
    "lambda3": float,
    "weight_mode": str,
    "graph_from": str,
    "normalize": str,
    "tol": float,
    "max_iter": int,
    "seed": int,
    "out": str,
    "export": str,
    "vary": list,
    "grid": str,
    "jobs": int,
    "permute_by_labels": bool,
    "graph": str,
    "labels": str,
}

_ECHO_KEYS = [
    "data",
    "synthetic",
    "n",
    "arms",
    "noise_std",
    "dims",
    "separation",
    "noise_features",
    "label_column",
    "no_header",
    "k",
    "knn",
    "lambda1",
    "lambda2",
    "lambda3",
    "weight_mode",
    "graph_from",
    "normalize",
    "tol",
    "max_iter",
    "seed",
]


def _parse_config_value(key, raw):
    kind = _CONFIG_TYPES[key]
    if kind is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean for {key!r}, got {raw!r}")
    if kind is list:
        return [part.strip() for part in raw.split(",") if part.strip()]
    return kind(raw)


def read_config(path):
    """Parse a flat key=value defaults file. Keys mirror the CLI flags
    (dashes and underscores both accepted); explicit flags win."""
    entries = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ValueError(f"{path}: line {line_no}: expected key=value")
        key = key.strip().replace("-", "_")
        value = value.strip().strip("'\"")
        if key not in _CONFIG_TYPES:
            raise ValueError(f"{path}: line {line_no}: unknown config key {key!r}")
        try:
            entries[key] = _parse_config_value(key, value)
        except ValueError as exc:
            raise ValueError(f"{path}: line {line_no}: {exc}") from None
    return entries


def _prescan_config(argv):
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 >= len(argv):
                raise ValueError("--config requires a path")
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    grp_data = shared.add_argument_group("data")
    grp_data.add_argument("--data", metavar="PATH", help="CSV file, rows are samples")
    grp_data.add_argument(
        "--synthetic", choices=["spiral", "blobs"], help="generate a dataset instead"
    )
    grp_data.add_argument(
        "--n", type=int, default=None,
        help="synthetic sample count (defaults: 393 spiral, 80 blobs)",
    )
    grp_data.add_argument("--arms", type=int, default=3, help="spiral arm count")
    grp_data.add_argument(
        "--noise-std", dest="noise_std", type=float, default=0.05,
        help="spiral noise standard deviation",
    )
    grp_data.add_argument(
        "--dims", type=int, default=2, help="informative blob feature count"
    )
    grp_data.add_argument(
        "--separation", type=float, default=10.0,
        help="minimum blob centroid distance",
    )
    grp_data.add_argument(
        "--noise-features", dest="noise_features", type=int, default=0,
        help="pure-noise feature rows appended to blobs",
    )
    grp_data.add_argument(
        "--label-column", dest="label_column", default=None,
        help="CSV label column name or 1-based index",
    )
    grp_data.add_argument(
        "--no-header", dest="no_header", action="store_true",
        help="treat the first CSV line as data",
    )
    grp_model = shared.add_argument_group("model")
    grp_model.add_argument("--k", type=int, default=3, help="cluster count")
    grp_model.add_argument("--knn", type=int, default=5, help="kNN graph size")
    grp_model.add_argument("--lambda1", type=float, default=5.0**-2,
                           help="low-rank weight")
    grp_model.add_argument("--lambda2", type=float, default=5.0**-2,
                           help="sparse-error weight")
    grp_model.add_argument("--lambda3", type=float, default=5.0**-2,
                           help="block-structure weight (0 disables)")
    grp_model.add_argument(
        "--weight-mode", dest="weight_mode", choices=["auto", "identity"],
        default="auto", help="learn feature weights or keep them uniform",
    )
    grp_model.add_argument(
        "--graph-from", dest="graph_from", choices=["z", "s"], default="z",
        help="which learned matrix feeds the clustering graph",
    )
    grp_model.add_argument(
        "--normalize", choices=["l2", "minmax", "none"], default="l2",
        help="data preprocessing",
    )
    grp_model.add_argument("--tol", type=float, default=1e-6)
    grp_model.add_argument("--max-iter", dest="max_iter", type=int, default=200)
    grp_model.add_argument("--seed", type=int, default=0)
    grp_out = shared.add_argument_group("output")
    grp_out.add_argument("--out", default="alrr_out", metavar="DIR")
    grp_out.add_argument(
        "--export", choices=["csv", "pgm"], default=None,
        help="also write the learned graph in this format",
    )
    grp_out.add_argument(
        "--config", metavar="PATH",
        help="flat key=value defaults file; explicit flags win",
    )

    parser = argparse.ArgumentParser(
        prog="alrr",
        description="Auto-weighted low-rank graph learning and spectral clustering.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    p_cluster = subs.add_parser(
        "cluster", parents=[shared],
        help="run the full pipeline once and write reports plus figures",
    )
    p_cluster.add_argument(
        "--permute-by-labels", dest="permute_by_labels", action="store_true",
        help="order the exported graph by true labels",
    )
    p_sweep = subs.add_parser(
        "sweep", parents=[shared], help="grid search over the lambda weights"
    )
    p_sweep.add_argument(
        "--vary", action="append", choices=["lambda1", "lambda2", "lambda3"],
        help="parameter to sweep; repeatable (default: lambda1)",
    )
    p_sweep.add_argument(
        "--grid", help="comma-separated grid values (default 5^-5..5^5)"
    )
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_synth = subs.add_parser(
        "synth", parents=[shared], help="write a synthetic dataset as CSV"
    )
    p_export = subs.add_parser(
        "export-graph", parents=[shared],
        help="convert a saved affinity matrix to CSV or PGM",
    )
    p_export.add_argument(
        "--graph", metavar="PATH", help="dense CSV affinity to convert"
    )
    p_export.add_argument(
        "--labels", metavar="PATH", help="label file used to block-order the matrix"
    )
    return parser, [p_cluster, p_sweep, p_synth, p_export]


def _config_dict(args):
    return {key: getattr(args, key) for key in _ECHO_KEYS}


def _dataset_from_config(cfg):
    if cfg.get("data") and cfg.get("synthetic"):
        raise ValueError("pass either --data or --synthetic, not both")
    if cfg.get("data"):
        return datamod.load_csv(
            cfg["data"],
            has_header=not cfg.get("no_header", False),
            label_column=cfg.get("label_column"),
        )
    kind = cfg.get("synthetic")
    if kind == "spiral":
        return datamod.make_spiral(
            n_total=cfg.get("n") or 393,
            arms=cfg.get("arms", 3),
            noise_std=cfg.get("noise_std", 0.05),
            seed=cfg.get("seed", 0),
        )
    if kind == "blobs":
        return datamod.make_blobs(
            n=cfg.get("n") or 80,
            k=cfg["k"],
            d=cfg.get("dims", 2),
            separation=cfg.get("separation", 10.0),
            noise_features=cfg.get("noise_features", 0),
            seed=cfg.get("seed", 0),
        )
    raise ValueError("a dataset is required: pass --data PATH or --synthetic {spiral,blobs}")


def _hyperparams_from_config(cfg):
    return Hyperparams(
        lambda1=cfg["lambda1"],
        lambda2=cfg["lambda2"],
        lambda3=cfg["lambda3"],
        k=cfg["k"],
        k_nn=cfg["knn"],
        tol=cfg["tol"],
        max_iter=cfg["max_iter"],
        seed=cfg["seed"],
        weight_mode=cfg["weight_mode"],
    )


def _run_pipeline(cfg):
    """Load or generate data, solve, and cluster the learned graph."""
    ds = _dataset_from_config(cfg)
    X = datamod.normalize(ds.X, cfg["normalize"])
    started = time.perf_counter()
    result = solve(X, _hyperparams_from_config(cfg))
    wall = time.perf_counter() - started
    graph = result.W if cfg["graph_from"] == "z" else symmetrize(result.S)
    pred = ncut(graph, cfg["k"], cfg["seed"])
    report = evaluate(pred, ds.labels) if ds.labels is not None else None
    return ds, result, graph, pred, report, wall


def _record_from_run(cfg, result, report, wall):
    return reporting.RunRecord(
        config=dict(cfg),
        metrics=dataclasses.asdict(report) if report is not None else None,
        iterations=result.iterations,
        converged=bool(result.converged),
        wall_time_s=float(wall),
        objective_trace=[float(v) for v in result.objective_trace],
        residual_trace=[[float(x) for x in r] for r in result.residual_trace],
    )


def cmd_cluster(args):
    cfg = _config_dict(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ds, result, graph, pred, report, wall = _run_pipeline(cfg)
    record = _record_from_run(cfg, result, report, wall)
    reporting.write_record(record, outdir / "run.json")
    reporting.write_labels(pred, outdir / "labels.csv")
    if args.export:
        order = None
        if args.permute_by_labels and ds.labels is not None:
            order = np.argsort(ds.labels, kind="stable")
        reporting.export_graph(graph, outdir / f"graph.{args.export}", args.export, order)
    display_order = np.argsort(
        ds.labels if ds.labels is not None else pred, kind="stable"
    )
    reporting.convergence_figure(
        record.objective_trace, record.residual_trace, args.tol,
        outdir / "convergence.png",
    )
    reporting.affinity_figure(graph, outdir / "affinity.png", display_order)
    reporting.weights_figure(result.a, outdir / "weights.png")
    if ds.X.shape[0] == 2:
        reporting.scatter_figure(ds.X, pred, outdir / "scatter.png")
    if report is not None:
        print(
            f"acc={report.acc:.4f} fscore={report.fscore:.4f} "
            f"precision={report.pair_precision:.4f} recall={report.pair_recall:.4f}"
        )
    else:
        print("unlabeled data: metrics skipped, predicted labels written")
    print(
        f"iterations={result.iterations} converged={result.converged} "
        f"wall={wall:.2f}s"
    )
    print(f"outputs written to {outdir}")
    return 0


def _sweep_cell(cfg):
    """Run one grid point in isolation; failures are reported, not raised."""
    try:
        ds, result, graph, pred, report, wall = _run_pipeline(cfg)
        record = _record_from_run(cfg, result, report, wall)
        return {"status": "ok", "record": record.to_dict()}
    except Exception as exc:  # noqa: BLE001 - a bad cell must not kill the sweep
        return {
            "status": "failed",
            "error": f"{type(exc).__name__}: {exc}",
            "config": dict(cfg),
        }


def cmd_sweep(args):
    varied = []
    for name in args.vary or []:
        if name not in ("lambda1", "lambda2", "lambda3"):
            raise ValueError(f"cannot vary {name!r}")
        if name not in varied:
            varied.append(name)
    if not varied:
        varied = ["lambda1"]
    if args.grid:
        grid = [float(v) for v in args.grid.split(",") if v.strip()]
    else:
        grid = list(DEFAULT_GRID)
    if not grid:
        raise ValueError("empty sweep grid")
    if args.jobs < 1:
        raise ValueError("--jobs must be at least 1")

    base = _config_dict(args)
    cells = []
    for combo in itertools.product(grid, repeat=len(varied)):
        cfg = dict(base)
        cfg.update(dict(zip(varied, combo)))
        cells.append(cfg)

    outdir = Path(args.out)
    (outdir / "cells").mkdir(parents=True, exist_ok=True)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_sweep_cell, cells))
    else:
        outcomes = [_sweep_cell(cfg) for cfg in cells]

    rows = []
    for idx, outcome in enumerate(outcomes):
        cell_path = outdir / "cells" / f"cell_{idx:03d}.json"
        cell_path.write_text(json.dumps(outcome, indent=2, sort_keys=True) + "\n")
        row = {
            "cell": idx,
            "lambda1": cells[idx]["lambda1"],
            "lambda2": cells[idx]["lambda2"],
            "lambda3": cells[idx]["lambda3"],
            "acc": None,
            "fscore": None,
            "iterations": None,
            "converged": None,
            "status": outcome["status"],
        }
        if outcome["status"] == "ok":
            record = outcome["record"]
            row["iterations"] = record["iterations"]
            row["converged"] = record["converged"]
            if record["metrics"] is not None:
                row["acc"] = record["metrics"]["acc"]
                row["fscore"] = record["metrics"]["fscore"]
        rows.append(row)

    ranked = sorted(
        rows,
        key=lambda r: (
            r["status"] != "ok",
            -(r["acc"] if r["acc"] is not None else -1.0),
            r["cell"],
        ),
    )
    fields = ["cell", "lambda1", "lambda2", "lambda3", "acc", "fscore",
              "iterations", "converged", "status"]
    with open(outdir / "sweep.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in ranked:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in fields})

    best = next((r for r in ranked if r["status"] == "ok" and r["acc"] is not None), None)
    if best is not None:
        (outdir / "best.json").write_text(
            json.dumps(outcomes[best["cell"]], indent=2, sort_keys=True) + "\n"
        )
    for_figure = [
        {name: cells[r["cell"]][name] for name in varied} | {"acc": r["acc"]}
        for r in rows
    ]
    reporting.sweep_figure(for_figure, varied, outdir / "sweep.png")

    failed = sum(1 for r in rows if r["status"] != "ok")
    print(f"{len(cells)} cells ({failed} failed); results in {outdir}")
    if best is not None:
        where = ", ".join(f"{name}={cells[best['cell']][name]:g}" for name in varied)
        print(f"best acc={best['acc']:.4f} at {where}")
    return 0


def cmd_synth(args):
    if args.data:
        raise ValueError("synth generates data; use --synthetic, not --data")
    if not args.synthetic:
        raise ValueError("--synthetic {spiral,blobs} is required")
    cfg = _config_dict(args)
    ds = _dataset_from_config(cfg)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{ds.name}.csv"
    d, n = ds.X.shape
    lines = [",".join([f"f{i + 1}" for i in range(d)] + ["label"])]
    for j in range(n):
        cells = [repr(float(v)) for v in ds.X[:, j]]
        cells.append(str(int(ds.labels[j])))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} ({n} samples, {d} features)")
    return 0


def cmd_export_graph(args):
    if not args.graph:
        raise ValueError("--graph PATH (a dense CSV affinity) is required")
    W = np.loadtxt(args.graph, delimiter=",", ndmin=2)
    if W.shape[0] != W.shape[1]:
        raise ValueError("graph matrix must be square")
    order = None
    if args.labels:
        labels = np.loadtxt(args.labels, ndmin=1).astype(int)
        if labels.size != W.shape[0]:
            raise ValueError("labels length does not match the graph")
        order = np.argsort(labels, kind="stable")
    fmt = args.export or "pgm"
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = reporting.export_graph(W, outdir / f"graph.{fmt}", fmt, order)
    print(f"wrote {path}")
    return 0


_HANDLERS = {
    "cluster": cmd_cluster,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
    "export-graph": cmd_export_graph,
}


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else [str(a) for a in argv]
    parser, subparsers = build_parser()
    try:
        cfg_path = _prescan_config(argv)
        if cfg_path:
            overrides = read_config(cfg_path)
            for sub in subparsers:
                sub.set_defaults(**overrides)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _HANDLERS[args.command](args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
