"""Run records, graph file export, and figure rendering.

Figures are rendered with the non-interactive Agg backend so runs work
headless; every renderer writes a file and returns its path.
"""

import dataclasses
import json
from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "RunRecord",
    "write_record",
    "read_record",
    "write_labels",
    "export_graph",
    "convergence_figure",
    "affinity_figure",
    "scatter_figure",
    "weights_figure",
    "sweep_figure",
]


@dataclasses.dataclass
class RunRecord:
    """Everything needed to reproduce and inspect one pipeline run."""

    config: dict
    metrics: dict | None
    iterations: int
    converged: bool
    wall_time_s: float
    objective_trace: list
    residual_trace: list

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, payload):
        return cls(**{f.name: payload[f.name] for f in dataclasses.fields(cls)})


def write_record(record, path):
    path = Path(path)
    path.write_text(json.dumps(record.to_dict(), indent=2, sort_keys=True) + "\n")
    return path


def read_record(path):
    return RunRecord.from_dict(json.loads(Path(path).read_text()))


def write_labels(labels, path):
    path = Path(path)
    np.savetxt(path, np.asarray(labels, dtype=int), fmt="%d")
    return path


def export_graph(W, path, fmt, order=None):
    """Write an affinity matrix as dense CSV or an 8-bit PGM image.

    PGM pixels are round(255 * w / max(W)); an all-zero matrix becomes
    an all-black image. `order` optionally permutes rows and columns
    (e.g. by true labels) to expose block structure.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2:
        raise ValueError("W must be a matrix")
    if order is not None:
        order = np.asarray(order, dtype=int)
        W = W[np.ix_(order, order)]
    path = Path(path)
    if fmt == "csv":
        np.savetxt(path, W, delimiter=",", fmt="%.17g")
    elif fmt == "pgm":
        w_max = float(W.max()) if W.size else 0.0
        if w_max <= 0.0:
            img = np.zeros(W.shape, dtype=np.uint8)
        else:
            img = np.clip(np.rint(255.0 * W / w_max), 0, 255).astype(np.uint8)
        header = f"P5\n{W.shape[1]} {W.shape[0]}\n255\n".encode("ascii")
        path.write_bytes(header + img.tobytes())
    else:
        raise ValueError(f"unknown export format: {fmt!r}")
    return path


def convergence_figure(objective_trace, residual_trace, tol, path):
    """Objective value and stopping residuals against the iteration count."""
    fig, (ax_obj, ax_res) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    iters = np.arange(1, len(objective_trace) + 1)
    ax_obj.plot(iters, objective_trace, color="tab:blue")
    ax_obj.set_xlabel("iteration")
    ax_obj.set_ylabel("objective")
    ax_obj.set_title("objective trace")
    res = np.asarray(residual_trace, dtype=float)
    for idx, name in enumerate(("fit", "graph gap", "low-rank gap")):
        ax_res.semilogy(iters, np.maximum(res[:, idx], 1e-18), label=name)
    ax_res.axhline(tol, color="gray", linestyle=":", label="tol")
    ax_res.set_xlabel("iteration")
    ax_res.set_ylabel("inf-norm residual")
    ax_res.set_title("stopping residuals")
    ax_res.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def affinity_figure(W, path, order=None):
    """Heatmap of the learned affinity, optionally permuted by labels."""
    W = np.asarray(W, dtype=float)
    if order is not None:
        order = np.asarray(order, dtype=int)
        W = W[np.ix_(order, order)]
    fig, ax = plt.subplots(figsize=(4.4, 4.0))
    im = ax.imshow(W, cmap="viridis", interpolation="nearest")
    ax.set_title("affinity matrix")
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def scatter_figure(X, labels, path):
    """2-d scatter of samples colored by cluster label. X is 2 x n."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] != 2:
        raise ValueError("scatter needs exactly 2 feature rows")
    labels = np.asarray(labels, dtype=int)
    fig, ax = plt.subplots(figsize=(4.4, 4.0))
    for lab in np.unique(labels):
        pick = labels == lab
        ax.scatter(X[0, pick], X[1, pick], s=12, label=f"cluster {lab}")
    ax.set_aspect("equal")
    ax.legend(fontsize=8)
    ax.set_title("samples by assigned cluster")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def weights_figure(a, path):
    """Bar chart of the learned per-feature weights."""
    a = np.asarray(a, dtype=float)
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    ax.bar(np.arange(a.size), a, color="tab:green")
    ax.set_xlabel("feature")
    ax.set_ylabel("weight")
    ax.set_title("feature weights")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def sweep_figure(rows, varied, path):
    """Accuracy over a 1-d (curve) or 2-d (heatmap) sweep grid.

    `rows` holds dicts with the varied values and an "acc" entry; cells
    without metrics (failed runs) are skipped. Returns None for grids
    over three parameters, which have no flat rendering.
    """
    rows = [r for r in rows if r.get("acc") is not None]
    if not rows or len(varied) > 2:
        return None
    if len(varied) == 1:
        name = varied[0]
        pts = sorted((float(r[name]), float(r["acc"])) for r in rows)
        fig, ax = plt.subplots(figsize=(4.8, 3.4))
        ax.semilogx([p[0] for p in pts], [p[1] for p in pts], marker="o")
        ax.set_xlabel(name)
        ax.set_ylabel("accuracy")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title("parameter sweep")
    else:
        n0 = sorted({float(r[varied[0]]) for r in rows})
        n1 = sorted({float(r[varied[1]]) for r in rows})
        grid = np.full((len(n0), len(n1)), np.nan)
        for r in rows:
            grid[n0.index(float(r[varied[0]])), n1.index(float(r[varied[1]]))] = r["acc"]
        fig, ax = plt.subplots(figsize=(5.2, 4.2))
        im = ax.imshow(grid, cmap="viridis", origin="lower", vmin=0.0, vmax=1.0)
        ax.set_xticks(range(len(n1)), [f"{v:g}" for v in n1], rotation=45, fontsize=7)
        ax.set_yticks(range(len(n0)), [f"{v:g}" for v in n0], fontsize=7)
        ax.set_xlabel(varied[1])
        ax.set_ylabel(varied[0])
        ax.set_title("accuracy over the sweep grid")
        fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
