"""Synthetic datasets and CSV ingestion.

All matrices follow the d x n convention with samples as columns.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LabeledDataset",
    "make_spiral",
    "make_blobs",
    "load_csv",
    "normalize",
]


@dataclass
class LabeledDataset:
    X: np.ndarray  # d x n, columns are samples
    labels: np.ndarray | None  # n integer labels, or None when unlabeled
    name: str = ""
    feature_names: list | None = None


def make_spiral(n_total=393, arms=3, noise_std=0.05, seed=0):
    """Interleaved 2-d spiral arms.

    Arm a traces (t cos(t + 2 pi a / arms), t sin(t + 2 pi a / arms))
    for t evenly spaced in [0.5, 2.5 pi], plus isotropic Gaussian noise
    with standard deviation noise_std. Arm sizes are balanced within one
    sample. Deterministic for a fixed seed.
    """
    if arms < 1:
        raise ValueError("arms must be at least 1")
    if n_total < arms:
        raise ValueError("n_total must be at least arms")
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    rng = np.random.default_rng(seed)
    counts = np.full(arms, n_total // arms)
    counts[: n_total % arms] += 1
    blocks = []
    labels = []
    for arm, m in enumerate(counts):
        t = np.linspace(0.5, 2.5 * np.pi, m)
        phase = 2.0 * np.pi * arm / arms
        blocks.append(np.stack([t * np.cos(t + phase), t * np.sin(t + phase)]))
        labels.append(np.full(m, arm, dtype=int))
    X = np.concatenate(blocks, axis=1)
    X = X + noise_std * rng.standard_normal(X.shape)
    return LabeledDataset(X=X, labels=np.concatenate(labels), name="spiral")


def make_blobs(n=80, k=2, d=2, separation=10.0, noise_features=0, seed=0):
    """Isotropic unit-variance Gaussian clusters.

    Centroids are drawn standard normal and rescaled so their minimum
    pairwise distance equals `separation`; `noise_features` rows of pure
    standard Gaussian noise are appended below the informative features.
    """
    if k < 1 or n < k:
        raise ValueError("need n >= k >= 1")
    if d < 1:
        raise ValueError("d must be at least 1")
    if noise_features < 0:
        raise ValueError("noise_features must be nonnegative")
    if separation <= 0:
        raise ValueError("separation must be positive")
    rng = np.random.default_rng(seed)
    centroids = rng.standard_normal((k, d))
    if k > 1:
        gaps = [
            np.linalg.norm(centroids[i] - centroids[j])
            for i in range(k)
            for j in range(i + 1, k)
        ]
        min_gap = min(gaps)
        if min_gap == 0.0:
            raise ValueError("degenerate centroid draw; pick another seed")
        centroids *= separation / min_gap
    counts = np.full(k, n // k)
    counts[: n % k] += 1
    blocks = []
    labels = []
    for j in range(k):
        blocks.append(centroids[j][:, None] + rng.standard_normal((d, counts[j])))
        labels.append(np.full(counts[j], j, dtype=int))
    X = np.concatenate(blocks, axis=1)
    if noise_features > 0:
        X = np.vstack([X, rng.standard_normal((noise_features, n))])
    return LabeledDataset(X=X, labels=np.concatenate(labels), name="blobs")


def load_csv(path, has_header=True, label_column=None):
    """Load a comma-separated file with rows as samples.

    The matrix is transposed into the column-sample convention. The
    label column may be named (header mode) or given as a 1-based index;
    label values are mapped to dense integers in first-appearance order.
    Ragged rows and non-numeric feature cells raise ValueError naming
    the file line (1-based, header included) and column.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = list(csv.reader(fh))
    rows = [(i + 1, row) for i, row in enumerate(reader) if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")

    header = None
    if has_header:
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: no data rows after the header")

    width = len(header) if header is not None else len(rows[0][1])
    label_idx = None
    if label_column is not None:
        if header is not None and str(label_column) in header:
            label_idx = header.index(str(label_column))
        else:
            try:
                label_idx = int(label_column) - 1
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}: unknown label column {label_column!r}"
                ) from None
            if not 0 <= label_idx < width:
                raise ValueError(f"{path}: label column {label_column} out of range")

    samples = []
    raw_labels = []
    for line_no, row in rows:
        if len(row) != width:
            raise ValueError(
                f"{path}: line {line_no}: expected {width} fields, got {len(row)}"
            )
        values = []
        for col, cell in enumerate(row):
            if col == label_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ValueError(
                    f"{path}: line {line_no}, column {col + 1}: "
                    f"not numeric: {cell.strip()!r}"
                ) from None
        samples.append(values)

    labels = None
    if label_idx is not None:
        mapping = {}
        labels = np.array(
            [mapping.setdefault(v, len(mapping)) for v in raw_labels], dtype=int
        )
    feature_names = None
    if header is not None:
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
    return LabeledDataset(
        X=np.asarray(samples, dtype=float).T,
        labels=labels,
        name=path.stem,
        feature_names=feature_names,
    )


def normalize(X, mode="l2"):
    """Normalize a d x n data matrix.

    "l2" scales each sample column to unit Euclidean norm (zero columns
    untouched); "minmax" affinely maps each feature row to [0, 1]
    (constant rows map to all zeros); "none" returns a copy unchanged.
    """
    X = np.asarray(X, dtype=float)
    if mode == "none":
        return X.copy()
    if mode == "l2":
        out = X.copy()
        norms = np.linalg.norm(out, axis=0)
        alive = norms > 0
        out[:, alive] /= norms[alive]
        return out
    if mode == "minmax":
        lo = X.min(axis=1, keepdims=True)
        span = X.max(axis=1, keepdims=True) - lo
        out = np.zeros_like(X)
        alive = span[:, 0] > 0
        out[alive] = (X[alive] - lo[alive]) / span[alive]
        return out
    raise ValueError(f"unknown normalization mode: {mode!r}")
