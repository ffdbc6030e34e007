"""Multi-view datasets: CSV/manifest I/O, synthetic blobs, anchor sampling.

A manifest is a plain text file with one ``view=<csv path>`` line per
view and an optional ``labels=<csv path>`` line. Relative paths resolve
against the manifest's directory. Matrix files are header-free CSV with
one sample per row.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, ValidationError
from .linalg import make_rng

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class MultiViewDataset:
    views: tuple
    labels: np.ndarray | None = None
    # original label values, index i holds the value remapped to i
    label_values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        views = tuple(np.array(v, dtype=float) for v in self.views)
        if not views:
            raise ValidationError("dataset needs at least one view")
        n = views[0].shape[0]
        for i, v in enumerate(views):
            if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
                raise ValidationError(f"view {i} is empty or not a matrix")
            if v.shape[0] != n:
                raise ValidationError(
                    f"row-count mismatch: view 0 has {n} rows, view {i} has {v.shape[0]}"
                )
            if not np.all(np.isfinite(v)):
                raise ValidationError(f"view {i} has non-finite entries")
            v.setflags(write=False)
        object.__setattr__(self, "views", views)
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (n,):
                raise ValidationError(f"labels have shape {labels.shape}, expected ({n},)")
            if labels.size and (labels.min() < 0 or labels.max() >= len(np.unique(labels))):
                raise ValidationError("labels must be contiguous 0-based integers")
            labels = labels.astype(np.int64, copy=True)
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self):
        return self.views[0].shape[0]

    @property
    def n_views(self):
        return len(self.views)

    @property
    def dims(self):
        return [v.shape[1] for v in self.views]


@dataclass(frozen=True)
class AnchorSet:
    indices: np.ndarray
    anchors: tuple

    @property
    def t(self):
        return len(self.indices)


def remap_labels(raw):
    """Map arbitrary integer labels onto 0..c-1 in sorted order of value."""
    values, labels = np.unique(np.asarray(raw), return_inverse=True)
    return labels.astype(np.int64), tuple(v.item() for v in values)


def save_matrix(m, path):
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    fmt = "%d" if np.issubdtype(m.dtype, np.integer) else FLOAT_FMT
    try:
        np.savetxt(path, m, fmt=fmt, delimiter=",")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def load_matrix(path):
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing file: {path}")
    try:
        empty = not path.read_text().strip()
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if empty:
        raise DataError(f"empty matrix file: {path}")
    try:
        m = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    except (ValueError, UnicodeDecodeError) as exc:
        raise DataError(f"malformed CSV {path}: {exc}") from exc
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if m.size == 0:
        raise DataError(f"empty matrix file: {path}")
    if not np.all(np.isfinite(m)):
        raise DataError(f"non-finite values in {path}")
    return m


def load_labels(path):
    m = load_matrix(path)
    if m.shape[1] != 1:
        raise DataError(f"labels file {path} must have a single column, found {m.shape[1]}")
    col = m[:, 0]
    if not np.all(col == np.round(col)):
        raise DataError(f"labels file {path} contains non-integer values")
    return col.astype(np.int64)


def save_labels(labels, path):
    save_matrix(np.asarray(labels, dtype=np.int64), path)


def read_manifest(path):
    """Parse a manifest into ``(view_paths, labels_path_or_None)``."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing manifest: {path}")
    base = path.parent
    views, labels = [], None
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not value:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        if key == "view":
            views.append(base / value)
        elif key == "labels":
            if labels is not None:
                raise ValidationError(f"{path}:{lineno}: duplicate labels entry")
            labels = base / value
        else:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
    if not views:
        raise ValidationError(f"manifest {path} lists no views")
    return views, labels


def load_manifest(path):
    view_paths, labels_path = read_manifest(path)
    views = [load_matrix(p) for p in view_paths]
    labels, values = None, ()
    if labels_path is not None:
        labels, values = remap_labels(load_labels(labels_path))
    return MultiViewDataset(tuple(views), labels, values)


def save_dataset(ds, directory, prefix="view"):
    """Write views, labels and a manifest under ``directory``; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = []
    for i, v in enumerate(ds.views):
        name = f"{prefix}{i}.csv"
        save_matrix(v, directory / name)
        lines.append(f"view={name}")
    if ds.labels is not None:
        raw = ds.labels
        if ds.label_values:
            raw = np.asarray(ds.label_values)[ds.labels]
        save_labels(raw, directory / "labels.csv")
        lines.append("labels=labels.csv")
    manifest = directory / "manifest.txt"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


def synth_multiview(n_samples, n_clusters, dims, separation=8.0, noise=1.0, seed=0):
    """Gaussian blobs sharing one cluster assignment across every view.

    In each view the cluster centers are rescaled so their minimum pairwise
    distance is ``separation * noise`` (``separation`` when noise is 0).
    Every cluster receives at least one sample.
    """
    dims = list(dims)
    if n_clusters < 1 or n_samples < 1 or n_clusters > n_samples:
        raise ValidationError("need 1 <= n_clusters <= n_samples")
    if not dims or any(int(d) < 1 for d in dims):
        raise ValidationError("dims must be a non-empty list of positive sizes")
    if separation <= 0 or noise < 0:
        raise ValidationError("separation must be positive and noise non-negative")

    rng = make_rng(seed)
    labels = rng.permutation(np.arange(n_samples) % n_clusters)
    gap = separation * noise if noise > 0 else separation
    views = []
    for d in dims:
        centers = rng.standard_normal((n_clusters, int(d)))
        if n_clusters > 1:
            diff = centers[:, None, :] - centers[None, :, :]
            dist = np.sqrt((diff**2).sum(-1))
            min_dist = dist[np.triu_indices(n_clusters, 1)].min()
            # a coincident pair would need a redraw; measure-zero, so just fail loudly
            if min_dist <= 0:
                raise ValidationError("degenerate center draw; change the seed")
            centers *= gap / min_dist
        x = centers[labels] + noise * rng.standard_normal((n_samples, int(d)))
        views.append(x)
    return MultiViewDataset(tuple(views), labels.astype(np.int64), tuple(range(n_clusters)))


def sample_anchors(ds, t, seed):
    """Draw ``t`` distinct sample indices, shared by every view."""
    n = ds.n_samples
    if not 1 <= t <= n:
        raise ValidationError(f"anchor count t={t} must lie in [1, {n}]")
    idx = make_rng(seed).choice(n, size=t, replace=False)
    return AnchorSet(idx, tuple(v[idx] for v in ds.views))
