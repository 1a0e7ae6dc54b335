"""Spectral dimension reduction at the entropy-selected scale."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .entropy import DEFAULT_GRID_SIZE, DEFAULT_T_STAR, entropy_sweep, select_scale
from .geometry import PointCloud, pairwise_distances
from .graph import build_graph
from .spectral import DEFAULT_KERNEL_TOL, eigendecompose, laplacian

SIGN_ANCHOR_TOL = 1e-8


class KTooLarge(ValueError):
    """Requested more embedding dimensions than available nonzero eigenvalues."""


@dataclass
class Embedding:
    """Row m = embedded coordinates of point m in the k lowest non-kernel
    eigenvectors of the selected-scale Laplacian."""

    coords: np.ndarray        # (n, k), orthonormal columns
    r_hat: float
    eigvals_used: np.ndarray  # (k,) ascending


def _fix_column_signs(cols):
    # first entry of decisive magnitude made positive, so embeddings are
    # reproducible across runs
    cols = cols.copy()
    for j in range(cols.shape[1]):
        nz = np.nonzero(np.abs(cols[:, j]) > SIGN_ANCHOR_TOL)[0]
        anchor = nz[0] if nz.size else 0
        if cols[anchor, j] < 0:
            cols[:, j] = -cols[:, j]
    return cols


def reduce(cloud: PointCloud, k: int, grid_size: int = DEFAULT_GRID_SIZE,
           t_star: float = DEFAULT_T_STAR,
           kernel_tol: float = DEFAULT_KERNEL_TOL) -> Embedding:
    """Embed a cloud into R^k using the selected-scale Laplacian spectrum.

    The scale is chosen by the entropy sweep; the entire numerical kernel is
    discarded (kernel vectors are component indicators and carry no
    within-component geometry) and the eigenvectors of the k smallest
    remaining eigenvalues become the embedding coordinates.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    d = pairwise_distances(cloud)
    profile = entropy_sweep(d, grid_size=grid_size, t_star=t_star)
    sel = select_scale(profile)
    s = eigendecompose(laplacian(build_graph(d, sel.r_hat)))
    mu = s.eigenvalues
    thresh = kernel_tol * max(float(mu[-1]), 1.0)
    kernel_dim = int(np.sum(mu < thresh))
    available = s.n - kernel_dim
    if k > available:
        raise KTooLarge(
            f"requested {k} embedding dimensions but only {available} nonzero "
            f"eigenvalues remain at scale {sel.r_hat!r}")
    coords = _fix_column_signs(s.eigenvectors[:, kernel_dim:kernel_dim + k])
    return Embedding(coords=coords, r_hat=sel.r_hat,
                     eigvals_used=mu[kernel_dim:kernel_dim + k].copy())


def _knn_sets(points, n_neighbors):
    d = squareform(pdist(points)) if points.shape[0] > 1 else np.zeros((1, 1))
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1, kind="stable")
    return order[:, :n_neighbors]


def neighbor_overlap(before: np.ndarray, after: np.ndarray, n_neighbors: int = 10) -> float:
    """Mean Jaccard overlap of each point's k-nearest-neighbor set before and
    after embedding; the random baseline is about n_neighbors / n."""
    if before.shape[0] != after.shape[0]:
        raise ValueError("point counts differ")
    a = _knn_sets(np.asarray(before, dtype=float), n_neighbors)
    b = _knn_sets(np.asarray(after, dtype=float), n_neighbors)
    vals = []
    for ra, rb in zip(a, b):
        sa, sb = set(ra.tolist()), set(rb.tolist())
        vals.append(len(sa & sb) / len(sa | sb))
    return float(np.mean(vals))


def embedding_to_csv(e: Embedding, path, labels=None) -> None:
    """CSV: one row per point, k embedded coordinates then optional label."""
    n, k = e.coords.shape
    with open(path, "w") as f:
        cols = [f"e{i}" for i in range(k)]
        if labels is not None:
            cols.append("label")
        f.write(",".join(cols) + "\n")
        for i in range(n):
            row = [repr(float(v)) for v in e.coords[i]]
            if labels is not None:
                row.append(str(int(labels[i])))
            f.write(",".join(row) + "\n")
