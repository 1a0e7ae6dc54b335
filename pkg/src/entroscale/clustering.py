"""Parameter-free clustering at the entropy-selected scale, plus a k-means
baseline and confusion-matrix scoring."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .entropy import (DEFAULT_GRID_SIZE, DEFAULT_T_STAR, EntropyProfile,
                      entropy_sweep, select_scale)
from .geometry import PointCloud, pairwise_distances
from .graph import build_graph
from .spectral import (DEFAULT_KERNEL_TOL, eigendecompose, kernel_basis,
                       laplacian)

PIVOT_FLOOR = 1e-12


class PivotUnderflow(RuntimeError):
    """Raised when column-pivoted elimination meets a pivot below 1e-12,
    i.e. the kernel basis is numerically degenerate."""


@dataclass
class IndicatorMatrix:
    """Kernel basis reduced to near-indicator rows, one per component.

    ``col_perm[pos]`` is the original vertex index sitting at column ``pos``
    after the elimination's column swaps.
    """

    psi: np.ndarray       # (k, n)
    col_perm: np.ndarray  # (n,)


@dataclass
class ClusterAssignment:
    """Cluster labels in 0..k-1; r_hat and profile are None for baselines
    that do not select a scale."""

    labels: np.ndarray
    k: int
    r_hat: float | None = None
    profile: EntropyProfile | None = None


@dataclass
class ConfusionMatrix:
    """True-by-predicted contingency counts and the optimal-matching mistake
    count (n minus the best one-to-one cluster/class matching)."""

    counts: np.ndarray
    mistakes: int


def modified_gaussian_elimination(kernel: np.ndarray) -> IndicatorMatrix:
    """Reduce a Laplacian-kernel basis to component-indicator rows.

    For each row i: swap the largest-magnitude entry among columns i..n-1
    into the pivot position, divide the row by the pivot, then eliminate
    column i from every other row.  Kernel vectors are constant per
    component, so each sweep pins one component to 1 on one row and 0 on the
    rest.
    """
    psi = np.array(kernel, dtype=float)
    if psi.ndim != 2 or psi.shape[0] < 1:
        raise ValueError("kernel must be a k x n matrix with k >= 1")
    k, n = psi.shape
    if k > n:
        raise ValueError("kernel cannot have more rows than columns")
    perm = np.arange(n)
    for i in range(k):
        j = i + int(np.argmax(np.abs(psi[i, i:])))
        pivot = psi[i, j]
        if abs(pivot) < PIVOT_FLOOR:
            raise PivotUnderflow(
                f"pivot {pivot!r} in row {i} below {PIVOT_FLOOR}; kernel basis is degenerate")
        psi[:, [i, j]] = psi[:, [j, i]]
        perm[[i, j]] = perm[[j, i]]
        psi[i] /= psi[i, i]
        factors = psi[:, i].copy()
        factors[i] = 0.0
        psi -= np.outer(factors, psi[i])
    return IndicatorMatrix(psi=psi, col_perm=perm)


def assign_clusters(ind: IndicatorMatrix) -> np.ndarray:
    """Assign each vertex to the nearest standard basis vector.

    Vertex m's feature vector is its column of the indicator matrix (located
    through col_perm); the label is the i minimizing the Euclidean distance
    to e_i, smallest i on ties.
    """
    k, n = ind.psi.shape
    inv = np.empty(n, dtype=int)
    inv[ind.col_perm] = np.arange(n)
    v = ind.psi[:, inv]                       # column m = features of vertex m
    sq = np.sum(v * v, axis=0)
    dist_sq = sq[None, :] - 2.0 * v + 1.0     # ||v_m - e_i||^2, row i
    return np.argmin(dist_sq, axis=0)


def cluster(cloud: PointCloud, grid_size: int = DEFAULT_GRID_SIZE,
            t_star: float = DEFAULT_T_STAR,
            kernel_tol: float = DEFAULT_KERNEL_TOL) -> ClusterAssignment:
    """Cluster a point cloud with no free parameters.

    Pipeline: pairwise distances -> entropy sweep over the scale grid ->
    argmax scale -> Laplacian eigendecomposition at the selected scale ->
    kernel basis -> indicator extraction -> nearest-basis-vector labels.
    The number of clusters is the kernel dimension at the selected scale.
    """
    d = pairwise_distances(cloud)
    profile = entropy_sweep(d, grid_size=grid_size, t_star=t_star)
    sel = select_scale(profile)
    g = build_graph(d, sel.r_hat)
    s = eigendecompose(laplacian(g))
    basis = kernel_basis(s, kernel_tol)
    ind = modified_gaussian_elimination(basis)
    labels = assign_clusters(ind)
    return ClusterAssignment(labels=labels, k=basis.shape[0], r_hat=sel.r_hat,
                             profile=profile)


def _lloyd(points, k, max_iters, rng):
    n = points.shape[0]
    centroids = points[rng.choice(n, size=k, replace=False)].copy()
    labels = np.full(n, -1)
    cost = np.inf
    for _ in range(max_iters):
        sq = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(sq, axis=1)
        # re-seed empty clusters at the point farthest from its centroid
        for j in range(k):
            if not np.any(new_labels == j):
                worst = int(np.argmax(sq[np.arange(n), new_labels]))
                centroids[j] = points[worst]
                sq[:, j] = ((points - centroids[j]) ** 2).sum(axis=1)
                new_labels = np.argmin(sq, axis=1)
        new_cost = float(sq[np.arange(n), new_labels].sum())
        assert new_cost <= cost + 1e-9 * max(cost if np.isfinite(cost) else 0.0, 1.0), \
            "k-means cost increased"
        if np.array_equal(new_labels, labels):
            cost = new_cost
            break
        labels, cost = new_labels, new_cost
        for j in range(k):
            centroids[j] = points[labels == j].mean(axis=0)
    return labels, cost


def kmeans(cloud: PointCloud, k: int, max_iters: int = 100, n_init: int = 10,
           seed: int | None = None) -> ClusterAssignment:
    """Lloyd's algorithm from n_init random-point initializations, keeping
    the lowest within-cluster sum of squares (earliest restart on ties)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cloud.n:
        raise ValueError(f"k={k} exceeds the number of points {cloud.n}")
    rng = np.random.default_rng(seed)
    best_labels, best_cost = None, np.inf
    for _ in range(n_init):
        labels, cost = _lloyd(cloud.points, k, max_iters, rng)
        if cost < best_cost:
            best_labels, best_cost = labels, cost
    return ClusterAssignment(labels=best_labels, k=k, r_hat=None, profile=None)


def _best_matching(counts):
    """Maximum one-to-one matching weight of a (padded) contingency table."""
    s = max(counts.shape)
    padded = np.zeros((s, s), dtype=int)
    padded[:counts.shape[0], :counts.shape[1]] = counts
    if s <= 8:
        return max(sum(padded[i, p[i]] for i in range(s))
                   for p in permutations(range(s)))
    rows, cols = linear_sum_assignment(-padded)
    return int(padded[rows, cols].sum())


def score(pred, truth) -> ConfusionMatrix:
    """Contingency table plus mistakes under the best cluster-to-class matching.

    Unmatched clusters (when predicted and true counts differ) contribute
    entirely to the mistake count.  ``pred`` may be a ClusterAssignment or a
    plain label vector.
    """
    pred_labels = np.asarray(getattr(pred, "labels", pred), dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred_labels.shape != truth.shape:
        raise ValueError("prediction and truth must have equal length")
    true_ids = np.unique(truth)
    pred_ids = np.unique(pred_labels)
    counts = np.zeros((true_ids.size, pred_ids.size), dtype=int)
    t_idx = np.searchsorted(true_ids, truth)
    p_idx = np.searchsorted(pred_ids, pred_labels)
    np.add.at(counts, (t_idx, p_idx), 1)
    mistakes = int(truth.size - _best_matching(counts))
    return ConfusionMatrix(counts=counts, mistakes=mistakes)


# ---------------------------------------------------------------------------
# serialization

def assignment_to_json(a: ClusterAssignment, path, profile_ref: str | None = None,
                       diagnostics: dict | None = None) -> None:
    doc = {
        "labels": [int(v) for v in a.labels],
        "k": int(a.k),
        "r_hat": None if a.r_hat is None else float(a.r_hat),
        "entropy_profile_ref": profile_ref,
    }
    if diagnostics:
        doc["diagnostics"] = diagnostics
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True)
        f.write("\n")


def confusion_to_csv(cm: ConfusionMatrix, path) -> None:
    with open(path, "w") as f:
        k_pred = cm.counts.shape[1]
        f.write("true_id," + ",".join(f"pred_{j}" for j in range(k_pred)) + "\n")
        for i, row in enumerate(cm.counts):
            f.write(f"{i}," + ",".join(str(int(v)) for v in row) + "\n")
