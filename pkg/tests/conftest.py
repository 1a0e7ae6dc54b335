import numpy as np
import pytest

from entroscale.geometry import DistanceMatrix, PointCloud, pairwise_distances
from entroscale.graph import WeightedGraph, build_graph, connected_components
from entroscale.spectral import kernel_dimension, laplacian, laplacian_eigenvalues


@pytest.fixture
def rng():
    return np.random.default_rng(20240612)


def random_cloud(rng, n, d=3, scale=1.0):
    return PointCloud(points=scale * rng.uniform(size=(n, d)))


def random_graph(rng, n, density=0.3, weight_scale=1.0):
    """Random weighted graph, weights uniform in (0.05, 1] * weight_scale."""
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.uniform(size=iu.size) < density
    iu, ju = iu[keep], ju[keep]
    w = weight_scale * rng.uniform(0.05, 1.0, size=iu.size)
    scale = float(w.max()) if w.size else weight_scale
    return WeightedGraph(n=n, pairs=np.column_stack([iu, ju]), weights=w, scale=scale)


def planted_components_cloud(rng, n_components, points_per, spread=0.3, spacing=3.0):
    """Tight Gaussian blobs at well-separated centers; labels = blob index."""
    centers = spacing * np.arange(n_components)[:, None] * np.array([[1.0, 0.0]])
    pts = []
    labels = []
    for c in range(n_components):
        pts.append(centers[c] + spread * rng.normal(size=(points_per, 2)))
        labels.extend([c] * points_per)
    return PointCloud(points=np.vstack(pts), labels=np.array(labels))


def canonical_partition(labels):
    """Frozenset-of-frozensets form, for label-permutation-invariant equality."""
    groups = {}
    for idx, lab in enumerate(np.asarray(labels).tolist()):
        groups.setdefault(lab, []).append(idx)
    return frozenset(frozenset(g) for g in groups.values())


def check_kernel_matches_components(g, tol=1e-8):
    """Cross-module invariant: numerical kernel dimension of the Laplacian
    equals the union-find component count."""
    k_union = connected_components(g).k
    mu = laplacian_eigenvalues(laplacian(g))
    k_kernel = kernel_dimension(mu, tol)
    assert k_kernel == k_union, f"kernel dim {k_kernel} != component count {k_union}"
    return k_union


def distance_matrix_of(points):
    return pairwise_distances(PointCloud(points=np.asarray(points, dtype=float)))


__all__ = [
    "random_cloud", "random_graph", "planted_components_cloud",
    "canonical_partition", "check_kernel_matches_components",
    "distance_matrix_of", "DistanceMatrix", "build_graph",
]
