"""Graph Laplacians, dense eigendecomposition, and heat-operator spectra."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .graph import WeightedGraph

# Eigenvalues this far below the spectral radius (relative) count as zero.
# Well above dense-eigensolver error, well below physical spectral gaps at
# the scales the experiments select; cross-checked against union-find
# component counts throughout the test suite.
DEFAULT_KERNEL_TOL = 1e-8


@dataclass
class Spectrum:
    """Ascending eigenvalues and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray   # (n,)
    eigenvectors: np.ndarray  # (n, n), column i pairs with eigenvalues[i]

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Weighted graph Laplacian: diagonal = weighted degree, off-diagonal = -w."""
    L = np.zeros((g.n, g.n))
    if g.edge_count:
        i, j = g.pairs[:, 0], g.pairs[:, 1]
        L[i, j] = -g.weights
        L[j, i] = -g.weights
        L[np.diag_indices(g.n)] = -L.sum(axis=1)
    return L


def laplacian_from_distances(d: np.ndarray, r: float) -> np.ndarray:
    """Laplacian of the scale-r graph assembled straight from a distance matrix.

    Equivalent to ``laplacian(build_graph(...))`` but skips the edge list;
    used by the per-scale sweep where only the matrix is needed.
    """
    W = np.where(d <= r, d, 0.0)
    np.fill_diagonal(W, 0.0)
    L = -W
    L[np.diag_indices(d.shape[0])] = W.sum(axis=1)
    return L


def eigendecompose(L: np.ndarray) -> Spectrum:
    """Full symmetric eigendecomposition with tiny negative eigenvalues
    clamped to zero (the Laplacian is PSD exactly; negatives are roundoff)."""
    L = np.asarray(L, dtype=float)
    if not np.all(np.isfinite(L)):
        raise ValueError("matrix has non-finite entries")
    mu, U = np.linalg.eigh(L)
    top = max(float(mu[-1]), 0.0)
    mu[(mu < 0.0) & (mu >= -1e-10 * top)] = 0.0
    return Spectrum(eigenvalues=mu, eigenvectors=U)


def laplacian_eigenvalues(L: np.ndarray) -> np.ndarray:
    """Eigenvalues only (ascending, clamped); cheaper than eigendecompose."""
    L = np.asarray(L, dtype=float)
    if not np.all(np.isfinite(L)):
        raise ValueError("matrix has non-finite entries")
    mu = np.linalg.eigvalsh(L)
    top = max(float(mu[-1]), 0.0)
    mu[(mu < 0.0) & (mu >= -1e-10 * top)] = 0.0
    return mu


def heat_density_log_eigenvalues(s: Spectrum, t: float) -> np.ndarray:
    """Log eigenvalues of the trace-normalized heat operator at time t.

    Returns log p_i = -t*mu_i - logsumexp_j(-t*mu_j).  The p_i sum to one and
    are strictly positive for any finite spectrum; everything stays in the
    log domain, so large t never under- or overflows.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    a = -t * s.eigenvalues
    return a - logsumexp(a)


def kernel_basis(s: Spectrum, tol: float = DEFAULT_KERNEL_TOL) -> np.ndarray:
    """Rows spanning the numerical kernel: eigenvectors with
    mu < tol * max(mu_max, 1)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    thresh = tol * max(float(s.eigenvalues[-1]), 1.0)
    k = int(np.sum(s.eigenvalues < thresh))
    return s.eigenvectors[:, :k].T.copy()


def kernel_dimension(mu: np.ndarray, tol: float = DEFAULT_KERNEL_TOL) -> int:
    """Count of numerically zero eigenvalues under the relative tolerance."""
    thresh = tol * max(float(mu[-1]), 1.0)
    return int(np.sum(mu < thresh))


def spectrum_to_json(s: Spectrum, path, include_eigenvectors: bool = False) -> None:
    doc = {"mu": [float(v) for v in s.eigenvalues]}
    if include_eigenvectors:
        doc["eigenvectors"] = [[float(v) for v in row] for row in s.eigenvectors]
    else:
        doc["note"] = "eigenvectors omitted"
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True)
        f.write("\n")
