"""Relative von Neumann entropy between normalized heat operators, the
entropy-vs-scale sweep, and argmax scale selection."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .geometry import DistanceMatrix
from .graph import DuplicatePoints, find_duplicate_pairs
from .spectral import laplacian_eigenvalues, laplacian_from_distances

DEFAULT_GRID_SIZE = 200
DEFAULT_T_STAR = 1000.0


class DegenerateProfileWarning(UserWarning):
    """The entropy profile is identically zero: no scale produced any edges
    worth distinguishing, so the selected scale is arbitrary."""


@dataclass
class EntropyProfile:
    """Entropy (nats) of each scale on an ascending grid."""

    scales: np.ndarray
    entropies: np.ndarray
    t_star: float


@dataclass
class ScaleSelection:
    """The grid scale maximizing the entropy profile (smallest index on ties)."""

    r_hat: float
    index: int
    h_max: float
    degenerate: bool = False


def relative_vn_entropy_spectral(mu, t1: float, t2: float) -> float:
    """Relative entropy H(rho||sigma) between trace-normalized heat operators
    at times t1 < t2, from Laplacian eigenvalues alone.

    The operators commute, so H reduces to a sum over eigenvalue pairs; in
    the log domain that collapses to

        H = (t2 - t1) * sum_i p_i mu_i - logZ(t1) + logZ(t2),

    with p_i = exp(-t1 mu_i) / Z(t1) and Z(t) = sum_j exp(-t mu_j).  Both
    densities are strictly positive, so the result is always finite, and the
    evaluation never forms exp(-t mu) outside the log domain (t2 = 1000
    would underflow for any mu > 0.7).
    """
    mu = np.asarray(mu, dtype=float)
    if not np.all(np.isfinite(mu)):
        raise ValueError("eigenvalues must be finite")
    if np.any(mu < 0):
        raise ValueError("eigenvalues must be non-negative")
    if not (0 < t1 < t2):
        raise ValueError("need 0 < t1 < t2")
    a = -t1 * mu
    log_z1 = logsumexp(a)
    log_z2 = logsumexp(-t2 * mu)
    p = np.exp(a - log_z1)
    return float((t2 - t1) * np.dot(p, mu) - log_z1 + log_z2)


def _check_symmetric(a, name):
    scale = max(float(np.abs(a).max()), 1.0)
    if np.abs(a - a.T).max() > 1e-10 * scale:
        raise ValueError(f"{name} must be symmetric")


def relative_vn_entropy_dense(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Tr(rho log rho - rho log sigma) for arbitrary PSD matrices.

    General-case oracle: each operator is diagonalized independently and the
    definition is applied with the 0*log(0) = 0 convention.  Eigenvalues
    below 1e-12 of the largest count as the operator's kernel; if rho puts
    mass on sigma's kernel the divergence is +infinity.
    """
    rho = np.asarray(rho, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    _check_symmetric(rho, "rho")
    _check_symmetric(sigma, "sigma")
    tr = float(np.trace(rho))
    if abs(tr - 1.0) > 1e-6:
        raise ValueError(f"rho must have unit trace, got {tr}")

    a, _ = np.linalg.eigh(rho)
    b, w = np.linalg.eigh(sigma)

    sup_a = a > 1e-12 * max(float(a[-1]), 0.0)
    tr_rho_log_rho = float(np.sum(a[sup_a] * np.log(a[sup_a])))

    sup_b = b > 1e-12 * max(float(b[-1]), 0.0)
    quad = np.einsum("ji,jk,ki->i", w, rho, w)  # <w_i, rho w_i>
    quad = np.clip(quad, 0.0, None)
    mass_outside = float(quad[~sup_b].sum())
    if mass_outside > 1e-10:
        return math.inf
    tr_rho_log_sigma = float(np.dot(quad[sup_b], np.log(b[sup_b])))
    return tr_rho_log_rho - tr_rho_log_sigma


def entropy_sweep(d: DistanceMatrix, grid_size: int = DEFAULT_GRID_SIZE,
                  t_star: float = DEFAULT_T_STAR) -> EntropyProfile:
    """Entropy of every scale on the grid (diam/grid_size) * {1..grid_size}.

    For each scale the neighborhood graph's Laplacian spectrum is computed
    and H between the normalized heat operators at t = 1 and t = t_star is
    evaluated in the log domain.  Scales with no edges score exactly zero;
    consecutive scales with identical edge sets reuse the previous value
    (edges only accumulate as r grows).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    if t_star <= 1.0:
        raise ValueError("t_star must exceed the base time t = 1")
    dup = find_duplicate_pairs(d)
    if dup:
        raise DuplicatePoints(dup)
    if d.diam <= 0:
        raise ValueError("cloud has zero diameter; no positive scale grid exists")

    grid = (d.diam / grid_size) * np.arange(1, grid_size + 1, dtype=float)
    grid[-1] = d.diam  # boundary inclusive: the diameter pair is an edge
    dm = d.d
    off_diag = ~np.eye(d.n, dtype=bool)

    entropies = np.empty(grid_size)
    prev_edges = -1
    prev_h = 0.0
    for idx, r in enumerate(grid):
        m = int(np.count_nonzero((dm <= r) & off_diag))
        if m == 0:
            h = 0.0
        elif m == prev_edges:
            h = prev_h
        else:
            mu = laplacian_eigenvalues(laplacian_from_distances(dm, r))
            h = relative_vn_entropy_spectral(mu, 1.0, t_star)
        entropies[idx] = h
        prev_edges, prev_h = m, h
    return EntropyProfile(scales=grid, entropies=entropies, t_star=float(t_star))


def select_scale(p: EntropyProfile) -> ScaleSelection:
    """Smallest-index maximizer of the profile.

    An all-zero profile means no scale found structure; the first index is
    still returned but flagged degenerate.
    """
    if p.scales.size == 0:
        raise ValueError("profile is empty")
    idx = int(np.argmax(p.entropies))
    h_max = float(p.entropies[idx])
    degenerate = h_max <= 0.0
    if degenerate:
        warnings.warn("entropy profile is identically zero; scale selection is arbitrary",
                      DegenerateProfileWarning, stacklevel=2)
    return ScaleSelection(r_hat=float(p.scales[idx]), index=idx, h_max=h_max,
                          degenerate=degenerate)


# ---------------------------------------------------------------------------
# serialization

def profile_to_csv(p: EntropyProfile, path) -> None:
    """CSV of the entropy-vs-scale curve, header "r,entropy"."""
    with open(path, "w") as f:
        f.write(f"# t_star={p.t_star!r}\n")
        f.write("r,entropy\n")
        for r, h in zip(p.scales, p.entropies):
            f.write(f"{float(r)!r},{float(h)!r}\n")


def profile_from_csv(path) -> EntropyProfile:
    t_star = DEFAULT_T_STAR
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if lines and lines[0].startswith("# t_star="):
        t_star = float(lines[0].split("=", 1)[1])
        lines = lines[1:]
    scales, entropies = [], []
    for ln in lines[1:]:  # skip header
        r, h = ln.split(",")
        scales.append(float(r))
        entropies.append(float(h))
    return EntropyProfile(scales=np.array(scales), entropies=np.array(entropies),
                          t_star=t_star)


def profile_to_json(p: EntropyProfile, path, selection: ScaleSelection | None = None) -> None:
    doc = {
        "r": [float(v) for v in p.scales],
        "entropy": [float(v) for v in p.entropies],
        "t_star": p.t_star,
    }
    if selection is not None:
        doc["selection"] = {
            "r_hat": selection.r_hat,
            "index": selection.index,
            "h_max": selection.h_max,
            "degenerate": selection.degenerate,
        }
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True)
        f.write("\n")
