"""Point clouds, pairwise distances, and synthetic shape generators."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

# Interlinked-circles configuration: one "horizontal" circle in the xy-plane
# plus two smaller circles threaded through it like chain links.  The small
# circles live in the plane x = 0; that is the only axis-aligned orientation
# for which each of them actually interlinks the large circle.
CIRCLE_RADII = (1.0, 0.5, 0.4)
CIRCLE_CENTERS = ((0.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 1.0, 0.0))

SHAPE_KINDS = ("trefoil", "torus_knot", "corona", "swiss_roll")


@dataclass
class PointCloud:
    """n points in R^d, with optional ground-truth labels and generator seed."""

    points: np.ndarray
    labels: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] < 1 or self.points.shape[1] < 1:
            raise ValueError("points must be an n x d matrix with n, d >= 1")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points must have finite coordinates")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int)
            if self.labels.shape != (self.points.shape[0],):
                raise ValueError("labels length must equal the number of points")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass
class DistanceMatrix:
    """Symmetric matrix of pairwise ambient (Euclidean) distances."""

    d: np.ndarray
    diam: float

    def __post_init__(self):
        self.d = np.asarray(self.d, dtype=float)
        if self.d.ndim != 2 or self.d.shape[0] != self.d.shape[1]:
            raise ValueError("distance matrix must be square")

    @property
    def n(self) -> int:
        return self.d.shape[0]


def pairwise_distances(cloud: PointCloud) -> DistanceMatrix:
    """Euclidean distance matrix of a cloud; symmetric with zero diagonal."""
    if cloud.n == 1:
        d = np.zeros((1, 1))
    else:
        d = squareform(pdist(cloud.points))
    return DistanceMatrix(d=d, diam=float(d.max()))


def _even_allocation(n, k):
    # remainder goes to the first (largest) groups
    base, rem = divmod(n, k)
    return [base + (1 if i < rem else 0) for i in range(k)]


def gen_interlinked_circles(n: int, noise_sd: float, seed: int | None = None) -> PointCloud:
    """Sample n labeled points from three interlinked circles in R^3.

    The large circle (radius 1) lies in the xy-plane around the origin; the
    two small circles (radii 0.5 and 0.4, centers (0,-1,0) and (0,1,0)) lie
    in the plane x = 0, each threading the large one.  Angles are i.i.d.
    uniform; isotropic Gaussian noise of standard deviation ``noise_sd`` is
    added to every coordinate.  Points are allocated to circles as evenly as
    possible, remainder to the largest circles first.  Labels give the circle
    index (0 = large, 1 = radius 0.5, 2 = radius 0.4).
    """
    if n < 3:
        raise ValueError("need n >= 3 to place a point on every circle")
    if noise_sd < 0:
        raise ValueError("noise_sd must be >= 0")
    rng = np.random.default_rng(seed)
    counts = _even_allocation(n, 3)

    blocks = []
    theta = rng.uniform(0.0, 2.0 * np.pi, counts[0])
    blocks.append(np.column_stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)]))
    theta = rng.uniform(0.0, 2.0 * np.pi, counts[1])
    blocks.append(np.column_stack(
        [np.zeros_like(theta), -1.0 + 0.5 * np.cos(theta), 0.5 * np.sin(theta)]))
    theta = rng.uniform(0.0, 2.0 * np.pi, counts[2])
    blocks.append(np.column_stack(
        [np.zeros_like(theta), 1.0 + 0.4 * np.cos(theta), 0.4 * np.sin(theta)]))

    points = np.vstack(blocks)
    points = points + rng.normal(0.0, noise_sd, points.shape)
    labels = np.repeat(np.arange(3), counts)
    return PointCloud(points=points, labels=labels, seed=seed)


def _shape_points(kind, t, rng):
    if kind == "trefoil":
        return np.column_stack([
            np.sin(t) + 2.0 * np.sin(2.0 * t),
            np.cos(t) - 2.0 * np.cos(2.0 * t),
            -np.sin(3.0 * t),
        ])
    if kind == "torus_knot":
        # (3,2) knot on the torus R=2, r=1
        return np.column_stack([
            (2.0 + np.cos(2.0 * t)) * np.cos(3.0 * t),
            (2.0 + np.cos(2.0 * t)) * np.sin(3.0 * t),
            np.sin(2.0 * t),
        ])
    if kind == "corona":
        # unit circle with a sinusoidal vertical ripple
        return np.column_stack([np.cos(t), np.sin(t), 0.3 * np.sin(6.0 * t)])
    if kind == "swiss_roll":
        u = 1.5 * np.pi + t * 3.0 / 2.0  # reparametrize [0,2pi) -> [1.5pi, 4.5pi)
        y = rng.uniform(0.0, 10.0, t.shape)
        return np.column_stack([u * np.cos(u), y, u * np.sin(u)])
    raise ValueError(f"unknown shape kind: {kind!r}")


def gen_shape(kind: str, n: int, noise_sd: float, seed: int | None = None) -> PointCloud:
    """Sample n points from a named 3D test shape plus isotropic Gaussian noise.

    Kinds: trefoil, torus_knot, corona, swiss_roll.
    """
    if kind not in SHAPE_KINDS:
        raise ValueError(f"unknown shape kind: {kind!r} (expected one of {SHAPE_KINDS})")
    if n < 1:
        raise ValueError("need n >= 1")
    if noise_sd < 0:
        raise ValueError("noise_sd must be >= 0")
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 2.0 * np.pi, n)
    points = _shape_points(kind, t, rng)
    points = points + rng.normal(0.0, noise_sd, points.shape)
    return PointCloud(points=points, labels=None, seed=seed)


def add_gaussian_noise(cloud: PointCloud, sd: float, seed: int | None = None) -> PointCloud:
    """Perturb every coordinate by an independent N(0, sd^2) draw."""
    if sd < 0:
        raise ValueError("sd must be >= 0")
    rng = np.random.default_rng(seed)
    points = cloud.points + rng.normal(0.0, sd, cloud.points.shape)
    labels = None if cloud.labels is None else cloud.labels.copy()
    return PointCloud(points=points, labels=labels, seed=seed)


# ---------------------------------------------------------------------------
# serialization

def _fmt(x):
    return repr(float(x))


def cloud_to_csv(cloud: PointCloud, path) -> None:
    """CSV: one row per point, coordinates then optional integer label."""
    with open(path, "w") as f:
        if cloud.seed is not None:
            f.write(f"# seed={cloud.seed}\n")
        cols = [f"x{i}" for i in range(cloud.dim)]
        if cloud.labels is not None:
            cols.append("label")
        f.write(",".join(cols) + "\n")
        for i in range(cloud.n):
            row = [_fmt(v) for v in cloud.points[i]]
            if cloud.labels is not None:
                row.append(str(int(cloud.labels[i])))
            f.write(",".join(row) + "\n")


def cloud_from_csv(path) -> PointCloud:
    seed = None
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    if lines and lines[0].startswith("# seed="):
        seed = int(lines[0].split("=", 1)[1])
        lines = lines[1:]
    header = lines[0].split(",")
    has_labels = header[-1] == "label"
    dim = len(header) - (1 if has_labels else 0)
    points, labels = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        points.append([float(v) for v in parts[:dim]])
        if has_labels:
            labels.append(int(parts[dim]))
    return PointCloud(points=np.array(points),
                      labels=np.array(labels, dtype=int) if has_labels else None,
                      seed=seed)


def cloud_to_json(cloud: PointCloud, path) -> None:
    doc = {
        "points": [[float(v) for v in row] for row in cloud.points],
        "labels": None if cloud.labels is None else [int(v) for v in cloud.labels],
        "seed": cloud.seed,
    }
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True)
        f.write("\n")


def cloud_from_json(path) -> PointCloud:
    with open(path) as f:
        doc = json.load(f)
    labels = doc.get("labels")
    return PointCloud(points=np.array(doc["points"], dtype=float),
                      labels=None if labels is None else np.array(labels, dtype=int),
                      seed=doc.get("seed"))
