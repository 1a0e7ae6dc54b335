"""Command-line harness: synthetic experiments, image ingestion, and result
emission.

Subcommands: generate | cluster | trials | reduce | kmeans | ingest-images.
Single-file commands treat --out as the output path; multi-file commands
treat it as a stem and append _profile.csv, _assignment.json, and so on.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import clustering, dimred, entropy, geometry
from .graph import DuplicatePoints

LARGE_N_GUARD = 3000


def _add_common(p, *, gen_only=False):
    p.add_argument("--shape", default="circles",
                   choices=("circles",) + geometry.SHAPE_KINDS,
                   help="synthetic shape to generate (default: circles)")
    p.add_argument("--n", type=int, default=500, help="number of points")
    p.add_argument("--sd", type=float, default=0.0, help="Gaussian noise SD")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--out", required=True, help="output path (or stem)")
    if not gen_only:
        p.add_argument("--input", help="read the cloud from a CSV/JSON file "
                                       "instead of generating one")
        p.add_argument("--force", action="store_true",
                       help=f"allow n > {LARGE_N_GUARD} (dense cubic eigendecomposition "
                            "per grid scale)")


def _add_pipeline(p):
    p.add_argument("--grid-size", type=int, default=int(entropy.DEFAULT_GRID_SIZE),
                   help="number of scale-grid values (default: 200)")
    p.add_argument("--t-star", type=float, default=entropy.DEFAULT_T_STAR,
                   help="large-time heat parameter (default: 1000)")
    p.add_argument("--kernel-tol", type=float, default=1e-8,
                   help="relative kernel eigenvalue tolerance (default: 1e-8)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entroscale",
        description="Entropy-guided scale selection for clustering and "
                    "dimension reduction of point clouds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic point cloud")
    _add_common(p, gen_only=True)
    p.add_argument("--format", default="csv", choices=("csv", "json"))

    p = sub.add_parser("cluster", help="run the full clustering pipeline")
    _add_common(p)
    _add_pipeline(p)

    p = sub.add_parser("trials", help="repeat clustering over seeds and noise levels")
    _add_common(p)
    p.add_argument("--sd-list", type=float, nargs="+", default=None,
                   help="noise SDs to sweep (defaults to the single --sd value)")
    p.add_argument("--trials", type=int, default=1, help="trials per noise level")
    _add_pipeline(p)

    p = sub.add_parser("reduce", help="spectral dimension reduction")
    _add_common(p)
    _add_pipeline(p)
    p.add_argument("--k", type=int, required=True, help="target dimension")

    p = sub.add_parser("kmeans", help="k-means baseline with restarts")
    _add_common(p)
    p.add_argument("--k", type=int, required=True, help="number of clusters")

    p = sub.add_parser("ingest-images", help="flatten a directory of grayscale "
                                             "images into a point cloud")
    p.add_argument("--input", required=True, help="image directory")
    p.add_argument("--label-pattern", default=r"obj(\d+)",
                   help="regex whose first group extracts the object id from "
                        "a filename (default: obj(\\d+))")
    p.add_argument("--out", required=True, help="output path")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    return parser


def _make_cloud(args):
    if getattr(args, "input", None):
        path = Path(args.input)
        if path.suffix.lower() == ".json":
            return geometry.cloud_from_json(path)
        return geometry.cloud_from_csv(path)
    if args.shape == "circles":
        return geometry.gen_interlinked_circles(args.n, args.sd, args.seed)
    return geometry.gen_shape(args.shape, args.n, args.sd, args.seed)


def _guard_size(cloud, args):
    if cloud.n > LARGE_N_GUARD and not getattr(args, "force", False):
        raise SystemExit(
            f"error: n={cloud.n} exceeds {LARGE_N_GUARD}; each grid scale needs a dense "
            f"eigendecomposition (O(n^3)). Pass --force to proceed.")


def _write_cloud(cloud, path, fmt):
    if fmt == "json":
        geometry.cloud_to_json(cloud, path)
    else:
        geometry.cloud_to_csv(cloud, path)


def cmd_generate(args):
    cloud = _make_cloud(args)
    _write_cloud(cloud, args.out, args.format)
    print(f"wrote {cloud.n} points to {args.out}")
    return 0


def _smallest_positive_eigenvalue(cloud, assignment):
    from .graph import build_graph
    from .spectral import laplacian, laplacian_eigenvalues
    d = geometry.pairwise_distances(cloud)
    mu = laplacian_eigenvalues(laplacian(build_graph(d, assignment.r_hat)))
    positive = mu[mu > 1e-8 * max(float(mu[-1]), 1.0)]
    return float(positive[0]) if positive.size else None


def cmd_cluster(args):
    cloud = _make_cloud(args)
    _guard_size(cloud, args)
    assignment = clustering.cluster(cloud, grid_size=args.grid_size,
                                    t_star=args.t_star, kernel_tol=args.kernel_tol)
    stem = args.out
    profile_path = f"{stem}_profile.csv"
    entropy.profile_to_csv(assignment.profile, profile_path)
    # how close e^{-t* mu} is to the 0/1 split at the chosen scale
    diagnostics = {"smallest_positive_eigenvalue":
                   _smallest_positive_eigenvalue(cloud, assignment)}
    if cloud.labels is not None:
        cm = clustering.score(assignment, cloud.labels)
        clustering.confusion_to_csv(cm, f"{stem}_confusion.csv")
        diagnostics["mistakes"] = cm.mistakes
    clustering.assignment_to_json(assignment, f"{stem}_assignment.json",
                                  profile_ref=profile_path, diagnostics=diagnostics)
    print(f"r_hat={assignment.r_hat!r} k={assignment.k}")
    if "mistakes" in diagnostics:
        print(f"mistakes={diagnostics['mistakes']}")
    return 0


def cmd_trials(args):
    sds = args.sd_list if args.sd_list is not None else [args.sd]
    if args.trials < 1:
        raise SystemExit("error: --trials must be >= 1")
    rows = []
    for sd in sds:
        tally = {1: 0, 2: 0, 3: 0, "4plus": 0}
        for t in range(args.trials):
            seed = args.seed + t
            if args.shape == "circles":
                cloud = geometry.gen_interlinked_circles(args.n, sd, seed)
            else:
                cloud = geometry.gen_shape(args.shape, args.n, sd, seed)
            _guard_size(cloud, args)
            a = clustering.cluster(cloud, grid_size=args.grid_size,
                                   t_star=args.t_star, kernel_tol=args.kernel_tol)
            tally[a.k if a.k <= 3 else "4plus"] += 1
        pct = {key: 100.0 * v / args.trials for key, v in tally.items()}
        rows.append((sd, pct))
        print(f"sd={sd}: " + " ".join(
            f"k{key}={pct[key]:.3f}" for key in (1, 2, 3, "4plus")))
    with open(args.out, "w") as f:
        f.write("sd,k1,k2,k3,k4plus\n")
        for sd, pct in rows:
            f.write(f"{float(sd)!r},{pct[1]:.3f},{pct[2]:.3f},{pct[3]:.3f},"
                    f"{pct['4plus']:.3f}\n")
    return 0


def cmd_reduce(args):
    cloud = _make_cloud(args)
    _guard_size(cloud, args)
    emb = dimred.reduce(cloud, args.k, grid_size=args.grid_size,
                        t_star=args.t_star, kernel_tol=args.kernel_tol)
    dimred.embedding_to_csv(emb, f"{args.out}_embedding.csv", labels=cloud.labels)
    overlap = dimred.neighbor_overlap(cloud.points, emb.coords, n_neighbors=10)
    print(f"r_hat={emb.r_hat!r} k={args.k} neighbor_overlap_10nn={overlap:.4f}")
    return 0


def cmd_kmeans(args):
    cloud = _make_cloud(args)
    assignment = clustering.kmeans(cloud, args.k, seed=args.seed)
    diagnostics = {}
    if cloud.labels is not None:
        cm = clustering.score(assignment, cloud.labels)
        clustering.confusion_to_csv(cm, f"{args.out}_confusion.csv")
        diagnostics["mistakes"] = cm.mistakes
    clustering.assignment_to_json(assignment, f"{args.out}_assignment.json",
                                  diagnostics=diagnostics or None)
    msg = f"k={args.k}"
    if "mistakes" in diagnostics:
        msg += f" mistakes={diagnostics['mistakes']}"
    print(msg)
    return 0


def ingest_images(directory, label_pattern=r"obj(\d+)"):
    """Flatten every grayscale image in a directory (row-major, raw 0..255
    intensities) into one point per image; labels come from the filename."""
    from PIL import Image

    directory = Path(directory)
    paths = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() in (".png", ".pgm", ".jpg", ".jpeg", ".bmp", ".tif"))
    if not paths:
        raise ValueError(f"no image files found in {directory}")
    pattern = re.compile(label_pattern)
    vectors, labels = [], []
    shape = None
    for p in paths:
        with Image.open(p) as img:
            if img.mode != "L":
                img = img.convert("L")
            arr = np.asarray(img, dtype=float)
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise ValueError(
                f"mixed image dimensions: {p.name} is {arr.shape}, expected {shape}")
        vectors.append(arr.reshape(-1))
        m = pattern.search(p.name)
        labels.append(int(m.group(1)) if m else -1)
    points = np.vstack(vectors)

    # exact duplicate images would become zero-distance points downstream
    seen = {}
    dup = []
    for idx in range(points.shape[0]):
        key = points[idx].tobytes()
        if key in seen:
            dup.append((seen[key], idx))
        else:
            seen[key] = idx
    if dup:
        raise DuplicatePoints(dup)

    label_arr = np.array(labels, dtype=int)
    if np.all(label_arr == -1):
        label_arr = None
    return geometry.PointCloud(points=points, labels=label_arr, seed=None)


def cmd_ingest_images(args):
    cloud = ingest_images(args.input, args.label_pattern)
    _write_cloud(cloud, args.out, args.format)
    print(f"ingested {cloud.n} images of dimension {cloud.dim} to {args.out}")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "cluster": cmd_cluster,
    "trials": cmd_trials,
    "reduce": cmd_reduce,
    "kmeans": cmd_kmeans,
    "ingest-images": cmd_ingest_images,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except DuplicatePoints as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
