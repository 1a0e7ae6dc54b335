"""Entropy-guided scale selection for point-cloud clustering and spectral
dimension reduction.

Builds the family of distance-weighted neighborhood graphs of a point cloud,
selects the scale whose normalized heat operators at t = 1 and t >> 1 are
farthest apart in relative von Neumann entropy, and then clusters through the
Laplacian kernel or embeds through the low non-kernel eigenvectors of the
selected graph.
"""

from .clustering import (ClusterAssignment, ConfusionMatrix, IndicatorMatrix,
                         PivotUnderflow, assign_clusters, cluster, kmeans,
                         modified_gaussian_elimination, score)
from .dimred import Embedding, KTooLarge, neighbor_overlap, reduce
from .entropy import (DegenerateProfileWarning, EntropyProfile, ScaleSelection,
                      entropy_sweep, relative_vn_entropy_dense,
                      relative_vn_entropy_spectral, select_scale)
from .geometry import (DistanceMatrix, PointCloud, add_gaussian_noise,
                       gen_interlinked_circles, gen_shape, pairwise_distances)
from .graph import (ComponentLabeling, DuplicatePoints, WeightedGraph,
                    build_graph, component_profile, connected_components)
from .spectral import (Spectrum, eigendecompose, heat_density_log_eigenvalues,
                       kernel_basis, kernel_dimension, laplacian,
                       laplacian_eigenvalues)

__version__ = "0.1.0"

__all__ = [
    "PointCloud", "DistanceMatrix", "pairwise_distances",
    "gen_interlinked_circles", "gen_shape", "add_gaussian_noise",
    "WeightedGraph", "ComponentLabeling", "DuplicatePoints",
    "build_graph", "connected_components", "component_profile",
    "Spectrum", "laplacian", "laplacian_eigenvalues", "eigendecompose",
    "heat_density_log_eigenvalues", "kernel_basis", "kernel_dimension",
    "EntropyProfile", "ScaleSelection", "DegenerateProfileWarning",
    "relative_vn_entropy_spectral", "relative_vn_entropy_dense",
    "entropy_sweep", "select_scale",
    "IndicatorMatrix", "ClusterAssignment", "ConfusionMatrix", "PivotUnderflow",
    "modified_gaussian_elimination", "assign_clusters", "cluster", "kmeans", "score",
    "Embedding", "KTooLarge", "reduce", "neighbor_overlap",
    "__version__",
]
