"""
Hierarchical Clustering
Agglomerative clustering of domain entities and dendrogram cuts.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from models import Decomposition, DistanceMode, Linkage
from similarity import SimilarityMatrix
from exceptions import ClusteringError, CutRangeError

logger = logging.getLogger("MikadoClustering")

# Float noise tolerated before a height counts as an inversion.
_HEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric, non-negative distances with a zero diagonal."""
    entities: Tuple[int, ...]
    values: np.ndarray


@dataclass(frozen=True)
class Dendrogram:
    """
    Binary merge tree over `leaves`.

    Nodes 0..n-1 are leaf indices; merge k creates node n + k
    (the SciPy linkage convention).
    """
    leaves: Tuple[int, ...]
    merges: Tuple[Tuple[int, int, float], ...]

    @property
    def heights(self) -> List[float]:
        return [height for _, _, height in self.merges]


def similarity_to_distance(
    similarity: SimilarityMatrix,
    mode: DistanceMode = DistanceMode.ROW_EUCLIDEAN
) -> DistanceMatrix:
    """
    Turn a (possibly asymmetric) similarity matrix into clustering distances.

    ROW_EUCLIDEAN treats rows as feature vectors; ONE_MINUS_SYM uses
    1 - (s(i,j) + s(j,i)) / 2.
    """
    s = np.asarray(similarity.values, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ClusteringError(f"Similarity matrix must be square, got {s.shape}", component="Clustering")

    n = s.shape[0]
    if mode is DistanceMode.ROW_EUCLIDEAN:
        values = squareform(pdist(s, metric="euclidean")) if n > 1 else np.zeros((n, n))
    else:
        values = 1.0 - (s + s.T) / 2.0
        np.fill_diagonal(values, 0.0)
        values = np.clip(values, 0.0, None)

    return DistanceMatrix(entities=similarity.entities, values=values)


def _lance_williams(linkage: Linkage, d_ik: np.ndarray, d_jk: np.ndarray, n_i: int, n_j: int) -> np.ndarray:
    if linkage is Linkage.SINGLE:
        return np.minimum(d_ik, d_jk)
    if linkage is Linkage.COMPLETE:
        return np.maximum(d_ik, d_jk)
    return (n_i * d_ik + n_j * d_jk) / (n_i + n_j)


def agglomerate(distances: DistanceMatrix, linkage: Linkage = Linkage.AVERAGE) -> Dendrogram:
    """
    Agglomerative clustering with Lance-Williams updates.

    Ties go to the smallest (row, column) pair of the current matrix; the
    merged cluster takes the row of its first member.
    """
    n = len(distances.entities)
    if n == 0:
        raise ClusteringError("Cannot cluster an empty entity set", component="Clustering")

    d = np.array(distances.values, dtype=float, copy=True)
    nodes = list(range(n))
    sizes = [1] * n
    merges: List[Tuple[int, int, float]] = []
    previous = 0.0

    for step in range(n - 1):
        m = len(nodes)
        rows, cols = np.triu_indices(m, k=1)
        best = int(np.argmin(d[rows, cols]))
        i, j = int(rows[best]), int(cols[best])
        height = float(d[i, j])
        if previous - _HEIGHT_TOLERANCE <= height < previous:
            height = previous
        previous = height

        merges.append((nodes[i], nodes[j], height))

        updated = _lance_williams(linkage, d[i], d[j], sizes[i], sizes[j])
        d[i, :] = updated
        d[:, i] = updated
        d[i, i] = 0.0
        d = np.delete(np.delete(d, j, axis=0), j, axis=1)

        nodes[i] = n + step
        sizes[i] += sizes[j]
        del nodes[j]
        del sizes[j]

    logger.debug(f"Agglomerated {n} entities with {linkage.value} linkage")
    return Dendrogram(leaves=tuple(distances.entities), merges=tuple(merges))


def cut(dendrogram: Dendrogram, n_clusters: int) -> Decomposition:
    """
    Undo the last n-1 merges. Clusters are named c0..c{n-1} by ascending
    smallest leaf index.

    Raises:
        CutRangeError: If n_clusters is outside 1..|E|
    """
    leaves = len(dendrogram.leaves)
    if not 1 <= n_clusters <= leaves:
        raise CutRangeError(
            f"Cannot cut {leaves} entities into {n_clusters} clusters",
            component="Clustering",
            context={"n_clusters": n_clusters, "entities": leaves}
        )

    members: Dict[int, List[int]] = {i: [i] for i in range(leaves)}
    for step, (left, right, _) in enumerate(dendrogram.merges[: leaves - n_clusters]):
        members[leaves + step] = members.pop(left) + members.pop(right)

    groups = sorted(members.values(), key=min)
    return Decomposition(clusters={
        f"c{k}": frozenset(dendrogram.leaves[i] for i in group)
        for k, group in enumerate(groups)
    })


def to_linkage_matrix(dendrogram: Dendrogram) -> np.ndarray:
    """SciPy-format linkage matrix: (left, right, height, size) per merge."""
    leaves = len(dendrogram.leaves)
    sizes = [1] * leaves
    rows = []
    for left, right, height in dendrogram.merges:
        size = sizes[left] + sizes[right]
        sizes.append(size)
        rows.append([left, right, height, size])
    return np.array(rows, dtype=float).reshape(len(rows), 4)


def dendrogram_to_dict(dendrogram: Dendrogram) -> Dict[str, Any]:
    """Dendrogram dump: leaf ordering and merges with 9 significant digits."""
    return {
        "leaves": list(dendrogram.leaves),
        "merges": [[left, right, float(f"{height:.9g}")] for left, right, height in dendrogram.merges],
    }
