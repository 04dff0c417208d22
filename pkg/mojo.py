"""
MoJo Distance
Minimum Move/Join distance between decompositions and its normalized
MoJoFM percentage.
"""
import logging
from collections import deque
from decimal import Decimal, ROUND_HALF_UP
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from sympy.utilities.iterables import multiset_partitions

from models import AlignStrategy, ComparisonRow, Decomposition, MojoResult
from exceptions import (
    EmptyIntersectionError,
    SingletonUniverseError,
    UniverseMismatchError,
    UniverseTooLargeError,
)

logger = logging.getLogger("MikadoMojo")

BRUTE_FORCE_LIMIT = 8
DEFAULT_ENUMERATION_LIMIT = 12

Partition = FrozenSet[FrozenSet[int]]


def _add_to_largest(target: Decomposition, extra: Iterable[int]) -> Decomposition:
    extra = frozenset(extra)
    if not extra:
        return target
    clusters = dict(target.clusters)
    if clusters:
        name = target.largest_cluster()
        clusters[name] = clusters[name] | extra
    else:
        clusters["c0"] = extra
    return Decomposition(clusters=clusters)


def _restrict(decomposition: Decomposition, universe: FrozenSet[int]) -> Decomposition:
    return Decomposition(clusters={
        name: members & universe
        for name, members in decomposition.clusters.items()
        if members & universe
    })


def align_universes(
    a: Decomposition,
    b: Decomposition,
    strategy: AlignStrategy = AlignStrategy.BIGGEST_CLUSTER
) -> Tuple[Decomposition, Decomposition]:
    """
    Make two decompositions cover the same entities.

    BIGGEST_CLUSTER puts each side's missing entities into its largest
    cluster; DROP_UNCOMMON keeps only the shared entities.

    Raises:
        EmptyIntersectionError: If DROP_UNCOMMON leaves nothing
    """
    if strategy is AlignStrategy.BIGGEST_CLUSTER:
        return (
            _add_to_largest(a, b.universe - a.universe),
            _add_to_largest(b, a.universe - b.universe),
        )

    common = a.universe & b.universe
    if not common:
        raise EmptyIntersectionError(
            "Decompositions share no entities",
            component="Mojo",
            context={"a": len(a.universe), "b": len(b.universe)}
        )
    return _restrict(a, common), _restrict(b, common)


def _check_universes(a: Decomposition, b: Decomposition) -> None:
    if a.universe != b.universe:
        raise UniverseMismatchError(
            "Decompositions cover different entities; align them first",
            component="Mojo",
            context={
                "only_a": sorted(a.universe - b.universe),
                "only_b": sorted(b.universe - a.universe),
            }
        )


def _mno_from_overlaps(overlaps: np.ndarray) -> int:
    """
    Minimum moves + joins given |A_i & B_j| overlaps (rows: clusters of A).

    Each A cluster keeps the entities of a tagged B cluster and moves the
    rest; clusters sharing a tag are joined. Every row tags one of its
    maximal overlaps, and a maximum matching between rows and those columns
    gives the largest number of distinct tags.
    """
    n = int(overlaps.sum())
    rows = overlaps.shape[0]
    row_max = overlaps.max(axis=1)
    candidates = (overlaps == row_max[:, None]).astype(float)
    matched_rows, matched_cols = linear_sum_assignment(candidates, maximize=True)
    distinct_tags = int(candidates[matched_rows, matched_cols].sum())
    moves = n - int(row_max.sum())
    joins = rows - distinct_tags
    return moves + joins


def _overlaps(a: Decomposition, b: Decomposition) -> np.ndarray:
    b_names = sorted(b.clusters)
    column = {name: j for j, name in enumerate(b_names)}
    out = np.zeros((len(a.clusters), len(b_names)), dtype=int)
    for i, name in enumerate(sorted(a.clusters)):
        for entity in a.clusters[name]:
            out[i, column[b.cluster_of(entity)]] += 1
    return out


def mojo_distance(a: Decomposition, b: Decomposition) -> int:
    """
    Exact minimum number of Move and Join operations transforming a into b.

    Raises:
        UniverseMismatchError: If the decompositions cover different entities
    """
    _check_universes(a, b)
    if not a.clusters:
        return 0
    return _mno_from_overlaps(_overlaps(a, b))


def _neighbours(state: Partition) -> Iterable[Partition]:
    clusters = list(state)
    for i, source in enumerate(clusters):
        rest = [c for k, c in enumerate(clusters) if k != i]
        for entity in source:
            remaining = source - {entity}
            kept = [remaining] if remaining else []
            if remaining:
                yield frozenset(rest + kept + [frozenset([entity])])
            for k, target in enumerate(rest):
                moved = rest[:k] + [target | {entity}] + rest[k + 1:]
                yield frozenset(moved + kept)
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            others = [c for k, c in enumerate(clusters) if k not in (i, j)]
            yield frozenset(others + [clusters[i] | clusters[j]])


def brute_force_mno(a: Decomposition, b: Decomposition) -> int:
    """
    Breadth-first search over Move/Join operations; the verification oracle.

    Raises:
        UniverseTooLargeError: If the universe has more than 8 entities
    """
    _check_universes(a, b)
    if len(a.universe) > BRUTE_FORCE_LIMIT:
        raise UniverseTooLargeError(
            f"Brute force is limited to {BRUTE_FORCE_LIMIT} entities",
            component="Mojo",
            context={"entities": len(a.universe)}
        )

    start, goal = a.as_partition(), b.as_partition()
    depth: Dict[Partition, int] = {start: 0}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == goal:
            return depth[state]
        for nxt in _neighbours(state):
            if nxt not in depth:
                depth[nxt] = depth[state] + 1
                queue.append(nxt)
    raise AssertionError("goal partition unreachable")  # every partition is reachable


def _constructed_max_mno(sizes: Sequence[int]) -> int:
    """
    Worst case over all partitions: n - min_k (k + b_(k+1)) with reference
    cluster sizes sorted descending.
    """
    ordered = sorted(sizes, reverse=True) + [0]
    cover = min(k + ordered[k] for k in range(len(ordered)))
    return sum(sizes) - cover


def _enumerated_max_mno(sizes: Sequence[int]) -> int:
    # The worst case depends only on the multiset of reference cluster sizes.
    return _enumerated_max_for_shape(tuple(sorted(sizes, reverse=True)))


@lru_cache(maxsize=256)
def _enumerated_max_for_shape(shape: Tuple[int, ...]) -> int:
    # Entities of one reference cluster are interchangeable, so partitions
    # of the multiset of cluster labels cover every partition of the universe.
    logger.debug(f"Enumerating worst case for cluster sizes {shape}")
    labels = [j for j, size in enumerate(shape) for _ in range(size)]
    worst = 0
    for parts in multiset_partitions(labels):
        overlaps = np.zeros((len(parts), len(shape)), dtype=int)
        for i, part in enumerate(parts):
            for label in part:
                overlaps[i, label] += 1
        worst = max(worst, _mno_from_overlaps(overlaps))
    return worst


def max_mojo_distance(
    b: Decomposition,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
) -> Tuple[int, str]:
    """
    Largest mojo_distance(A, b) over every partition A of b's universe.

    Returns:
        (max mno, provenance) where provenance is "enumeration" or "construction"

    Raises:
        SingletonUniverseError: If the universe has fewer than two entities
    """
    n = len(b.universe)
    if n < 2:
        raise SingletonUniverseError(
            "MoJoFM needs at least two entities",
            component="Mojo",
            context={"entities": n}
        )

    sizes = [len(members) for members in b.clusters.values()]
    if n <= enumeration_limit:
        return _enumerated_max_mno(sizes), "enumeration"

    logger.info(f"Universe of {n} entities above enumeration limit {enumeration_limit}; using construction")
    return _constructed_max_mno(sizes), "construction"


def _round_pct(value: float) -> float:
    return float(Decimal(str(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def mojofm(
    a: Decomposition,
    b: Decomposition,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
) -> MojoResult:
    """
    MoJoFM(a, b) = (1 - mno(a, b) / max mno(., b)) x 100 with b as reference.
    """
    mno = mojo_distance(a, b)
    max_mno, provenance = max_mojo_distance(b, enumeration_limit)
    return MojoResult(
        mno=mno,
        max_mno=max_mno,
        mojo_fm=_round_pct((1.0 - mno / max_mno) * 100.0),
        provenance=provenance,
    )


def compare(
    candidate: Decomposition,
    reference: Decomposition,
    strategy: AlignStrategy = AlignStrategy.BIGGEST_CLUSTER,
    reference_is_b: bool = True,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
) -> MojoResult:
    """Align, then score candidate against reference."""
    a, b = align_universes(candidate, reference, strategy)
    if not reference_is_b:
        a, b = b, a
    return mojofm(a, b, enumeration_limit)


def compare_with_reference(
    best: Dict[int, Decomposition],
    reference: Decomposition,
    source: str,
    strategy: AlignStrategy = AlignStrategy.BIGGEST_CLUSTER,
    reference_is_b: bool = True,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
) -> List[ComparisonRow]:
    """One comparison row per cluster count, in ascending N."""
    rows = []
    for n_clusters in sorted(best):
        result = compare(best[n_clusters], reference, strategy, reference_is_b, enumeration_limit)
        rows.append(ComparisonRow(
            n_clusters=n_clusters,
            source=source,
            mno=result.mno,
            max_mno=result.max_mno,
            mojo_fm=result.mojo_fm,
        ))
    return rows


def compare_best_per_n(
    best: Dict[int, Decomposition],
    other: Dict[int, Decomposition],
    source: str,
    strategy: AlignStrategy = AlignStrategy.BIGGEST_CLUSTER,
    reference_is_b: bool = True,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
) -> Tuple[List[ComparisonRow], List[int]]:
    """
    Compare two sweeps cluster count by cluster count, other[N] as reference.

    Returns:
        (rows in ascending N, cluster counts present in only one sweep)
    """
    shared = sorted(set(best) & set(other))
    unmatched = sorted(set(best) ^ set(other))
    if unmatched:
        logger.warning(f"Cluster counts {unmatched} appear in only one sweep")
    rows = []
    for n_clusters in shared:
        result = compare(best[n_clusters], other[n_clusters], strategy, reference_is_b, enumeration_limit)
        rows.append(ComparisonRow(
            n_clusters=n_clusters,
            source=source,
            mno=result.mno,
            max_mno=result.max_mno,
            mojo_fm=result.mojo_fm,
        ))
    return rows, unmatched
