"""
Decomposition Sweep

Generates one decomposition per (weights, N) cell and scores its uniform
complexity.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import pandas as pd
from tqdm import tqdm

from config import MikadoConfig
from models import Monolith, SweepRecord, Weights
from similarity import SimilarityMatrices, combine, similarity_matrices
from clustering import agglomerate, cut, similarity_to_distance
from complexity import ComplexityCalculator
from analysis.weights import enumerate_weightings
from monolith.partition import assert_partition
from exceptions import MikadoError, SweepError

logger = logging.getLogger("MikadoSweep")

SWEEP_COLUMNS = ["access", "write", "read", "sequence", "nClusters", "uniformComplexity"]


class DecompositionSweep:
    """
    Runs the weight x cluster-count protocol over one monolith.

    Similarity matrices and maxComplexity do not depend on the weights and
    are computed once; each weighting builds its own dendrogram.
    """

    def __init__(self, monolith: Monolith, config: MikadoConfig):
        self.monolith = monolith
        self.config = config
        self.universe = frozenset(monolith.entities)
        self.matrices: Optional[SimilarityMatrices] = None
        self.calculator = ComplexityCalculator(
            monolith,
            aggregation=config.complexity.trace_aggregation,
            strict_summation=config.complexity.strict_summation,
        )

    def _cells(self, weights: Weights, n_range: Sequence[int]) -> List[SweepRecord]:
        try:
            combined = combine(self.matrices, weights)
            distances = similarity_to_distance(combined, self.config.clustering.distance_mode)
            dendrogram = agglomerate(distances, self.config.clustering.linkage)
        except MikadoError as e:
            raise SweepError(
                f"Sweep failed building the dendrogram for {weights.label}: {e.message}",
                component="Sweep",
                context={"weights": list(weights.as_tuple())}
            ) from e

        records = []
        for n_clusters in n_range:
            try:
                decomposition = cut(dendrogram, n_clusters)
                assert_partition(decomposition, self.universe)
                report = self.calculator.system_complexity(decomposition)
            except MikadoError as e:
                raise SweepError(
                    f"Sweep failed at {weights.label}, N={n_clusters}: {e.message}",
                    component="Sweep",
                    context={"weights": list(weights.as_tuple()), "n_clusters": n_clusters}
                ) from e
            records.append(SweepRecord(
                weights=weights,
                n_clusters=n_clusters,
                uniform_complexity=report.uniform,
                decomposition=decomposition,
            ))
        return records

    def run(
        self,
        n_range: Iterable[int],
        step: int,
        workers: int = 1,
        progress: bool = False
    ) -> List[SweepRecord]:
        """
        Sweep every weighting on the step grid and every N in n_range.

        Records come back ordered by weights (lexicographic) then N,
        independent of the worker count.

        Raises:
            SweepError: If the cluster range exceeds the entity count or a cell fails
        """
        n_range = sorted(set(n_range))
        if not n_range:
            raise SweepError("Cluster range is empty", component="Sweep")
        if n_range[-1] > len(self.universe) or n_range[0] < 1:
            raise SweepError(
                f"Cluster range {n_range[0]}..{n_range[-1]} does not fit {len(self.universe)} entities",
                component="Sweep",
                context={"n_max": n_range[-1], "entities": len(self.universe)}
            )

        weightings = enumerate_weightings(step)
        self.matrices = similarity_matrices(
            self.monolith, self.config.similarity.sequence_self_pairs
        )
        # computed before workers start so they only read the cache
        max_complexity = self.calculator.max_complexity
        logger.info(
            f"Sweeping {len(weightings)} weightings x {len(n_range)} cluster counts "
            f"(maxComplexity={max_complexity}, workers={workers})"
        )

        def cells(weights: Weights) -> List[SweepRecord]:
            return self._cells(weights, n_range)

        if workers <= 1:
            batches = map(cells, weightings)
            batches = tqdm(batches, total=len(weightings), disable=not progress, desc="sweep")
            results = list(batches)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                batches = tqdm(
                    pool.map(cells, weightings), total=len(weightings), disable=not progress, desc="sweep"
                )
                results = list(batches)

        records = [record for batch in results for record in batch]
        logger.info(f"Sweep produced {len(records)} records")
        return records


def sweep(
    monolith: Monolith,
    n_range: Iterable[int],
    step: int,
    config: MikadoConfig,
    workers: Optional[int] = None,
    progress: bool = False
) -> List[SweepRecord]:
    """Run the sweep protocol; see DecompositionSweep.run."""
    runner = DecompositionSweep(monolith, config)
    return runner.run(n_range, step, workers or config.analysis.workers, progress)


def best_per_n(records: Sequence[SweepRecord]) -> Dict[int, SweepRecord]:
    """
    Lowest uniform complexity per cluster count; ties go to the
    lexicographically smallest weights.
    """
    if not records:
        raise SweepError("No sweep records to select from", component="Sweep")
    best: Dict[int, SweepRecord] = {}
    for record in records:
        current = best.get(record.n_clusters)
        key = (record.uniform_complexity, record.weights.as_tuple())
        if current is None or key < (current.uniform_complexity, current.weights.as_tuple()):
            best[record.n_clusters] = record
    return dict(sorted(best.items()))


def records_to_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    rows = [
        (*record.weights.as_tuple(), record.n_clusters, record.uniform_complexity)
        for record in records
    ]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def write_sweep_csv(records: Sequence[SweepRecord], path: Union[str, Path], decimals: int = 6) -> None:
    """Sweep CSV with the fixed header and fixed decimal places."""
    records_to_frame(records).to_csv(
        path, index=False, float_format=f"%.{decimals}f", lineterminator="\n"
    )
