"""
Main Orchestrator: Mikado Pipeline
Coordinates parsing, decomposition, scoring, comparison and sweeps.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from config import MikadoConfig, load_config
from models import (
    ComparisonRow,
    ComplexityReport,
    CoverageReport,
    Decomposition,
    GenParams,
    Monolith,
    MojoResult,
    RegressionReport,
    SweepRecord,
    ValidationReport,
    Weights,
)
from monolith import (
    TraceParser,
    assert_partition,
    common_subset,
    compare_coverage,
    restrict_monolith,
    validate_monolith,
)
from similarity import combine, similarity_matrices, validate_weights
from clustering import Dendrogram, agglomerate, cut, similarity_to_distance
from complexity import ComplexityCalculator
from mojo import compare, compare_best_per_n, compare_with_reference
from analysis import DecompositionSweep, best_per_n, ols_fit
from workload import SyntheticMonolithGenerator
from exceptions import AnalysisError, MikadoError

# Library code never configures logging; cli.py does.
logger = logging.getLogger("MikadoOrchestrator")


@dataclass
class SweepOutcome:
    """Everything a sweep run produces."""
    monolith: Monolith
    records: List[SweepRecord]
    best: Dict[int, SweepRecord]
    regression: Optional[RegressionReport]
    comparison: List[ComparisonRow] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)


class MikadoPipeline:
    """
    Main orchestrator for the decomposition toolkit.
    Holds the configuration and one calculator per monolith.
    """

    def __init__(self, config: Optional[MikadoConfig] = None):
        self.config = config or load_config()
        self.parser = TraceParser()
        self._calculators: Dict[int, ComplexityCalculator] = {}
        logger.debug(
            f"Pipeline ready: distance={self.config.clustering.distance_mode.value}, "
            f"linkage={self.config.clustering.linkage.value}"
        )

    def _calculator(self, monolith: Monolith) -> ComplexityCalculator:
        calculator = self._calculators.get(id(monolith))
        if calculator is None or calculator.monolith is not monolith:
            calculator = ComplexityCalculator(
                monolith,
                aggregation=self.config.complexity.trace_aggregation,
                strict_summation=self.config.complexity.strict_summation,
            )
            self._calculators[id(monolith)] = calculator
        return calculator

    # ---------------------------------------------------------------------
    # INPUT
    # ---------------------------------------------------------------------

    def load_monolith(self, path: Union[str, Path]) -> Monolith:
        return self.parser.parse_file(path)

    def validate(self, monolith: Monolith) -> ValidationReport:
        report = validate_monolith(monolith)
        for warning in report.warnings:
            logger.warning(f"{warning.code}: {warning.message}")
        return report

    def coverage(self, reference: Monolith, other: Monolith) -> CoverageReport:
        return compare_coverage(reference, other)

    # ---------------------------------------------------------------------
    # DECOMPOSITION
    # ---------------------------------------------------------------------

    def dendrogram(self, monolith: Monolith, weights: Weights) -> Dendrogram:
        validate_weights(weights, step=1)
        combined = combine(
            similarity_matrices(monolith, self.config.similarity.sequence_self_pairs), weights
        )
        distances = similarity_to_distance(combined, self.config.clustering.distance_mode)
        return agglomerate(distances, self.config.clustering.linkage)

    def decompose(self, monolith: Monolith, weights: Weights, n_clusters: int) -> Tuple[Decomposition, Dendrogram]:
        """
        Cut the weighted dendrogram into n_clusters clusters.

        Raises:
            WeightError: If the weights do not sum to 100
            CutRangeError: If n_clusters is outside 1..|E|
        """
        dendrogram = self.dendrogram(monolith, weights)
        decomposition = cut(dendrogram, n_clusters)
        logger.info(f"Decomposed with {weights.label} into {n_clusters} clusters")
        return decomposition, dendrogram

    def complexity(self, monolith: Monolith, decomposition: Decomposition) -> ComplexityReport:
        """
        Score a decomposition of the monolith.

        Raises:
            UnassignedEntityError: If an accessed entity has no cluster
            PartitionError: If the decomposition does not match the entity universe
        """
        report = self._calculator(monolith).system_complexity(decomposition)
        assert_partition(decomposition, set(monolith.entities))
        return report

    def compare(self, a: Decomposition, b: Decomposition) -> MojoResult:
        mojo = self.config.mojo
        return compare(a, b, mojo.strategy, mojo.reference_is_b, mojo.enumeration_limit)

    def compare_sweeps(
        self,
        best: Dict[int, Decomposition],
        other_best: Dict[int, Decomposition],
        source: str,
        findings: Optional[List[str]] = None
    ) -> List[ComparisonRow]:
        """Per-N MoJoFM of one collection's best decompositions against another's."""
        mojo = self.config.mojo
        rows, unmatched = compare_best_per_n(
            best, other_best, source, mojo.strategy, mojo.reference_is_b, mojo.enumeration_limit
        )
        if unmatched and findings is not None:
            findings.append(f"Cluster counts {unmatched} appear in only one sweep; not compared")
        return rows

    # ---------------------------------------------------------------------
    # SWEEP
    # ---------------------------------------------------------------------

    def evened(self, monolith: Monolith, other: Monolith) -> Tuple[Monolith, List[str]]:
        """Restrict the monolith to the functionalities and entities shared with another collection."""
        names, entities = common_subset(monolith, other)
        findings: List[str] = []
        restricted = restrict_monolith(monolith, names, entities, findings)
        logger.info(
            f"Restricted to {len(restricted.functionalities)} common functionalities "
            f"and {len(restricted.entities)} common entities"
        )
        return restricted, findings

    def sweep(
        self,
        monolith: Monolith,
        expert: Optional[Decomposition] = None,
        source: str = "static",
        progress: bool = False,
        other_best: Optional[Dict[int, Decomposition]] = None,
        other_source: str = "dynamic"
    ) -> SweepOutcome:
        """
        Full protocol: sweep, best per N, regression, optional comparisons.

        With an expert, each best decomposition is scored against it. With
        other_best (the best decompositions of another collection), each N is
        scored against the other collection's best decomposition for that N,
        labelled "<source>-vs-<other_source>".

        Raises:
            SweepError: If the sweep cannot run
        """
        analysis = self.config.analysis
        records = DecompositionSweep(monolith, self.config).run(
            self.config.n_range, analysis.step, analysis.workers, progress
        )
        best = best_per_n(records)
        findings: List[str] = []

        regression = None
        try:
            regression = ols_fit(records, analysis.intercept)
        except AnalysisError as e:
            # a single cluster count makes N collinear with the weights
            logger.warning(f"Regression skipped: {e.message}")
            findings.append(f"Regression skipped: {e.message}")

        comparison: List[ComparisonRow] = []
        if expert is not None:
            mojo = self.config.mojo
            comparison = compare_with_reference(
                {n: record.decomposition for n, record in best.items()},
                expert,
                source,
                mojo.strategy,
                mojo.reference_is_b,
                mojo.enumeration_limit,
            )
        if other_best is not None:
            comparison.extend(self.compare_sweeps(
                {n: record.decomposition for n, record in best.items()},
                other_best,
                f"{source}-vs-{other_source}",
                findings,
            ))

        return SweepOutcome(
            monolith=monolith,
            records=records,
            best=best,
            regression=regression,
            comparison=comparison,
            findings=findings,
        )

    # ---------------------------------------------------------------------
    # WORKLOAD
    # ---------------------------------------------------------------------

    def generate(self, params: GenParams) -> Monolith:
        monolith = SyntheticMonolithGenerator(params).generate()
        report = validate_monolith(monolith)
        if not report.accepted:
            raise MikadoError(
                "Generated monolith failed validation",
                component="MikadoPipeline",
                context={"errors": [issue.code for issue in report.errors]}
            )
        return monolith
