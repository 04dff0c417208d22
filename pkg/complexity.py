"""
Decomposition Metrics
Local transactions, remote invocations and the redesign complexity of a
decomposition, normalized by the singleton-decomposition complexity.
"""
import logging
from collections import OrderedDict, defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from models import (
    Access,
    AccessMode,
    ComplexityReport,
    Decomposition,
    Functionality,
    FunctionalityComplexity,
    Monolith,
    Trace,
    TraceAggregation,
)
from exceptions import UnassignedEntityError

logger = logging.getLogger("MikadoComplexity")


@dataclass(frozen=True)
class LocalTransaction:
    """A maximal run of consecutive accesses inside one cluster."""
    functionality: str
    trace_id: int
    cluster: str
    accesses: Tuple[Access, ...]


@dataclass(frozen=True)
class TracePartition:
    local_transactions: Tuple[LocalTransaction, ...]
    remote_invocations: Tuple[Tuple[Access, Access], ...]


def _unassigned(entities, decomposition: Decomposition) -> List[int]:
    return sorted(e for e in entities if decomposition.cluster_of(e) is None)


def partition_trace(trace: Trace, decomposition: Decomposition, functionality: str = "") -> TracePartition:
    """
    Split a trace at every adjacent pair whose entities lie in different clusters.

    Raises:
        UnassignedEntityError: If the trace touches an entity outside the decomposition
    """
    missing = _unassigned(trace.entities, decomposition)
    if missing:
        raise UnassignedEntityError(
            f"Entities {missing} are not assigned to any cluster",
            component="Complexity",
            code="UNASSIGNED_ENTITY",
            context={"entities": missing, "functionality": functionality, "trace": trace.id}
        )

    local: List[LocalTransaction] = []
    remote: List[Tuple[Access, Access]] = []
    run: List[Access] = [trace.accesses[0]]
    cluster = decomposition.cluster_of(trace.accesses[0].entity)

    for before, access in zip(trace.accesses, trace.accesses[1:]):
        current = decomposition.cluster_of(access.entity)
        if current != cluster:
            local.append(LocalTransaction(functionality, trace.id, cluster, tuple(run)))
            remote.append((before, access))
            run = []
            cluster = current
        run.append(access)
    local.append(LocalTransaction(functionality, trace.id, cluster, tuple(run)))

    return TracePartition(local_transactions=tuple(local), remote_invocations=tuple(remote))


def prune(lt: LocalTransaction) -> FrozenSet[Access]:
    """
    Externally visible accesses of a local transaction: at most one read and
    one write per entity; a read survives next to a write only if it happens
    before the first write.
    """
    read_first: Set[int] = set()
    read: Set[int] = set()
    written: Set[int] = set()
    for access in lt.accesses:
        if access.mode is AccessMode.WRITE:
            written.add(access.entity)
        else:
            if access.entity not in written:
                read_first.add(access.entity)
            read.add(access.entity)

    pruned = {Access(entity=e, mode=AccessMode.WRITE) for e in written}
    pruned.update(
        Access(entity=e, mode=AccessMode.READ)
        for e in read
        if e not in written or e in read_first
    )
    return frozenset(pruned)


def is_distributed(functionality: Functionality, decomposition: Decomposition) -> bool:
    """True iff any trace splits into two or more local transactions."""
    return any(
        len(partition_trace(trace, decomposition, functionality.name).local_transactions) > 1
        for trace in functionality.traces
    )


@dataclass(frozen=True)
class _FunctionalityProfile:
    partitions: Tuple[TracePartition, ...]
    distributed: bool
    pruned_union: FrozenSet[Access]


class ComplexityCalculator:
    """
    Computes redesign complexity for decompositions of one monolith.

    Distribution flags and pruned access sets are computed once per
    decomposition and shared by all functionalities; maxComplexity is cached.
    """

    def __init__(
        self,
        monolith: Monolith,
        aggregation: TraceAggregation = TraceAggregation.MEAN,
        strict_summation: bool = False
    ):
        """
        Initialize the calculator.

        Args:
            monolith: The monolith whose functionalities are scored
            aggregation: How per-trace complexities combine (MEAN or MAX)
            strict_summation: Score single-transaction traces with the literal sum
        """
        self.monolith = monolith
        self.aggregation = aggregation
        self.strict_summation = strict_summation
        self._max_complexity: Optional[float] = None

    def _profiles(self, decomposition: Decomposition) -> Dict[str, _FunctionalityProfile]:
        missing = _unassigned(self.monolith.accessed_entities(), decomposition)
        if missing:
            raise UnassignedEntityError(
                f"Entities {missing} are not assigned to any cluster",
                component="Complexity",
                code="UNASSIGNED_ENTITY",
                context={"entities": missing}
            )

        profiles = {}
        for name in self.monolith.functionality_names:
            functionality = self.monolith.functionalities[name]
            partitions = tuple(partition_trace(t, decomposition, name) for t in functionality.traces)
            pruned: Set[Access] = set()
            for partition in partitions:
                for lt in partition.local_transactions:
                    pruned |= prune(lt)
            profiles[name] = _FunctionalityProfile(
                partitions=partitions,
                distributed=any(len(p.local_transactions) > 1 for p in partitions),
                pruned_union=frozenset(pruned),
            )
        return profiles

    @staticmethod
    def _distributed_index(profiles: Dict[str, _FunctionalityProfile]) -> Dict[Access, Set[str]]:
        """Access -> distributed functionalities whose pruned accesses contain it."""
        index: Dict[Access, Set[str]] = defaultdict(set)
        for name, profile in profiles.items():
            if profile.distributed:
                for access in profile.pruned_union:
                    index[access].add(name)
        return index

    def _trace_complexity(self, name: str, partition: TracePartition, index: Dict[Access, Set[str]]) -> int:
        if len(partition.local_transactions) == 1 and not self.strict_summation:
            return 0
        total = 0
        for lt in partition.local_transactions:
            others: Set[str] = set()
            for access in prune(lt):
                others |= index.get(access.inverse(), set())
            others.discard(name)
            total += len(others)
        return total

    def _aggregate(self, values: List[int]) -> float:
        if not values:
            return 0.0
        if self.aggregation is TraceAggregation.MAX:
            return float(max(values))
        return sum(values) / len(values)

    def _score(self, decomposition: Decomposition) -> Tuple[Dict[str, float], List[FunctionalityComplexity]]:
        profiles = self._profiles(decomposition)
        index = self._distributed_index(profiles)
        per_functionality: Dict[str, float] = {}
        details: List[FunctionalityComplexity] = []
        for name, profile in profiles.items():
            value = self._aggregate([
                self._trace_complexity(name, partition, index) for partition in profile.partitions
            ])
            per_functionality[name] = value
            lts = [len(p.local_transactions) for p in profile.partitions]
            details.append(FunctionalityComplexity(
                name=name,
                traces=len(lts),
                mean_local_transactions=sum(lts) / len(lts) if lts else 0.0,
                distributed=profile.distributed,
                complexity=value,
            ))
        return per_functionality, details

    def functionality_complexity(self, name: str, decomposition: Decomposition) -> float:
        """Complexity of one functionality under a decomposition."""
        per_functionality, _ = self._score(decomposition)
        return per_functionality[name]

    def singleton_decomposition(self) -> Decomposition:
        return Decomposition(clusters={f"e{e}": frozenset([e]) for e in self.monolith.entity_ids})

    @property
    def max_complexity(self) -> float:
        """Total complexity of the decomposition with one entity per cluster."""
        if self._max_complexity is None:
            per_functionality, _ = self._score(self.singleton_decomposition())
            self._max_complexity = sum(per_functionality.values())
            logger.debug(f"maxComplexity = {self._max_complexity}")
        return self._max_complexity

    def system_complexity(self, decomposition: Decomposition) -> ComplexityReport:
        """
        Total and uniform complexity of a decomposition.

        A uniform value above 1 is reported as a finding, never clamped.
        """
        per_functionality, details = self._score(decomposition)
        total = sum(per_functionality.values())
        max_complexity = self.max_complexity
        uniform = total / max_complexity if max_complexity > 0 else 0.0

        findings = []
        if uniform > 1.0:
            message = (
                f"Uniform complexity {uniform:.6f} exceeds 1: total {total} "
                f"above maxComplexity {max_complexity}"
            )
            logger.warning(message)
            findings.append(message)

        return ComplexityReport(
            per_functionality=per_functionality,
            details=details,
            total=total,
            uniform=uniform,
            max_complexity=max_complexity,
            findings=findings,
        )


_CACHE_SIZE = 8
_calculators: "OrderedDict[Tuple[int, TraceAggregation, bool], ComplexityCalculator]" = OrderedDict()


def get_calculator(
    monolith: Monolith,
    aggregation: TraceAggregation = TraceAggregation.MEAN,
    strict_summation: bool = False
) -> ComplexityCalculator:
    """Calculator for a monolith, reused so maxComplexity is computed once."""
    key = (id(monolith), aggregation, strict_summation)
    calculator = _calculators.get(key)
    # the cached calculator keeps its monolith alive, so the id cannot be recycled
    if calculator is None or calculator.monolith is not monolith:
        calculator = ComplexityCalculator(monolith, aggregation, strict_summation)
        _calculators[key] = calculator
        if len(_calculators) > _CACHE_SIZE:
            _calculators.popitem(last=False)
    else:
        _calculators.move_to_end(key)
    return calculator


def functionality_complexity(
    functionality: Functionality,
    decomposition: Decomposition,
    monolith: Monolith,
    aggregation: TraceAggregation = TraceAggregation.MEAN,
    strict_summation: bool = False
) -> float:
    return get_calculator(monolith, aggregation, strict_summation).functionality_complexity(
        functionality.name, decomposition
    )


def system_complexity(
    monolith: Monolith,
    decomposition: Decomposition,
    aggregation: TraceAggregation = TraceAggregation.MEAN,
    strict_summation: bool = False
) -> ComplexityReport:
    return get_calculator(monolith, aggregation, strict_summation).system_complexity(decomposition)


def max_complexity(
    monolith: Monolith,
    aggregation: TraceAggregation = TraceAggregation.MEAN,
    strict_summation: bool = False
) -> float:
    return get_calculator(monolith, aggregation, strict_summation).max_complexity
