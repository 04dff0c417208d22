"""
Pydantic Models for Data Validation
Defines all data structures used throughout the Mikado toolkit.
"""
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator


# -------------------------------------------------------------------------
# ENUMS
# -------------------------------------------------------------------------

class AccessMode(str, Enum):
    """Access modes of a domain entity."""
    READ = "R"
    WRITE = "W"

    @property
    def inverse(self) -> "AccessMode":
        return AccessMode.WRITE if self is AccessMode.READ else AccessMode.READ


class DistanceMode(str, Enum):
    """How a similarity matrix becomes a clustering distance."""
    ROW_EUCLIDEAN = "ROW_EUCLIDEAN"
    ONE_MINUS_SYM = "ONE_MINUS_SYM"


class Linkage(str, Enum):
    """Agglomerative linkage criteria."""
    AVERAGE = "AVERAGE"
    SINGLE = "SINGLE"
    COMPLETE = "COMPLETE"


class TraceAggregation(str, Enum):
    """How per-trace complexities become a functionality complexity."""
    MEAN = "MEAN"
    MAX = "MAX"


class InterceptMode(str, Enum):
    """Constant-term handling of the complexity regression."""
    NONE = "NONE"
    PSEUDOINVERSE = "PSEUDOINVERSE"


class AlignStrategy(str, Enum):
    """How two decompositions over different entities are made comparable."""
    BIGGEST_CLUSTER = "BIGGEST_CLUSTER"
    DROP_UNCOMMON = "DROP_UNCOMMON"


# -------------------------------------------------------------------------
# MONOLITH MODELS
# -------------------------------------------------------------------------

class Access(BaseModel):
    """A single read or write of a domain entity."""
    model_config = ConfigDict(frozen=True)

    entity: int
    mode: AccessMode

    def inverse(self) -> "Access":
        return Access(entity=self.entity, mode=self.mode.inverse)

    def __str__(self) -> str:
        return f"(e{self.entity},{self.mode.value})"


class Trace(BaseModel):
    """One execution of a functionality: accesses in precedence order."""
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    accesses: Tuple[Access, ...] = Field(min_length=1)

    @property
    def entities(self) -> FrozenSet[int]:
        return frozenset(a.entity for a in self.accesses)


class Functionality(BaseModel):
    """A controller and the traces collected for it."""
    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    traces: Tuple[Trace, ...] = ()


class Monolith(BaseModel):
    """The (F, E, G) triple: functionalities, entities and their call graphs."""
    model_config = ConfigDict(frozen=True)

    functionalities: Dict[str, Functionality] = Field(default_factory=dict)
    entities: Dict[int, Optional[str]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_references(self) -> "Monolith":
        for key, functionality in self.functionalities.items():
            if key != functionality.name:
                raise ValueError(f"Functionality key {key!r} does not match name {functionality.name!r}")
            for trace in functionality.traces:
                missing = trace.entities - self.entities.keys()
                if missing:
                    raise ValueError(
                        f"Trace {trace.id} of {key!r} accesses undeclared entities {sorted(missing)}"
                    )
        return self

    @property
    def entity_ids(self) -> List[int]:
        """Entity ids in ascending order; the canonical matrix ordering."""
        return sorted(self.entities)

    @property
    def functionality_names(self) -> List[str]:
        return sorted(self.functionalities)

    def accessed_entities(self) -> FrozenSet[int]:
        return frozenset(
            entity
            for functionality in self.functionalities.values()
            for trace in functionality.traces
            for entity in trace.entities
        )

    def entity_label(self, entity: int) -> str:
        name = self.entities.get(entity)
        return name if name else str(entity)


class Decomposition(BaseModel):
    """A partition of domain entities into named clusters."""
    model_config = ConfigDict(frozen=True)

    clusters: Dict[str, FrozenSet[int]]
    _assignment: Dict[int, str] = PrivateAttr(default_factory=dict)

    @field_validator("clusters")
    @classmethod
    def validate_clusters(cls, v: Dict[str, FrozenSet[int]]) -> Dict[str, FrozenSet[int]]:
        seen: Dict[int, str] = {}
        for name, members in v.items():
            if not members:
                raise ValueError(f"Cluster {name!r} is empty")
            for entity in members:
                if entity in seen:
                    raise ValueError(
                        f"Entity {entity} assigned to both {seen[entity]!r} and {name!r}"
                    )
                seen[entity] = name
        return v

    @classmethod
    def from_groups(cls, groups) -> "Decomposition":
        """Name groups c0..c{k-1} by ascending smallest member."""
        ordered = sorted((frozenset(g) for g in groups), key=min)
        return cls(clusters={f"c{i}": g for i, g in enumerate(ordered)})

    def model_post_init(self, __context) -> None:
        self._assignment = {
            entity: name for name, members in self.clusters.items() for entity in members
        }

    @property
    def assignment(self) -> Dict[int, str]:
        return self._assignment

    @property
    def universe(self) -> FrozenSet[int]:
        return frozenset(self.assignment)

    def cluster_of(self, entity: int) -> Optional[str]:
        return self.assignment.get(entity)

    def as_partition(self) -> FrozenSet[FrozenSet[int]]:
        """The cluster sets without names, for partition equality."""
        return frozenset(self.clusters.values())

    def same_partition(self, other: "Decomposition") -> bool:
        return self.as_partition() == other.as_partition()

    def largest_cluster(self) -> str:
        """Largest cluster name; ties go to the lexicographically smallest name."""
        return min(self.clusters, key=lambda name: (-len(self.clusters[name]), name))


# -------------------------------------------------------------------------
# VALIDATION MODELS
# -------------------------------------------------------------------------

class ValidationIssue(BaseModel):
    """A single validation finding."""
    code: str
    message: str
    location: str = ""


class ValidationReport(BaseModel):
    """Findings of monolith validation; empty errors means accepted."""
    errors: List[ValidationIssue] = Field(default_factory=list)
    warnings: List[ValidationIssue] = Field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.errors


class CoverageReport(BaseModel):
    """How much of a reference collection another collection observed."""
    functionalities_covered_pct: float
    entities_covered_pct: float
    avg_entities_per_functionality_pct: float
    common_functionalities: int
    reference_functionalities: int
    reference_entities: int


# -------------------------------------------------------------------------
# SIMILARITY MODELS
# -------------------------------------------------------------------------

class Weights(BaseModel):
    """Percentage weights of the four similarity measures."""
    model_config = ConfigDict(frozen=True)

    access: int
    write: int
    read: int
    sequence: int

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.access, self.write, self.read, self.sequence)

    @classmethod
    def from_tuple(cls, values) -> "Weights":
        access, write, read, sequence = values
        return cls(access=access, write=write, read=read, sequence=sequence)

    @property
    def label(self) -> str:
        return f"A{self.access}-W{self.write}-R{self.read}-S{self.sequence}"


# -------------------------------------------------------------------------
# METRIC MODELS
# -------------------------------------------------------------------------

class FunctionalityComplexity(BaseModel):
    """Per-functionality line of a complexity report."""
    name: str
    traces: int
    mean_local_transactions: float
    distributed: bool
    complexity: float


class ComplexityReport(BaseModel):
    """Redesign complexity of a decomposition."""
    per_functionality: Dict[str, float]
    details: List[FunctionalityComplexity] = Field(default_factory=list)
    total: float
    uniform: float
    max_complexity: float
    findings: List[str] = Field(default_factory=list)


class MojoResult(BaseModel):
    """MoJo distance of a decomposition to a reference."""
    mno: int = Field(ge=0)
    max_mno: int = Field(ge=1)
    mojo_fm: float = Field(ge=0.0, le=100.0)
    provenance: str = "enumeration"


class ComparisonRow(BaseModel):
    """One row of a comparison against a reference decomposition."""
    n_clusters: int
    source: str
    mno: int
    max_mno: int
    mojo_fm: float


# -------------------------------------------------------------------------
# ANALYSIS MODELS
# -------------------------------------------------------------------------

class SweepRecord(BaseModel):
    """Uniform complexity of one (weights, N) cell of a sweep."""
    model_config = ConfigDict(frozen=True)

    weights: Weights
    n_clusters: int = Field(ge=1)
    uniform_complexity: float
    decomposition: Optional[Decomposition] = None


class RegressionReport(BaseModel):
    """Ordinary least squares fit of uniform complexity."""
    intercept: InterceptMode
    coefficients: Dict[str, float]
    standard_errors: Dict[str, float]
    confidence_intervals_95: Dict[str, Tuple[float, float]]
    r_squared: float = Field(ge=0.0, le=1.0)
    condition_number: float
    sample_size: int
    degrees_of_freedom: int
    f_statistic: float
    f_p_value: float


class GenParams(BaseModel):
    """Parameters of the synthetic monolith generator."""
    seed: int = Field(ge=0, lt=2 ** 64)
    n_entities: int = Field(ge=0)
    n_functionalities: int = Field(ge=1)
    traces_per_functionality: int = Field(ge=1)
    max_trace_length: int = Field(ge=1)
    write_ratio: float = Field(ge=0.0, le=1.0)
    clusteredness_bias: float = Field(ge=0.0, le=1.0)
    n_families: int = Field(default=1, ge=1)


class Manifest(BaseModel):
    """Provenance of a CLI run's artifacts."""
    tool_version: str
    command: str
    config: Dict[str, object]
    inputs: Dict[str, str]
    artifacts: Dict[str, str]
