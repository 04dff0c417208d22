"""
Custom Exception Hierarchy for Mikado
Provides structured error handling with context preservation.
"""
from typing import Optional, Dict, Any


class MikadoError(Exception):
    """Base exception for all Mikado errors."""

    def __init__(
        self,
        message: str,
        component: Optional[str] = None,
        code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.component = component
        self.code = code
        self.context = context or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for structured logging."""
        return {
            "error_type": self.__class__.__name__,
            "code": self.code,
            "message": self.message,
            "component": self.component,
            "context": self.context
        }


# -------------------------------------------------------------------------
# CONFIGURATION ERRORS
# -------------------------------------------------------------------------

class ConfigurationError(MikadoError):
    """Raised when configuration is invalid or missing."""
    pass


# -------------------------------------------------------------------------
# INPUT ERRORS
# -------------------------------------------------------------------------

class InputError(MikadoError):
    """Base class for trace and decomposition file errors."""
    pass


class TraceParseError(InputError):
    """Raised when a file is not well-formed JSON."""

    def __init__(self, message: str, offset: int, **kwargs):
        super().__init__(message, code="PARSE", **kwargs)
        self.offset = offset
        self.context.setdefault("offset", offset)


class SchemaError(InputError):
    """Raised when well-formed input violates the file schema."""
    pass


class ExpansionLimitError(InputError):
    """Raised when compressed access blocks nest too deeply."""
    pass


class UnknownReferenceError(InputError):
    """Raised when a keep set names a functionality or entity that does not exist."""
    pass


# -------------------------------------------------------------------------
# SIMILARITY ERRORS
# -------------------------------------------------------------------------

class SimilarityError(MikadoError):
    """Base class for similarity measure errors."""
    pass


class UnknownEntityError(SimilarityError):
    """Raised when an entity is outside the monolith universe."""
    pass


class WeightError(SimilarityError):
    """Raised when a weight combination is invalid (WEIGHT_SUM / WEIGHT_GRID)."""
    pass


class DimensionMismatchError(SimilarityError):
    """Raised when matrices do not share an entity ordering."""
    pass


# -------------------------------------------------------------------------
# CLUSTERING ERRORS
# -------------------------------------------------------------------------

class ClusteringError(MikadoError):
    """Base class for clustering errors."""
    pass


class CutRangeError(ClusteringError):
    """Raised when a dendrogram cut asks for an impossible cluster count."""
    pass


# -------------------------------------------------------------------------
# DECOMPOSITION ERRORS
# -------------------------------------------------------------------------

class PartitionError(MikadoError):
    """Raised when a decomposition is not a partition of its universe."""
    pass


class UnassignedEntityError(PartitionError):
    """Raised when a trace touches an entity the decomposition does not assign."""
    pass


# -------------------------------------------------------------------------
# MOJO ERRORS
# -------------------------------------------------------------------------

class MojoError(MikadoError):
    """Base class for MoJo / MoJoFM errors."""
    pass


class UniverseMismatchError(MojoError):
    """Raised when two decompositions cover different entities."""
    pass


class EmptyIntersectionError(MojoError):
    """Raised when aligning decompositions leaves nothing in common."""
    pass


class UniverseTooLargeError(MojoError):
    """Raised when an exhaustive oracle is asked to search a large universe."""
    pass


class SingletonUniverseError(MojoError):
    """Raised when MoJoFM is undefined because the universe has one entity."""
    pass


# -------------------------------------------------------------------------
# ANALYSIS ERRORS
# -------------------------------------------------------------------------

class AnalysisError(MikadoError):
    """Base class for sweep and regression errors."""
    pass


class SweepError(AnalysisError):
    """Raised when a sweep cell fails or the sweep is misconfigured."""
    pass


class RankDeficientError(AnalysisError):
    """Raised when the regression design matrix is rank deficient."""
    pass


# -------------------------------------------------------------------------
# WORKLOAD ERRORS
# -------------------------------------------------------------------------

class GeneratorError(MikadoError):
    """Raised when synthetic workload parameters are invalid."""
    pass
