"""
Domain exceptions for the distillation bounded context.

Covers scale partitioning, topology distillation and response distillation.

Exception List:
    - DistillationError: Base class of this context
    - InvalidLabelsError: Per-query labels disagree with the query batch
    - DegenerateTopologyError: Fewer than two topology nodes in a bucket
    - TopologyMismatchError: Teacher and student topologies are not node-aligned
    - EmptyOldClassesError: Response distillation requested without old classes
    - InvalidDistillationConfigError: Temperature or weights out of range
"""

from src.shared.domain.exceptions import DomainError


class DistillationError(DomainError):
    """Base class for rule violations in the distillation context."""


class InvalidLabelsError(DistillationError, ValueError):
    """Raised when per-query labels do not match the batch they describe."""


class DegenerateTopologyError(DistillationError):
    """
    Raised when a relation topology is requested over fewer than two class prototypes.

    Loss computations skip such buckets before building a topology; it only
    escapes when relation_topology() is called directly.

    Attributes:
        node_count: Number of class prototypes that were available
    """

    def __init__(self, node_count: int) -> None:
        self.node_count = node_count
        super().__init__(f"Relation topology needs at least 2 nodes, got {node_count}")


class TopologyMismatchError(DistillationError):
    """Raised when teacher and student topologies of a bucket have different node ids."""


class EmptyOldClassesError(DistillationError, ValueError):
    """Raised when response distillation is asked to weight queries by an empty class set."""


class InvalidDistillationConfigError(DistillationError, ValueError):
    """Raised when a distillation temperature is not positive or a weight is negative."""
