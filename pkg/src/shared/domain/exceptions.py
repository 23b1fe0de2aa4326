"""
Domain exceptions shared by every bounded context.

Exceptions here belong to the shared kernel: geometry, detection records and
the COCO dataset model. Each bounded context defines its own exceptions in
its `domain/exceptions.py` and derives them from DomainError so the CLI layer
can map every business rule violation to the same exit status.

Exception List:
    - DomainError: Base class for every rule violation raised by the toolkit
    - InvalidBoxError: Degenerate or non-finite bounding box
    - InvalidDetectionError: Detection record outside its value ranges
    - InvalidQueryBatchError: Feature matrix and detections disagree
    - UnknownCategoryError: Class id or name absent from the category list
    - CrowdAnnotationError: COCO crowd annotations are not supported
    - MalformedRecordError: Unparseable line in a detection stream
    - InvalidScaleConfigError: Scale thresholds out of order
    - ConfigError: Run configuration violates its schema (names file:line and key)
    - LayerMismatchError: Layer responses disagree in count or shape
"""


class DomainError(Exception):
    """
    Base class for domain rule violations.

    Raised (through subclasses) by value objects, domain services and
    application handlers. Never raised for usage errors, which are the
    CLI parser's business.
    """


class InvalidBoxError(DomainError, ValueError):
    """
    Raised when a bounding box is degenerate (w <= 0 or h <= 0) or non-finite.

    Boxes are rejected at construction time instead of being clamped, so a
    corrupted annotation file fails loudly.

    Example:
        >>> BBox(0, 0, 0, 10)
        Traceback (most recent call last):
        InvalidBoxError: Box width and height must be positive, got w=0.0, h=10.0
    """


class InvalidDetectionError(DomainError, ValueError):
    """Raised when a detection's score, class id or query index is out of range."""


class InvalidQueryBatchError(DomainError, ValueError):
    """Raised when query features, detections and image features disagree in shape."""


class UnknownCategoryError(DomainError):
    """
    Raised when a class id or class name cannot be resolved against the
    categories of a dataset.

    Attributes:
        category: The unresolved id or name
    """

    def __init__(self, category: int | str, detail: str | None = None) -> None:
        self.category = category
        message = f"Unknown category: {category!r}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class CrowdAnnotationError(DomainError):
    """Raised when a COCO file contains iscrowd=1 annotations."""


class MalformedRecordError(DomainError):
    """
    Raised when a line of a detection stream cannot be parsed.

    Attributes:
        line_number: 1-based line number in the offending file
    """

    def __init__(self, line_number: int, detail: str) -> None:
        self.line_number = line_number
        super().__init__(f"line {line_number}: {detail}")


class InvalidScaleConfigError(DomainError, ValueError):
    """Raised when the scale thresholds do not satisfy 0 < tau_s < tau_m."""


class ConfigError(DomainError, ValueError):
    """
    Raised when a run configuration file violates its schema.

    Attributes:
        location: "file:line" of the offending entry, or the file alone
        key: Dotted key path (section.key), or the section name
    """

    def __init__(self, location: str, key: str, detail: str) -> None:
        self.location = location
        self.key = key
        super().__init__(f"{location}: {key}: {detail}")


class LayerMismatchError(DomainError, ValueError):
    """Raised when two sets of layer responses differ in layer count or array shape."""
