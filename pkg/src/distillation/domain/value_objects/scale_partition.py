from dataclasses import dataclass

from src.shared.domain.value_objects.scale import ScaleBucket


@dataclass(frozen=True)
class ScalePartition:
    """
    Query indices routed to each scale subspace.

    Buckets are disjoint and together cover every index of the partitioned
    batch. Empty buckets are legal.

    Attributes:
        small: Indices with area < tau_s, ascending
        medium: Indices with tau_s <= area < tau_m, ascending
        large: Indices with area >= tau_m, ascending
    """

    small: tuple[int, ...]
    medium: tuple[int, ...]
    large: tuple[int, ...]

    def indices(self, bucket: ScaleBucket) -> tuple[int, ...]:
        if bucket is ScaleBucket.SMALL:
            return self.small
        if bucket is ScaleBucket.MEDIUM:
            return self.medium
        return self.large

    def items(self) -> list[tuple[ScaleBucket, tuple[int, ...]]]:
        """(bucket, indices) pairs in Small, Medium, Large order."""
        return [(bucket, self.indices(bucket)) for bucket in ScaleBucket]

    @property
    def size(self) -> int:
        return len(self.small) + len(self.medium) + len(self.large)
