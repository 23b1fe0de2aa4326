import math
from dataclasses import dataclass
from typing import Self

from src.shared.domain.exceptions import InvalidBoxError


@dataclass(frozen=True)
class BBox:
    """
    Axis-aligned bounding box value object, absolute top-left form.

    Coordinates are pixels, matching COCO annotation files. The normalized
    center form (cx, cy, w, h) / image size exists only for regression
    losses and is produced by to_normalized_cxcywh().

    Attributes:
        x: Left edge (pixels)
        y: Top edge (pixels)
        w: Width (pixels, > 0)
        h: Height (pixels, > 0)

    Raises:
        InvalidBoxError: If a coordinate is non-finite or w/h is not positive
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        values = (self.x, self.y, self.w, self.h)
        try:
            converted = tuple(float(v) for v in values)
        except (TypeError, ValueError) as e:
            raise InvalidBoxError(f"Box coordinates must be numbers, got {values}") from e

        if not all(math.isfinite(v) for v in converted):
            raise InvalidBoxError(f"Box coordinates must be finite, got {converted}")

        if converted[2] <= 0 or converted[3] <= 0:
            raise InvalidBoxError(
                f"Box width and height must be positive, got w={converted[2]}, h={converted[3]}"
            )

        for name, value in zip(("x", "y", "w", "h"), converted, strict=True):
            object.__setattr__(self, name, value)

    @classmethod
    def from_xyxy(cls, x1: float, y1: float, x2: float, y2: float) -> Self:
        return cls(x=x1, y=y1, w=x2 - x1, h=y2 - y1)

    @classmethod
    def from_normalized_cxcywh(
        cls, cx: float, cy: float, w: float, h: float, width: float, height: float
    ) -> Self:
        """Inverse of to_normalized_cxcywh() for an image of the given size."""
        return cls(
            x=(cx - w / 2.0) * width,
            y=(cy - h / 2.0) * height,
            w=w * width,
            h=h * height,
        )

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    def to_xyxy(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.x2, self.y2)

    def to_normalized_cxcywh(
        self, width: float, height: float
    ) -> tuple[float, float, float, float]:
        """
        Convert to the scale-free center form used inside regression losses.

        Args:
            width: Image width in pixels
            height: Image height in pixels

        Returns:
            (cx, cy, w, h), each divided by the matching image dimension
        """
        return (
            (self.x + self.w / 2.0) / width,
            (self.y + self.h / 2.0) / height,
            self.w / width,
            self.h / height,
        )

    def scaled(self, factor: float) -> "BBox":
        """Scale the box about the image origin (positions and sizes)."""
        return BBox(self.x * factor, self.y * factor, self.w * factor, self.h * factor)

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.w, self.h]
