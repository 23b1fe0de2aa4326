from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from typing import Any, Self

from src.shared.domain.exceptions import InvalidDetectionError, UnknownCategoryError
from src.shared.domain.value_objects.annotation import Annotation


@dataclass(frozen=True)
class CocoImage:
    """
    One image entry of a COCO file.

    Attributes:
        image_id: COCO image id
        file_name: Relative path as written in the source file
        width: Image width in pixels
        height: Image height in pixels
    """

    image_id: int
    file_name: str
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise InvalidDetectionError(
                f"Image {self.image_id} must have a positive size, "
                f"got {self.width}x{self.height}"
            )


@dataclass(frozen=True)
class Category:
    """COCO category entry (id, name, optional supercategory)."""

    category_id: int
    name: str
    supercategory: str | None = None


@dataclass(frozen=True)
class CocoDataset:
    """
    In-memory COCO dataset: images, instance annotations and categories.

    The dataset is immutable; operations that filter or extend it return a
    new instance. Annotations reference images and categories by id and are
    validated on construction.

    Invariants:
        - Image ids and category ids are unique
        - Every annotation points at a known image and a known category

    Attributes:
        images: Image entries, in source order
        annotations: Instance annotations, in source order
        categories: Full category list (never filtered by splits)
        info: Free-form "info" block of the COCO file
        source_sha256: SHA-256 of the file this dataset was read from, if any
    """

    images: tuple[CocoImage, ...]
    annotations: tuple[Annotation, ...]
    categories: tuple[Category, ...]
    info: Mapping[str, Any] = field(default_factory=dict)
    source_sha256: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        object.__setattr__(self, "annotations", tuple(self.annotations))
        object.__setattr__(self, "categories", tuple(self.categories))

        image_ids = [image.image_id for image in self.images]
        if len(set(image_ids)) != len(image_ids):
            raise InvalidDetectionError("Image ids must be unique")

        category_ids = [c.category_id for c in self.categories]
        if len(set(category_ids)) != len(category_ids):
            raise InvalidDetectionError("Category ids must be unique")

        known_images = set(image_ids)
        known_categories = set(category_ids)
        for annotation in self.annotations:
            if annotation.image_id not in known_images:
                raise InvalidDetectionError(
                    f"Annotation {annotation.annotation_id} references unknown image "
                    f"{annotation.image_id}"
                )
            if annotation.class_id not in known_categories:
                raise UnknownCategoryError(
                    annotation.class_id, f"annotation {annotation.annotation_id}"
                )

    @property
    def category_ids(self) -> tuple[int, ...]:
        return tuple(c.category_id for c in self.categories)

    def category(self, category_id: int) -> Category:
        for c in self.categories:
            if c.category_id == category_id:
                return c
        raise UnknownCategoryError(category_id)

    def image(self, image_id: int) -> CocoImage:
        for image in self.images:
            if image.image_id == image_id:
                return image
        raise InvalidDetectionError(f"Unknown image id {image_id}")

    def annotations_by_image(self) -> dict[int, list[Annotation]]:
        """Group annotations by image id; every image gets an entry."""
        grouped: dict[int, list[Annotation]] = {image.image_id: [] for image in self.images}
        for annotation in self.annotations:
            grouped[annotation.image_id].append(annotation)
        return grouped

    def classes_by_image(self) -> dict[int, set[int]]:
        grouped: dict[int, set[int]] = {image.image_id: set() for image in self.images}
        for annotation in self.annotations:
            grouped[annotation.image_id].add(annotation.class_id)
        return grouped

    def restricted(
        self,
        image_ids: Iterable[int],
        annotations: Iterable[Annotation],
        info: Mapping[str, Any] | None = None,
    ) -> Self:
        """
        Subset of this dataset keeping the given images and annotations.

        The category list is preserved in full.
        """
        keep = set(image_ids)
        return replace(
            self,
            images=tuple(image for image in self.images if image.image_id in keep),
            annotations=tuple(annotations),
            info=dict(self.info if info is None else info),
        )

    def with_additional_annotations(self, extra: Iterable[Annotation]) -> Self:
        """
        Append annotations, assigning fresh ids to those without one.

        Used to merge pseudo-labels into a ground-truth file.
        """
        used = [a.annotation_id for a in self.annotations if a.annotation_id is not None]
        next_id = max(used, default=0) + 1
        appended: list[Annotation] = []
        for annotation in extra:
            if annotation.annotation_id is None:
                annotation = replace(annotation, annotation_id=next_id)
                next_id += 1
            appended.append(annotation)
        return replace(self, annotations=self.annotations + tuple(appended))
