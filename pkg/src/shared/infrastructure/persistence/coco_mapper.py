"""
CocoDataset entity to COCO JSON mapper.

Bidirectional mapping between the CocoDataset entity (domain layer) and the
validated COCO file DTO (infrastructure layer).

Architecture:
    - to_persistence(): CocoDataset -> CocoFileDTO
    - to_domain(): CocoFileDTO -> CocoDataset
    - Used by JsonCocoDatasetRepository for load/save

Round trip:
    Ids, boxes, categories, the info block and the pseudo-label extension
    fields survive to_domain(to_persistence(d)). Unknown per-record fields of
    a source file are not carried through the domain.
"""

from src.shared.domain.entities.coco_dataset import Category, CocoDataset, CocoImage
from src.shared.domain.exceptions import CrowdAnnotationError
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.bbox import BBox
from src.shared.infrastructure.persistence.coco_dtos import (
    CocoAnnotationDTO,
    CocoCategoryDTO,
    CocoFileDTO,
    CocoImageDTO,
)


def to_persistence(dataset: CocoDataset) -> CocoFileDTO:
    """
    Convert a CocoDataset to its file DTO.

    Annotations without an id get sequential ids after the largest existing
    one. The area field is written as w * h. Ground-truth annotations omit
    the score extension field.
    """
    next_id = max((a.annotation_id or 0 for a in dataset.annotations), default=0) + 1
    annotations: list[CocoAnnotationDTO] = []
    for annotation in dataset.annotations:
        annotation_id = annotation.annotation_id
        if annotation_id is None:
            annotation_id = next_id
            next_id += 1
        annotations.append(
            CocoAnnotationDTO(
                id=annotation_id,
                image_id=annotation.image_id,
                category_id=annotation.class_id,
                bbox=annotation.bbox.as_list(),
                iscrowd=0,
                area=annotation.bbox.area,
                is_pseudo=annotation.is_pseudo,
                score=annotation.score,
            )
        )

    return CocoFileDTO(
        info=dict(dataset.info),
        images=[
            CocoImageDTO(id=i.image_id, file_name=i.file_name, width=i.width, height=i.height)
            for i in dataset.images
        ],
        annotations=annotations,
        categories=[
            CocoCategoryDTO(id=c.category_id, name=c.name, supercategory=c.supercategory)
            for c in dataset.categories
        ],
    )


def to_domain(dto: CocoFileDTO, source_sha256: str | None = None) -> CocoDataset:
    """
    Convert a validated COCO file DTO to a CocoDataset.

    Args:
        dto: Parsed file
        source_sha256: Digest of the source bytes, recorded for provenance

    Raises:
        CrowdAnnotationError: On any annotation with iscrowd=1
        InvalidBoxError: On degenerate boxes (raised by BBox)
        UnknownCategoryError: On annotations whose category is not declared
    """
    annotations: list[Annotation] = []
    for record in dto.annotations:
        if record.iscrowd:
            raise CrowdAnnotationError(
                f"Annotation {record.id} on image {record.image_id} has iscrowd=1; "
                "crowd regions are not supported"
            )
        annotations.append(
            Annotation(
                image_id=record.image_id,
                bbox=BBox(*record.bbox),
                class_id=record.category_id,
                is_pseudo=record.is_pseudo,
                score=record.score,
                annotation_id=record.id,
            )
        )

    return CocoDataset(
        images=tuple(
            CocoImage(image_id=i.id, file_name=i.file_name, width=i.width, height=i.height)
            for i in dto.images
        ),
        annotations=tuple(annotations),
        categories=tuple(
            Category(category_id=c.id, name=c.name, supercategory=c.supercategory)
            for c in dto.categories
        ),
        info=dict(dto.info),
        source_sha256=source_sha256,
    )
