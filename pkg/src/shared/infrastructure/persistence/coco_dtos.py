"""
Pydantic models for the COCO annotation file layout.

These models validate the raw JSON before it reaches the domain. They are
kept separate from the domain entities so the file layout can carry
extension fields (is_pseudo, score) without leaking into CocoDataset.

Design Decisions:
    - Pydantic v2 (BaseModel, ConfigDict, Field)
    - extra="allow" on every record: COCO files in the wild carry
      segmentation, licenses and other fields we neither need nor drop
    - Box validation (w, h > 0) happens in the BBox value object, not here
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class CocoImageDTO(BaseModel):
    model_config = ConfigDict(extra="allow")

    id: int
    file_name: str = ""
    width: int
    height: int


class CocoCategoryDTO(BaseModel):
    model_config = ConfigDict(extra="allow")

    id: int
    name: str
    supercategory: str | None = None


class CocoAnnotationDTO(BaseModel):
    """
    One instance annotation.

    Attributes:
        bbox: [x, y, w, h] in pixels, top-left origin
        iscrowd: Crowd flag; crowd regions are rejected by the mapper
        is_pseudo: Extension field, True for CPG-generated labels
        score: Extension field, teacher confidence of a pseudo-label
    """

    model_config = ConfigDict(extra="allow")

    id: int | None = None
    image_id: int
    category_id: int
    bbox: list[float] = Field(..., min_length=4, max_length=4)
    iscrowd: int = 0
    area: float | None = None
    is_pseudo: bool = False
    score: float | None = None


class CocoFileDTO(BaseModel):
    model_config = ConfigDict(extra="allow")

    info: dict[str, Any] = Field(default_factory=dict)
    images: list[CocoImageDTO]
    annotations: list[CocoAnnotationDTO]
    categories: list[CocoCategoryDTO]
