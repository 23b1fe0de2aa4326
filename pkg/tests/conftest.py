"""
Shared pytest fixtures for all tests.

This module provides reusable test fixtures for:
- Small hand-built COCO datasets (three categories, four images)
- Writing those datasets and detection streams to tmp_path
- An injector wired with default configuration
"""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
from injector import Injector

from src.main import build_injector
from src.shared.domain.entities.coco_dataset import Category, CocoDataset, CocoImage
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.bbox import BBox
from src.shared.infrastructure.config.run_config import RunConfig


@pytest.fixture
def categories() -> tuple[Category, ...]:
    return (
        Category(1, "person", "human"),
        Category(2, "car", "vehicle"),
        Category(3, "dog", "animal"),
    )


@pytest.fixture
def small_dataset(categories: tuple[Category, ...]) -> CocoDataset:
    """
    Four 640x480 images:
        - image 1: person + car
        - image 2: car only
        - image 3: dog + person
        - image 4: dog only

    Returns:
        CocoDataset: Fully annotated dataset with annotation ids 1..6
    """
    images = tuple(CocoImage(i, f"img_{i:03d}.jpg", 640, 480) for i in range(1, 5))
    annotations = (
        Annotation(1, BBox(10, 10, 50, 80), 1, annotation_id=1),
        Annotation(1, BBox(200, 150, 120, 60), 2, annotation_id=2),
        Annotation(2, BBox(300, 200, 100, 50), 2, annotation_id=3),
        Annotation(3, BBox(50, 60, 200, 150), 3, annotation_id=4),
        Annotation(3, BBox(400, 100, 40, 90), 1, annotation_id=5),
        Annotation(4, BBox(100, 100, 20, 20), 3, annotation_id=6),
    )
    return CocoDataset(images=images, annotations=annotations, categories=categories)


def coco_document(dataset: CocoDataset) -> dict[str, Any]:
    """Plain COCO JSON document for a dataset (ground truth only)."""
    return {
        "images": [
            {"id": i.image_id, "file_name": i.file_name, "width": i.width, "height": i.height}
            for i in dataset.images
        ],
        "annotations": [
            {
                "id": a.annotation_id,
                "image_id": a.image_id,
                "category_id": a.class_id,
                "bbox": a.bbox.as_list(),
                "area": a.bbox.area,
                "iscrowd": 0,
            }
            for a in dataset.annotations
        ],
        "categories": [
            {"id": c.category_id, "name": c.name, "supercategory": c.supercategory}
            for c in dataset.categories
        ],
    }


@pytest.fixture
def write_coco(tmp_path: Path) -> Callable[[CocoDataset, str], Path]:
    """
    Fixture returning a writer: (dataset, file name) -> path under tmp_path.

    Example:
        def test_something(write_coco, small_dataset):
            gt_path = write_coco(small_dataset, "gt.json")
    """

    def write(dataset: CocoDataset, name: str) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(coco_document(dataset)), encoding="utf-8")
        return path

    return write


@pytest.fixture
def injector() -> Injector:
    """Injector with every context module and an all-defaults RunConfig."""
    return build_injector(RunConfig())
