"""
Synthetic incremental detection world.

Every image is a set of decoder queries. Object queries carry a feature
drawn around the mean of their (class, scale bucket) pair and a reference
box jittered around the object; background queries carry a feature around
the origin and a random reference box. Boxes are sized so their area falls
strictly inside the intended bucket of the given ScaleConfig.

Training images of stage t annotate only the classes of task t. From stage
2 on, a cooccurrence_rate share of them also contains objects of earlier
tasks, left unannotated. Test images of each task are fully annotated and
contain only that task's classes.

All randomness is drawn from numpy Generators seeded with
(seed, stage, split, image_index), so images can be produced in any order
or in parallel without changing the result.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.benchmark.domain.value_objects.task_schedule import TaskSchedule
from src.detection_loss.domain.value_objects.target_set import TargetSet
from src.shared.domain.entities.coco_dataset import Category, CocoDataset, CocoImage
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.scale import ScaleBucket, ScaleConfig
from src.simulation.domain.value_objects.world_config import WorldConfig

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

TRAIN_SPLIT = 0
TEST_SPLIT = 1
_CENTER_STREAM = 7
_MAX_PLACEMENT_TRIES = 100
_BUCKETS = (ScaleBucket.SMALL, ScaleBucket.MEDIUM, ScaleBucket.LARGE)


@dataclass(frozen=True)
class SimObject:
    """
    One object of a synthetic image.

    Attributes:
        class_id: Object class
        bbox: Box in pixels
        bucket: Scale bucket the box area lies in
        query_index: Query that looks at the object
        annotated: False for old-class objects in incremental training images
    """

    class_id: int
    bbox: BBox
    bucket: ScaleBucket
    query_index: int
    annotated: bool = True


@dataclass(frozen=True, eq=False)
class SimImage:
    """
    Attributes:
        image_id: Unique across all stages and splits
        size: Square image side in pixels
        features: Q x D query features
        reference_boxes: Q x 4 normalized (cx, cy, w, h) query anchors
        image_map: S x S x D global feature map
        objects: Objects in the image
    """

    image_id: int
    size: int
    features: FloatArray
    reference_boxes: FloatArray
    image_map: FloatArray
    objects: tuple[SimObject, ...]

    @property
    def num_queries(self) -> int:
        return int(self.features.shape[0])

    def annotations(self, annotated_only: bool = True) -> list[Annotation]:
        return [
            Annotation(image_id=self.image_id, bbox=o.bbox, class_id=o.class_id)
            for o in self.objects
            if o.annotated or not annotated_only
        ]

    def targets(self) -> TargetSet:
        return TargetSet.from_annotations(self.annotations(), self.size, self.size)

    @property
    def classes(self) -> frozenset[int]:
        return frozenset(o.class_id for o in self.objects)


@dataclass(frozen=True, eq=False)
class World:
    """
    Attributes:
        config: Generating configuration
        centers: K x D class centers
        means: K x 3 x D (class, bucket) feature means, buckets small/medium/large
        train: Per stage, the training images
        test: Per task, the fully annotated test images
    """

    config: WorldConfig
    centers: FloatArray
    means: FloatArray
    train: tuple[tuple[SimImage, ...], ...]
    test: tuple[tuple[SimImage, ...], ...]

    @property
    def schedule(self) -> TaskSchedule:
        return TaskSchedule.of(
            *(self.config.task_classes(t) for t in range(1, self.config.num_tasks + 1)),
            name="synthetic",
        )

    @property
    def categories(self) -> tuple[Category, ...]:
        return tuple(Category(c, f"class_{c}") for c in range(self.config.num_classes))

    def _dataset(self, images: list[SimImage], annotated_only: bool) -> CocoDataset:
        annotations: list[Annotation] = []
        for image in images:
            annotations.extend(image.annotations(annotated_only))
        numbered = [
            Annotation(a.image_id, a.bbox, a.class_id, annotation_id=index)
            for index, a in enumerate(annotations, start=1)
        ]
        return CocoDataset(
            images=tuple(
                CocoImage(i.image_id, f"{i.image_id}.png", i.size, i.size) for i in images
            ),
            annotations=tuple(numbered),
            categories=self.categories,
        )

    def eval_dataset(self, stage: int) -> CocoDataset:
        """Test images of tasks 1..stage with every object annotated."""
        images = [image for task in self.test[:stage] for image in task]
        return self._dataset(images, annotated_only=False)

    def training_dataset(self, stage: int, annotated_only: bool = True) -> CocoDataset:
        """Training images of a stage; annotated_only=False reveals the old objects."""
        return self._dataset(list(self.train[stage - 1]), annotated_only)


def _unit(rng: np.random.Generator, dim: int) -> FloatArray:
    v = rng.normal(size=dim)
    return np.asarray(v / np.linalg.norm(v), dtype=np.float64)


def _class_means(cfg: WorldConfig) -> tuple[FloatArray, FloatArray]:
    rng = np.random.default_rng([cfg.seed, _CENTER_STREAM])
    k, d = cfg.num_classes, cfg.feature_dim
    centers = np.zeros((k, d), dtype=np.float64)
    means = np.zeros((k, len(_BUCKETS), d), dtype=np.float64)
    offset = cfg.scale_spread * cfg.class_radius
    inseparable = False

    for task in range(1, cfg.num_tasks + 1):
        old = [c for t in range(1, task) for c in cfg.task_classes(t)]
        for position, c in enumerate(cfg.task_classes(task)):
            placed = False
            for _ in range(_MAX_PLACEMENT_TRIES):
                fresh = cfg.class_radius * _unit(rng, d)
                if old:
                    paired = centers[old[position % len(old)]]
                    blend = (
                        math.sqrt(cfg.task_similarity) * paired
                        + math.sqrt(1.0 - cfg.task_similarity) * fresh
                    )
                    center = cfg.class_radius * blend / np.linalg.norm(blend)
                else:
                    center = fresh
                candidate = center + offset * np.stack([_unit(rng, d) for _ in _BUCKETS])
                if c == 0:
                    placed = True
                else:
                    previous = means[:c].reshape(-1, d)
                    gaps = np.linalg.norm(candidate[:, None, :] - previous[None], axis=2)
                    placed = bool(gaps.min() >= cfg.margin)
                if placed:
                    break
            inseparable = inseparable or not placed
            centers[c] = center
            means[c] = candidate

    if inseparable:
        logger.warning("Could not place every class mean %.3f apart", cfg.margin)
    return centers, means


def _side_range(bucket: ScaleBucket, scale: ScaleConfig, image_size: int) -> tuple[float, float]:
    root_s, root_m = math.sqrt(scale.tau_s), math.sqrt(scale.tau_m)
    if bucket is ScaleBucket.SMALL:
        return 0.5 * root_s, 0.875 * root_s
    if bucket is ScaleBucket.MEDIUM:
        return 1.25 * root_s, 0.85 * root_m
    upper = max(1.1 * root_m, min(2.0 * root_m, 0.75 * image_size))
    return 1.05 * root_m, upper


def _random_box(
    rng: np.random.Generator, bucket: ScaleBucket, scale: ScaleConfig, size: int
) -> BBox:
    low, high = _side_range(bucket, scale, size)
    side = rng.uniform(low, high)
    aspect = math.exp(rng.uniform(math.log(0.8), math.log(1.25)))
    w = min(side * aspect, size - 1.0)
    h = side * side / w
    x = rng.uniform(0.0, size - w)
    y = rng.uniform(0.0, max(size - h, 0.0))
    return BBox(x, y, w, h)


def _reference_box(rng: np.random.Generator, bbox: BBox, size: int, jitter: float) -> FloatArray:
    cx, cy, w, h = bbox.to_normalized_cxcywh(size, size)
    return np.array(
        [
            cx + jitter * w * rng.normal(),
            cy + jitter * h * rng.normal(),
            w * math.exp(jitter * rng.normal()),
            h * math.exp(jitter * rng.normal()),
        ],
        dtype=np.float64,
    )


def _is_cooccurring(index: int, count: int, rate: float) -> bool:
    """Spreads exactly round(rate * count) co-occurring images evenly over the stage."""
    wanted = round(rate * count)
    return (index + 1) * wanted // count > index * wanted // count


def generate_image(
    cfg: WorldConfig,
    means: FloatArray,
    scale: ScaleConfig,
    stage: int,
    split: int,
    index: int,
) -> SimImage:
    """
    Draw one image.

    Args:
        stage: 1-based stage (training) or task (test)
        split: TRAIN_SPLIT or TEST_SPLIT
        index: Image index within the stage and split
    """
    rng = np.random.default_rng([cfg.seed, stage, split, index])
    q, d, size = cfg.queries_per_image, cfg.feature_dim, cfg.image_size
    current = cfg.task_classes(stage)
    old = [c for t in range(1, stage) for c in cfg.task_classes(t)]

    count = int(rng.integers(1, cfg.max_objects_per_image + 1))
    mixed = (
        split == TRAIN_SPLIT
        and bool(old)
        and cfg.max_objects_per_image >= 2
        and _is_cooccurring(index, cfg.images_per_stage, cfg.cooccurrence_rate)
    )
    if mixed:
        count = max(count, 2)
        num_old = int(rng.integers(1, count))
        classes = [int(rng.choice(old)) for _ in range(num_old)]
        classes += [int(rng.choice(current)) for _ in range(count - num_old)]
    else:
        classes = [int(rng.choice(current)) for _ in range(count)]

    slots = rng.permutation(q)
    features = cfg.noise * rng.normal(size=(q, d))
    reference = np.zeros((q, 4), dtype=np.float64)
    objects: list[SimObject] = []
    for j, class_id in enumerate(classes):
        bucket_index = int(rng.integers(0, len(_BUCKETS)))
        bucket = _BUCKETS[bucket_index]
        bbox = _random_box(rng, bucket, scale, size)
        slot = int(slots[j])
        features[slot] += means[class_id, bucket_index]
        reference[slot] = _reference_box(rng, bbox, size, cfg.box_jitter)
        objects.append(
            SimObject(
                class_id=class_id,
                bbox=bbox,
                bucket=bucket,
                query_index=slot,
                annotated=split == TEST_SPLIT or class_id in current,
            )
        )

    for slot in slots[len(classes) :]:
        bucket = _BUCKETS[int(rng.integers(0, len(_BUCKETS)))]
        reference[int(slot)] = np.array(
            _random_box(rng, bucket, scale, size).to_normalized_cxcywh(size, size)
        )

    s = cfg.image_feature_size
    image_map = cfg.noise * rng.normal(size=(s, s, d))
    image_id = (2 * stage + split) * 100_000 + index
    return SimImage(
        image_id=image_id,
        size=size,
        features=features,
        reference_boxes=reference,
        image_map=image_map,
        objects=tuple(sorted(objects, key=lambda o: o.query_index)),
    )


def generate_world(cfg: WorldConfig, scale: ScaleConfig | None = None) -> World:
    """
    Build every stage's training images and every task's test images.

    Logs a warning when noise >= margin, since classes may then overlap.
    """
    scale = scale or ScaleConfig()
    if cfg.margin <= cfg.noise:
        logger.warning(
            "World margin %.3f does not exceed noise %.3f: classes may be inseparable",
            cfg.margin,
            cfg.noise,
        )
    centers, means = _class_means(cfg)
    train = tuple(
        tuple(
            generate_image(cfg, means, scale, stage, TRAIN_SPLIT, i)
            for i in range(cfg.images_per_stage)
        )
        for stage in range(1, cfg.num_tasks + 1)
    )
    test = tuple(
        tuple(
            generate_image(cfg, means, scale, task, TEST_SPLIT, i)
            for i in range(cfg.eval_images_per_task)
        )
        for task in range(1, cfg.num_tasks + 1)
    )
    logger.debug(
        "Generated world: %d tasks, %d classes, %d training and %d test images",
        cfg.num_tasks,
        cfg.num_classes,
        sum(len(s) for s in train),
        sum(len(t) for t in test),
    )
    return World(config=cfg, centers=centers, means=means, train=train, test=test)
