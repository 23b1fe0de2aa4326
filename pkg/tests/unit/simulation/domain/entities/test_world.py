"""
Unit tests for the synthetic world.

Test Strategy:
    - Small worlds (two tasks of two classes) to keep generation fast
    - Structural properties: feature means, box areas, annotation rules,
      co-occurrence counts, determinism
"""

from dataclasses import replace

import numpy as np
import pytest

from src.shared.domain.value_objects.scale import ScaleBucket, ScaleConfig
from src.simulation.domain.entities.world import (
    TEST_SPLIT,
    TRAIN_SPLIT,
    World,
    generate_image,
    generate_world,
)
from src.simulation.domain.exceptions import InvalidWorldConfigError
from src.simulation.domain.value_objects.world_config import WorldConfig

SMALL = WorldConfig(
    classes_per_task=(2, 2),
    feature_dim=4,
    queries_per_image=6,
    images_per_stage=20,
    eval_images_per_task=6,
    image_feature_size=2,
)


@pytest.fixture(scope="module")
def world() -> World:
    return generate_world(SMALL)


def _has_old(world: World, stage: int) -> list[bool]:
    old = set(world.schedule.old_classes(stage))
    return [bool(image.classes & old) for image in world.train[stage - 1]]


def test_schedule_and_categories_follow_the_config(world: World) -> None:
    assert world.schedule.stages == (frozenset({0, 1}), frozenset({2, 3}))
    assert [c.name for c in world.categories] == ["class_0", "class_1", "class_2", "class_3"]


def test_noise_free_features_sit_on_their_class_means() -> None:
    cfg = replace(SMALL, noise=0.0)
    world = generate_world(cfg)
    buckets = list(ScaleBucket)

    for image in world.train[0]:
        occupied = {o.query_index for o in image.objects}
        for o in image.objects:
            expected = world.means[o.class_id, buckets.index(o.bucket)]
            np.testing.assert_array_equal(image.features[o.query_index], expected)
        for q in set(range(image.num_queries)) - occupied:
            assert not image.features[q].any()


def test_box_areas_fall_inside_their_bucket(world: World) -> None:
    scale = ScaleConfig()
    images = [image for stage in world.train for image in stage]

    for image in images:
        for o in image.objects:
            assert scale.bucket_of(o.bbox.area) is o.bucket
            assert o.bbox.x >= 0 and o.bbox.x + o.bbox.w <= image.size + 1e-9


def test_first_stage_holds_only_its_own_classes(world: World) -> None:
    assert not any(_has_old(world, 1))
    assert all(image.classes <= {0, 1} for image in world.train[0])


def test_cooccurrence_rate_sets_the_share_of_mixed_images(world: World) -> None:
    assert sum(_has_old(world, 2)) == round(SMALL.cooccurrence_rate * SMALL.images_per_stage)


def test_zero_cooccurrence_gives_no_old_objects() -> None:
    world = generate_world(replace(SMALL, cooccurrence_rate=0.0))

    assert not any(_has_old(world, 2))


def test_old_objects_stay_unannotated_in_training_images(world: World) -> None:
    annotated = world.training_dataset(2)
    revealed = world.training_dataset(2, annotated_only=False)

    assert {a.class_id for a in annotated.annotations} <= {2, 3}
    assert {a.class_id for a in revealed.annotations} & {0, 1}
    assert len(annotated.images) == len(revealed.images) == SMALL.images_per_stage


def test_test_images_are_fully_annotated(world: World) -> None:
    dataset = world.eval_dataset(2)

    assert len(dataset.images) == 2 * SMALL.eval_images_per_task
    objects = sum(len(image.objects) for task in world.test for image in task)
    assert len(dataset.annotations) == objects
    assert all(image.classes <= {2, 3} for image in world.test[1])


def test_image_ids_are_unique_across_splits(world: World) -> None:
    ids = [image.image_id for split in (world.train, world.test) for s in split for image in s]

    assert len(ids) == len(set(ids))


def test_images_do_not_depend_on_generation_order(world: World) -> None:
    again = generate_image(SMALL, world.means, ScaleConfig(), 2, TRAIN_SPLIT, 7)
    test_image = generate_image(SMALL, world.means, ScaleConfig(), 1, TEST_SPLIT, 3)

    np.testing.assert_array_equal(again.features, world.train[1][7].features)
    np.testing.assert_array_equal(test_image.reference_boxes, world.test[0][3].reference_boxes)


def test_same_seed_same_world(world: World) -> None:
    twin = generate_world(SMALL)

    np.testing.assert_array_equal(twin.means, world.means)
    np.testing.assert_array_equal(twin.train[1][0].image_map, world.train[1][0].image_map)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"classes_per_task": ()},
        {"classes_per_task": (2, 0)},
        {"max_objects_per_image": 7},
        {"cooccurrence_rate": 1.5},
        {"task_similarity": 1.0},
        {"image_size": 64},
    ],
)
def test_world_config_rejects_inconsistent_settings(kwargs: dict[str, object]) -> None:
    with pytest.raises(InvalidWorldConfigError):
        replace(SMALL, **kwargs)  # type: ignore[arg-type]
