"""
Unit tests for stage training.

Test Strategy:
    - A small two-task world, a handful of images per stage
    - Frozen optimiser (learning rate 0) pins the loss ledger
    - The teacher is never modified; thread count never changes the result
"""

from dataclasses import replace

import numpy as np
import pytest

from src.simulation.domain.entities.student_head import StudentHead
from src.simulation.domain.entities.world import World, generate_world
from src.simulation.domain.exceptions import MissingTeacherError
from src.simulation.domain.services.trainer import StageSettings, predict, train_stage
from src.simulation.domain.value_objects.train_config import TrainConfig, TrainingMode
from src.simulation.domain.value_objects.world_config import WorldConfig

CONFIG = WorldConfig(
    classes_per_task=(2, 2),
    feature_dim=4,
    queries_per_image=6,
    images_per_stage=8,
    eval_images_per_task=4,
    image_feature_size=2,
)
TRAIN = TrainConfig(epochs=2, batch_size=4)


@pytest.fixture(scope="module")
def world() -> World:
    return generate_world(CONFIG)


@pytest.fixture(scope="module")
def stage1_head(world: World) -> StudentHead:
    initial = StudentHead.initial(CONFIG.num_classes, CONFIG.feature_dim, CONFIG.seed)
    settings = StageSettings(mode=TrainingMode.FINETUNE, old_classes=frozenset(), train=TRAIN)
    return train_stage(initial, None, world.train[0], settings).head


def _stage2(mode: TrainingMode, workers: int = 1) -> StageSettings:
    return StageSettings(
        mode=mode, old_classes=frozenset({0, 1}), train=TRAIN, workers=workers
    )


def test_zero_learning_rate_keeps_parameters_and_loss(world: World) -> None:
    head = StudentHead.initial(CONFIG.num_classes, CONFIG.feature_dim, CONFIG.seed)
    settings = StageSettings(
        mode=TrainingMode.FINETUNE,
        old_classes=frozenset(),
        train=replace(TRAIN, learning_rate=0.0, epochs=3),
    )

    outcome = train_stage(head, None, world.train[0], settings)

    assert len(outcome.epoch_losses) == 3
    assert outcome.epoch_losses[0] == outcome.epoch_losses[1] == outcome.epoch_losses[2]
    for name, value in head.params.items():
        np.testing.assert_array_equal(outcome.head.params[name], value)


def test_training_returns_a_new_head(world: World) -> None:
    head = StudentHead.initial(CONFIG.num_classes, CONFIG.feature_dim, CONFIG.seed)
    before = head.params["W"].copy()
    settings = StageSettings(mode=TrainingMode.FINETUNE, old_classes=frozenset(), train=TRAIN)

    outcome = train_stage(head, None, world.train[0], settings)

    np.testing.assert_array_equal(head.params["W"], before)
    assert not np.array_equal(outcome.head.params["W"], before)
    assert outcome.thresholds is None


def test_distillation_modes_need_a_teacher(world: World, stage1_head: StudentHead) -> None:
    with pytest.raises(MissingTeacherError):
        train_stage(stage1_head, None, world.train[1], _stage2(TrainingMode.CRD))


def test_stage_needs_images(stage1_head: StudentHead) -> None:
    with pytest.raises(ValueError, match="at least one"):
        train_stage(stage1_head, None, [], _stage2(TrainingMode.FINETUNE))


def test_full_mode_leaves_the_teacher_untouched(world: World, stage1_head: StudentHead) -> None:
    teacher = stage1_head.frozen_copy()
    snapshot = {name: value.copy() for name, value in teacher.params.items()}

    outcome = train_stage(stage1_head, teacher, world.train[1], _stage2(TrainingMode.FULL))

    for name, value in teacher.params.items():
        np.testing.assert_array_equal(value, snapshot[name])
    assert outcome.thresholds is not None
    assert outcome.thresholds.old_classes == {0, 1}
    assert len(outcome.epoch_losses) == TRAIN.epochs


def test_finetune_reports_no_distillation_terms(
    world: World, stage1_head: StudentHead
) -> None:
    outcome = train_stage(
        stage1_head, stage1_head.frozen_copy(), world.train[1], _stage2(TrainingMode.FINETUNE)
    )

    assert all(loss.std == 0.0 and loss.crd == 0.0 for loss in outcome.epoch_losses)
    assert outcome.num_pseudo_labels == 0


def test_worker_count_does_not_change_the_result(
    world: World, stage1_head: StudentHead
) -> None:
    teacher = stage1_head.frozen_copy()

    serial = train_stage(stage1_head, teacher, world.train[1], _stage2(TrainingMode.FULL, 1))
    threaded = train_stage(stage1_head, teacher, world.train[1], _stage2(TrainingMode.FULL, 3))

    assert serial.epoch_losses == threaded.epoch_losses
    for name, value in serial.head.params.items():
        np.testing.assert_array_equal(threaded.head.params[name], value)


def test_predict_emits_one_detection_per_query(world: World, stage1_head: StudentHead) -> None:
    image = world.test[1][0]

    detections = predict(stage1_head, image, frozenset({2, 3}))

    assert [d.query_index for d in detections] == list(range(image.num_queries))
    assert {d.class_id for d in detections} <= {2, 3}
    assert all(0.0 < d.score < 1.0 and d.image_id == image.image_id for d in detections)


def test_zero_crd_weight_reduces_crd_mode_to_finetuning(
    world: World, stage1_head: StudentHead
) -> None:
    teacher = stage1_head.frozen_copy()
    silent = replace(TRAIN, crd_weight=0.0)

    crd = train_stage(
        stage1_head, teacher, world.train[1], replace(_stage2(TrainingMode.CRD), train=silent)
    )
    finetune = train_stage(
        stage1_head, teacher, world.train[1], replace(_stage2(TrainingMode.FINETUNE), train=silent)
    )

    assert all(loss.crd == 0.0 for loss in crd.epoch_losses)
    for name, value in finetune.head.params.items():
        np.testing.assert_array_equal(crd.head.params[name], value)


def test_crd_weight_scales_the_recorded_response_terms(
    world: World, stage1_head: StudentHead
) -> None:
    # Arrange: a fresh student against the trained teacher, parameters frozen
    student = StudentHead.initial(CONFIG.num_classes, CONFIG.feature_dim, CONFIG.seed)
    teacher = stage1_head.frozen_copy()

    def run(weight: float) -> float:
        train = replace(TRAIN, learning_rate=0.0, epochs=1, crd_weight=weight)
        settings = replace(_stage2(TrainingMode.CRD), train=train)
        return train_stage(student, teacher, world.train[1], settings).epoch_losses[0].crd

    # Act
    single, double = run(0.1), run(0.2)

    # Assert
    assert single > 0.0
    assert double == pytest.approx(2.0 * single, rel=1e-12)
