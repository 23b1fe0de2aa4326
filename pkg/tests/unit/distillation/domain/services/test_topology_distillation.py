"""
Unit tests for scale-decoupled topology distillation.

Test Strategy:
    - Closed-form prototypes, anchors and affinity rows
    - Row KL against hand-evaluated values
    - Analytic gradient against central differences
    - Distances, affinities and the loss ignore a common translation of every
      node; affinities ignore a joint rescaling of features and temperature
    - A bucket needs two class prototypes, with or without the anchor
"""

import math

import numpy as np
import pytest

from src.distillation.domain.exceptions import (
    DegenerateTopologyError,
    DistillationError,
    TopologyMismatchError,
)
from src.distillation.domain.services.scale_partitioner import partition
from src.distillation.domain.services.topology_distillation import (
    aggregate_prototypes,
    background_anchor,
    build_topologies,
    relation_topology,
    std_loss,
    std_loss_and_grad,
)
from src.distillation.domain.value_objects.distillation_config import StdConfig
from src.distillation.domain.value_objects.query_labels import UNLABELED, QueryLabels
from src.distillation.domain.value_objects.topology import (
    BACKGROUND_NODE,
    BackgroundAnchor,
    Prototype,
    RelationTopology,
)
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection
from src.shared.domain.value_objects.query_batch import QueryBatch
from src.shared.domain.value_objects.scale import ScaleBucket, ScaleConfig
from src.verification.domain.services.finite_difference import (
    central_difference,
    relative_error,
)


def _batch(
    features: np.ndarray, sides: list[float], image_features: np.ndarray | None = None
) -> QueryBatch:
    detections = tuple(
        Detection(BBox(0, 0, side, side), 0.5, 0, query_index=q) for q, side in enumerate(sides)
    )
    return QueryBatch(features, detections, image_features=image_features)


def _proto(class_id: int, vector: list[float]) -> Prototype:
    return Prototype(class_id, ScaleBucket.SMALL, np.array(vector), support=1)


def test_single_query_prototype_is_its_feature() -> None:
    batch = _batch(np.array([[1.0, 2.0]]), [10])
    labels = QueryLabels.from_pairs([(3, 0.7)])

    (proto,) = aggregate_prototypes(batch, partition(batch, ScaleConfig()), labels)

    assert proto.class_id == 3
    assert proto.bucket is ScaleBucket.SMALL
    assert proto.support == 1
    assert proto.vector == pytest.approx([1.0, 2.0])


@pytest.mark.parametrize(
    ("scores", "expected"), [((0.5, 0.5), [2.0, 1.0]), ((0.9, 0.1), [0.4, 0.2])]
)
def test_prototype_weights_queries_by_score(
    scores: tuple[float, float], expected: list[float]
) -> None:
    batch = _batch(np.array([[0.0, 0.0], [4.0, 2.0]]), [10, 10])
    labels = QueryLabels.from_pairs([(1, scores[0]), (1, scores[1])])

    (proto,) = aggregate_prototypes(batch, partition(batch, ScaleConfig()), labels)

    assert proto.vector == pytest.approx(expected)
    assert proto.support == 2


def test_prototypes_are_per_bucket_and_skip_unlabeled_queries() -> None:
    batch = _batch(np.eye(4), [10, 10, 50, 200])
    labels = QueryLabels.from_pairs([(0, 0.9), (1, 0.8), (0, 0.7), (UNLABELED, 0.0)])

    protos = aggregate_prototypes(batch, partition(batch, ScaleConfig()), labels)

    assert [(p.bucket, p.class_id) for p in protos] == [
        (ScaleBucket.SMALL, 0),
        (ScaleBucket.SMALL, 1),
        (ScaleBucket.MEDIUM, 0),
    ]


def test_zero_score_class_is_excluded_not_fatal() -> None:
    batch = _batch(np.eye(3), [10, 10, 10])
    labels = QueryLabels.from_pairs([(0, 0.0), (1, 0.5), (2, 0.5)])

    protos = aggregate_prototypes(batch, partition(batch, ScaleConfig()), labels)

    assert [p.class_id for p in protos] == [1, 2]


def test_background_anchor_is_spatial_mean() -> None:
    feature_map = np.array([[[1.0, 0.0], [3.0, 0.0]], [[5.0, 4.0], [7.0, 8.0]]])

    assert background_anchor(feature_map).vector == pytest.approx([4.0, 3.0])
    assert background_anchor(np.full((3, 2, 2), 1.5)).vector == pytest.approx([1.5, 1.5])
    assert background_anchor(np.array([[[2.0, -1.0]]])).vector == pytest.approx([2.0, -1.0])


def test_background_anchor_rejects_empty_map() -> None:
    with pytest.raises(DistillationError):
        background_anchor(np.zeros((0, 2, 3)))


def test_two_coincident_prototypes_have_uniform_rows() -> None:
    topology = relation_topology([_proto(0, [1.0, 1.0]), _proto(1, [1.0, 1.0])], None, 1.0)

    assert topology.affinity == pytest.approx(np.full((2, 2), 0.5))


def test_two_prototypes_at_distance_d() -> None:
    d = 2.0
    topology = relation_topology([_proto(0, [0.0, 0.0]), _proto(1, [d, 0.0])], None, 1.0)

    near = 1 / (1 + math.exp(-d))
    assert topology.affinity[0] == pytest.approx([near, 1 - near])
    assert topology.distance_matrix[0, 1] == pytest.approx(d)


def test_three_equidistant_prototypes() -> None:
    topology = relation_topology(
        [_proto(0, [0.0, 0.0]), _proto(1, [1.0, 0.0]), _proto(2, [0.5, math.sqrt(3) / 2])],
        None,
        1.0,
    )

    sigma = 1 / (1 + 2 * math.exp(-1))
    beta = math.exp(-1) / (1 + 2 * math.exp(-1))
    assert topology.affinity[0] == pytest.approx([sigma, beta, beta])
    assert topology.affinity.sum(axis=1) == pytest.approx(np.ones(3))


def test_anchor_is_appended_as_last_node() -> None:
    anchor = BackgroundAnchor(np.array([5.0, 5.0]))

    topology = relation_topology([_proto(2, [0.0, 0.0]), _proto(1, [1.0, 0.0])], anchor, 1.0)

    assert topology.node_ids == (1, 2, BACKGROUND_NODE)
    assert topology.has_background


def test_fewer_than_two_nodes_is_degenerate() -> None:
    with pytest.raises(DegenerateTopologyError) as excinfo:
        relation_topology([_proto(0, [0.0, 0.0])], None, 1.0)

    assert excinfo.value.node_count == 1


def test_std_loss_is_zero_for_identical_topologies() -> None:
    topology = relation_topology([_proto(0, [0.0, 0.0]), _proto(1, [1.0, 2.0])], None, 1.0)

    assert std_loss({ScaleBucket.SMALL: topology}, {ScaleBucket.SMALL: topology}) == 0.0
    assert std_loss({}, {}) == 0.0


def test_std_loss_is_tau_squared_row_kl() -> None:
    def topology(affinity: list[list[float]]) -> RelationTopology:
        return RelationTopology(
            ScaleBucket.SMALL, (0, 1), np.zeros((2, 2)), np.array(affinity), 1.0
        )

    teacher = topology([[0.5, 0.5], [0.5, 0.5]])
    student = topology([[0.9, 0.1], [0.1, 0.9]])

    row = 0.5 * math.log(0.5 / 0.9) + 0.5 * math.log(0.5 / 0.1)
    assert std_loss({ScaleBucket.SMALL: teacher}, {ScaleBucket.SMALL: student}) == pytest.approx(
        2 * row
    )


def test_std_loss_rejects_node_mismatch() -> None:
    teacher = relation_topology([_proto(0, [0.0, 0.0]), _proto(1, [1.0, 0.0])], None, 1.0)
    student = relation_topology([_proto(0, [0.0, 0.0]), _proto(2, [1.0, 0.0])], None, 1.0)

    with pytest.raises(TopologyMismatchError):
        std_loss({ScaleBucket.SMALL: teacher}, {ScaleBucket.SMALL: student})
    with pytest.raises(TopologyMismatchError):
        std_loss({ScaleBucket.SMALL: teacher}, {})


def _instance(seed: int, with_map: bool) -> tuple[QueryBatch, QueryBatch, QueryLabels]:
    rng = np.random.default_rng(seed)
    sides = [10, 10, 10, 50, 50, 50]
    teacher = _batch(
        rng.normal(size=(6, 3)), sides, rng.normal(size=(2, 2, 3)) if with_map else None
    )
    student = teacher.with_features(
        teacher.features + 0.5 * rng.normal(size=(6, 3)),
        rng.normal(size=(2, 2, 3)) if with_map else None,
    )
    labels = QueryLabels.from_pairs(
        [(0, 0.9), (1, 0.6), (2, 0.4), (0, 0.8), (1, 0.7), (0, 0.3)]
    )
    return teacher, student, labels


def test_student_equal_to_teacher_gives_zero_loss_and_grad() -> None:
    teacher, _, labels = _instance(0, with_map=True)

    part = partition(teacher, ScaleConfig())

    result = std_loss_and_grad(teacher, teacher, labels, part, StdConfig())

    assert result.loss == pytest.approx(0.0, abs=1e-12)
    assert result.grad == pytest.approx(np.zeros((6, 3)), abs=1e-12)
    assert set(result.per_bucket) == {ScaleBucket.SMALL, ScaleBucket.MEDIUM}


@pytest.mark.parametrize("with_map", [True, False])
def test_gradient_matches_central_differences(with_map: bool) -> None:
    teacher, student, labels = _instance(3, with_map)
    part = partition(teacher, ScaleConfig())
    cfg = StdConfig(temperature=0.7)

    def loss(x: np.ndarray) -> float:
        return std_loss_and_grad(teacher, student.with_features(x), labels, part, cfg).loss

    result = std_loss_and_grad(teacher, student, labels, part, cfg)

    assert result.loss > 0.0
    numeric = central_difference(loss, student.features)
    assert relative_error(result.grad, numeric) < 1e-4


def test_single_class_bucket_contributes_nothing() -> None:
    rng = np.random.default_rng(1)
    teacher = _batch(rng.normal(size=(3, 2)), [10, 10, 200])
    student = teacher.with_features(rng.normal(size=(3, 2)))
    labels = QueryLabels.from_pairs([(0, 0.9), (0, 0.5), (1, 0.8)])

    result = std_loss_and_grad(
        teacher, student, labels, partition(teacher, ScaleConfig()), StdConfig()
    )

    assert result.loss == 0.0
    assert result.grad == pytest.approx(np.zeros((3, 2)))
    assert set(result.skipped_buckets) == set(ScaleBucket)


def test_anchor_on_one_side_only_is_rejected() -> None:
    teacher, student, labels = _instance(0, with_map=True)
    bare = _batch(np.array(student.features), [10, 10, 10, 50, 50, 50])

    with pytest.raises(TopologyMismatchError, match="one side"):
        std_loss_and_grad(teacher, bare, labels, partition(teacher, ScaleConfig()), StdConfig())


def test_build_topologies_uses_the_same_skipping_rule() -> None:
    teacher, _, labels = _instance(0, with_map=True)

    topologies = build_topologies(teacher, partition(teacher, ScaleConfig()), labels, StdConfig())

    assert set(topologies) == {ScaleBucket.SMALL, ScaleBucket.MEDIUM}
    assert topologies[ScaleBucket.SMALL].node_ids == (0, 1, 2, BACKGROUND_NODE)
    assert topologies[ScaleBucket.MEDIUM].node_ids == (0, 1, BACKGROUND_NODE)


def test_one_prototype_with_anchor_is_still_degenerate() -> None:
    anchor = BackgroundAnchor(np.array([5.0, 5.0]))

    with pytest.raises(DegenerateTopologyError) as excinfo:
        relation_topology([_proto(0, [0.0, 0.0])], anchor, 1.0)

    assert excinfo.value.node_count == 1


def _random_nodes(seed: int) -> tuple[list[Prototype], BackgroundAnchor]:
    rng = np.random.default_rng(seed)
    protos = [
        Prototype(c, ScaleBucket.MEDIUM, rng.normal(size=4), support=1) for c in range(5)
    ]
    return protos, BackgroundAnchor(rng.normal(size=4))


def _shifted(
    protos: list[Prototype], anchor: BackgroundAnchor, offset: np.ndarray, scale: float
) -> tuple[list[Prototype], BackgroundAnchor]:
    moved = [
        Prototype(p.class_id, p.bucket, scale * p.vector + offset, p.support) for p in protos
    ]
    return moved, BackgroundAnchor(scale * anchor.vector + offset)


@pytest.mark.parametrize("seed", range(10))
def test_topology_ignores_a_common_translation(seed: int) -> None:
    protos, anchor = _random_nodes(seed)
    offset = np.random.default_rng(100 + seed).normal(scale=10.0, size=4)

    base = relation_topology(protos, anchor, 0.8)
    moved = relation_topology(*_shifted(protos, anchor, offset, 1.0), 0.8)

    np.testing.assert_allclose(moved.distance_matrix, base.distance_matrix, atol=1e-10)
    np.testing.assert_allclose(moved.affinity, base.affinity, atol=1e-10)


@pytest.mark.parametrize("scale", [0.25, 3.0, 40.0])
def test_affinities_ignore_joint_scaling_of_features_and_temperature(scale: float) -> None:
    protos, anchor = _random_nodes(7)

    base = relation_topology(protos, anchor, 0.8)
    scaled = relation_topology(*_shifted(protos, anchor, np.zeros(4), scale), 0.8 * scale)

    np.testing.assert_allclose(scaled.distance_matrix, scale * base.distance_matrix, rtol=1e-12)
    np.testing.assert_allclose(scaled.affinity, base.affinity, atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_distance_matrix_satisfies_the_triangle_inequality(seed: int) -> None:
    protos, anchor = _random_nodes(seed)

    distances = relation_topology(protos, anchor, 1.0).distance_matrix

    detour = distances[:, :, None] + distances[None, :, :]
    assert np.all(distances[:, None, :] <= detour + 1e-12)
    np.testing.assert_allclose(distances, distances.T)
    assert np.all(np.diag(distances) == 0.0)


@pytest.mark.parametrize("seed", range(5))
def test_loss_and_gradient_ignore_a_translation_of_the_student(seed: int) -> None:
    teacher, student, labels = _instance(seed, with_map=True)
    part = partition(teacher, ScaleConfig())
    offset = np.random.default_rng(50 + seed).normal(scale=5.0, size=3)
    assert student.image_features is not None
    moved = student.with_features(student.features + offset, student.image_features + offset)

    base = std_loss_and_grad(teacher, student, labels, part, StdConfig())
    shifted = std_loss_and_grad(teacher, moved, labels, part, StdConfig())

    assert base.loss > 0.0
    assert shifted.loss == pytest.approx(base.loss, rel=1e-9)
    np.testing.assert_allclose(shifted.grad, base.grad, atol=1e-9)


def test_loss_scales_with_tau_squared_under_joint_scaling() -> None:
    teacher, student, labels = _instance(2, with_map=False)
    part = partition(teacher, ScaleConfig())
    scale = 4.0

    base = std_loss_and_grad(teacher, student, labels, part, StdConfig(temperature=0.5))
    scaled = std_loss_and_grad(
        teacher.with_features(scale * teacher.features),
        student.with_features(scale * student.features),
        labels,
        part,
        StdConfig(temperature=0.5 * scale),
    )

    assert scaled.loss == pytest.approx(scale**2 * base.loss, rel=1e-9)
