"""
Scale-decoupled topology distillation.

Per scale bucket, old-class queries are pooled into confidence-weighted
prototypes, optionally joined by a background anchor, and the pairwise
distances between these nodes are turned into row-wise Boltzmann affinities.
The loss is the temperature-squared KL divergence between the teacher's and
the student's affinity rows, summed over buckets.

Design Decisions:
    - Teacher and student prototypes come from the same labels and the same
      partition; only the aggregated feature matrix differs
    - The softmax row includes the node itself (exp(0) term)
    - Buckets with fewer than two class prototypes contribute zero loss and
      are reported; the anchor only joins buckets that are evaluated
    - The background anchor never receives gradient

Gradient:
    With G = tau * (P_teacher - P_student) the derivative with respect to the
    student's distance entries, S = G + G^T (zero diagonal) acts on each
    unordered pair, and for node u
        dL/dx_u = sum_v S_uv * (x_u - x_v) / M_uv.
    Prototype gradients flow back to query features through the aggregation
    weights s_i / sum_j s_j.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist
from scipy.special import rel_entr, softmax

from src.distillation.domain.exceptions import (
    DegenerateTopologyError,
    DistillationError,
    InvalidLabelsError,
    TopologyMismatchError,
)
from src.distillation.domain.value_objects.distillation_config import StdConfig
from src.distillation.domain.value_objects.query_labels import UNLABELED, QueryLabels
from src.distillation.domain.value_objects.scale_partition import ScalePartition
from src.distillation.domain.value_objects.topology import (
    BACKGROUND_NODE,
    BackgroundAnchor,
    Prototype,
    RelationTopology,
)
from src.shared.domain.value_objects.query_batch import QueryBatch
from src.shared.domain.value_objects.scale import ScaleBucket

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class _BucketAggregation:
    class_ids: tuple[int, ...]
    supports: tuple[int, ...]
    rows: tuple[int, ...]
    weights: FloatArray
    excluded: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class StdResult:
    """
    Topology loss, its gradient and what was left out.

    Attributes:
        loss: Sum over buckets of tau^2 * sum_u KL(P_teacher,u || P_student,u)
        grad: N x D gradient with respect to the student features
        per_bucket: Loss contribution of each evaluated bucket
        skipped_buckets: Buckets with fewer than two class prototypes
        excluded_classes: (bucket, class_id) pairs dropped for zero score mass
    """

    loss: float
    grad: FloatArray
    per_bucket: Mapping[ScaleBucket, float] = field(default_factory=dict)
    skipped_buckets: tuple[ScaleBucket, ...] = ()
    excluded_classes: tuple[tuple[ScaleBucket, int], ...] = ()


def _check_labels(batch: QueryBatch, labels: QueryLabels, part: ScalePartition) -> None:
    if len(labels) != batch.num_queries:
        raise InvalidLabelsError(
            f"Labels cover {len(labels)} queries, the batch has {batch.num_queries}"
        )
    if part.size != batch.num_queries:
        raise InvalidLabelsError(
            f"Partition covers {part.size} queries, the batch has {batch.num_queries}"
        )


def _aggregate_bucket(indices: Sequence[int], labels: QueryLabels) -> _BucketAggregation:
    """
    Aggregation weights of one bucket.

    Returns a weight matrix with one row per kept class (ascending id) and
    one column per query index of the bucket (ascending).
    """
    rows = tuple(sorted(indices))
    class_ids = labels.class_ids[list(rows)] if rows else np.zeros(0, dtype=np.int64)
    scores = labels.scores[list(rows)] if rows else np.zeros(0, dtype=np.float64)

    kept: list[int] = []
    supports: list[int] = []
    weight_rows: list[FloatArray] = []
    excluded: list[int] = []
    for c in sorted({int(c) for c in class_ids if c != UNLABELED}):
        mask = class_ids == c
        mass = float(scores[mask].sum())
        if mass <= 0.0:
            excluded.append(c)
            continue
        kept.append(c)
        supports.append(int(mask.sum()))
        weight_rows.append(np.where(mask, scores / mass, 0.0))

    weights = np.array(weight_rows, dtype=np.float64).reshape(len(kept), len(rows))
    return _BucketAggregation(tuple(kept), tuple(supports), rows, weights, tuple(excluded))


def aggregate_prototypes(
    batch: QueryBatch, part: ScalePartition, labels: QueryLabels
) -> list[Prototype]:
    """
    Confidence-weighted class prototypes per scale bucket.

    p_c^k = sum over queries i of class c in bucket k of (s_i / sum_j s_j) f_i.
    Classes absent from a bucket yield no prototype there; classes whose
    scores sum to zero are excluded with a warning.

    Args:
        batch: Query features (teacher or student view)
        part: Scale partition of the batch
        labels: Shared per-query labels

    Returns:
        Prototypes ordered by bucket (Small, Medium, Large) then class id

    Example:
        Two queries of one class with scores (0.9, 0.1) give 0.9 f1 + 0.1 f2.
    """
    _check_labels(batch, labels, part)
    prototypes: list[Prototype] = []
    for bucket, indices in part.items():
        agg = _aggregate_bucket(indices, labels)
        for c in agg.excluded:
            logger.warning("Class %d excluded from %s bucket: zero score mass", c, bucket.value)
        if not agg.class_ids:
            continue
        vectors = agg.weights @ batch.features[list(agg.rows)]
        prototypes.extend(
            Prototype(class_id=c, bucket=bucket, vector=v, support=n)
            for c, v, n in zip(agg.class_ids, vectors, agg.supports, strict=True)
        )
    return prototypes


def background_anchor(image_features: FloatArray) -> BackgroundAnchor:
    """
    Global average pooling of an H x W x D feature map.

    Raises:
        DistillationError: If the map is not H x W x D with H, W >= 1
    """
    feature_map = np.asarray(image_features, dtype=np.float64)
    if feature_map.ndim != 3 or feature_map.shape[0] < 1 or feature_map.shape[1] < 1:
        raise DistillationError(
            f"Image features must be a non-empty H x W x D map, got {feature_map.shape}"
        )
    return BackgroundAnchor(feature_map.mean(axis=(0, 1)))


def _topology_from_nodes(
    bucket: ScaleBucket, node_ids: tuple[int, ...], nodes: FloatArray, temperature: float
) -> RelationTopology:
    distances = cdist(nodes, nodes)
    affinity = softmax(-distances / temperature, axis=1)
    return RelationTopology(
        bucket=bucket,
        node_ids=node_ids,
        distance_matrix=distances,
        affinity=affinity,
        temperature=temperature,
    )


def relation_topology(
    protos: Sequence[Prototype], anchor: BackgroundAnchor | None, temperature: float
) -> RelationTopology:
    """
    Distance matrix and Boltzmann affinities of one bucket's prototypes.

    Args:
        protos: Prototypes of a single bucket
        anchor: Background anchor appended as the last node, or None
        temperature: Softmax temperature (> 0)

    Returns:
        RelationTopology with nodes in ascending class id, anchor last

    Raises:
        DegenerateTopologyError: With fewer than two class prototypes; the anchor
            alone never completes a topology, matching the bucket skipping rule
        DistillationError: If prototypes span several buckets or repeat a class

    Example:
        Two prototypes at distance d with temperature 1 give the row
        (1 / (1 + e^-d), e^-d / (1 + e^-d)).
    """
    if temperature <= 0:
        raise DistillationError(f"Temperature must be positive, got {temperature}")
    if len(protos) < 2:
        raise DegenerateTopologyError(len(protos))

    buckets = {p.bucket for p in protos}
    if len(buckets) != 1:
        raise DistillationError("Prototypes of a topology must share one bucket")
    ordered = sorted(protos, key=lambda p: p.class_id)
    node_ids = tuple(p.class_id for p in ordered)
    if len(set(node_ids)) != len(node_ids):
        raise DistillationError(f"Duplicate class in topology nodes: {node_ids}")

    vectors = [p.vector for p in ordered]
    if anchor is not None:
        node_ids = node_ids + (BACKGROUND_NODE,)
        vectors.append(anchor.vector)
    return _topology_from_nodes(buckets.pop(), node_ids, np.stack(vectors), temperature)


def _kl_rows(teacher: RelationTopology, student: RelationTopology) -> float:
    if teacher.node_ids != student.node_ids:
        raise TopologyMismatchError(
            f"{teacher.bucket.value} bucket: teacher nodes {teacher.node_ids} "
            f"vs student nodes {student.node_ids}"
        )
    if teacher.temperature != student.temperature:
        raise TopologyMismatchError(
            f"{teacher.bucket.value} bucket: temperatures {teacher.temperature} "
            f"vs {student.temperature}"
        )
    kl = float(rel_entr(teacher.affinity, student.affinity).sum())
    return teacher.temperature**2 * kl


def build_topologies(
    batch: QueryBatch, part: ScalePartition, labels: QueryLabels, cfg: StdConfig
) -> dict[ScaleBucket, RelationTopology]:
    """
    Topology of every bucket holding at least two class prototypes.

    Composes aggregate_prototypes(), background_anchor() and
    relation_topology() with the same skipping rule as std_loss_and_grad().
    """
    anchor = _anchor_for(batch, cfg)
    by_bucket: dict[ScaleBucket, list[Prototype]] = {}
    for proto in aggregate_prototypes(batch, part, labels):
        by_bucket.setdefault(proto.bucket, []).append(proto)
    return {
        bucket: relation_topology(protos, anchor, cfg.temperature)
        for bucket, protos in by_bucket.items()
        if len(protos) >= 2
    }


def std_loss(
    teacher: Mapping[ScaleBucket, RelationTopology],
    student: Mapping[ScaleBucket, RelationTopology],
) -> float:
    """
    Temperature-squared row KL between node-aligned topologies, summed over buckets.

    Raises:
        TopologyMismatchError: If the bucket sets or any bucket's node ids differ
    """
    if set(teacher) != set(student):
        raise TopologyMismatchError(
            f"Buckets differ: teacher {sorted(b.value for b in teacher)} "
            f"vs student {sorted(b.value for b in student)}"
        )
    return float(sum(_kl_rows(teacher[b], student[b]) for b in ScaleBucket if b in teacher))


def _pair_gradient(
    distances: FloatArray,
    nodes: FloatArray,
    teacher_aff: FloatArray,
    student_aff: FloatArray,
    temperature: float,
) -> FloatArray:
    g = temperature * (teacher_aff - student_aff)
    s = g + g.T
    np.fill_diagonal(s, 0.0)
    coef = np.divide(s, distances, out=np.zeros_like(s), where=distances > 0)
    result: FloatArray = coef.sum(axis=1)[:, None] * nodes - coef @ nodes
    return result


def _anchor_for(batch: QueryBatch, cfg: StdConfig) -> BackgroundAnchor | None:
    if not cfg.include_background_anchor or batch.image_features is None:
        return None
    return background_anchor(batch.image_features)


def std_loss_and_grad(
    teacher_batch: QueryBatch,
    student_batch: QueryBatch,
    labels: QueryLabels,
    part: ScalePartition,
    cfg: StdConfig,
) -> StdResult:
    """
    Topology loss and its gradient with respect to the student features.

    Args:
        teacher_batch: Teacher view (constant)
        student_batch: Student view, same queries and shape
        labels: Teacher-generated per-query labels, shared by both views
        part: Scale partition from the teacher's boxes
        cfg: Temperature and background-anchor switch

    Returns:
        StdResult; grad has the shape of student_batch.features

    Raises:
        InvalidLabelsError: If labels or partition do not cover the batch
        TopologyMismatchError: If only one view has an image feature map
    """
    if teacher_batch.features.shape != student_batch.features.shape:
        raise TopologyMismatchError(
            f"Teacher features {teacher_batch.features.shape} vs student "
            f"{student_batch.features.shape}"
        )
    _check_labels(student_batch, labels, part)

    teacher_anchor = _anchor_for(teacher_batch, cfg)
    student_anchor = _anchor_for(student_batch, cfg)
    if (teacher_anchor is None) != (student_anchor is None):
        raise TopologyMismatchError("Background anchor available on one side only")

    tau = cfg.temperature
    grad = np.zeros_like(student_batch.features)
    per_bucket: dict[ScaleBucket, float] = {}
    skipped: list[ScaleBucket] = []
    excluded: list[tuple[ScaleBucket, int]] = []

    for bucket, indices in part.items():
        agg = _aggregate_bucket(indices, labels)
        excluded.extend((bucket, c) for c in agg.excluded)
        for c in agg.excluded:
            logger.warning("Class %d excluded from %s bucket: zero score mass", c, bucket.value)

        if len(agg.class_ids) < 2:
            skipped.append(bucket)
            logger.debug(
                "Skipping %s bucket: %d class prototype(s)", bucket.value, len(agg.class_ids)
            )
            continue

        node_ids = agg.class_ids
        rows = list(agg.rows)
        teacher_nodes = agg.weights @ teacher_batch.features[rows]
        student_nodes = agg.weights @ student_batch.features[rows]
        if teacher_anchor is not None and student_anchor is not None:
            node_ids = node_ids + (BACKGROUND_NODE,)
            teacher_nodes = np.vstack([teacher_nodes, teacher_anchor.vector])
            student_nodes = np.vstack([student_nodes, student_anchor.vector])

        teacher_topo = _topology_from_nodes(bucket, node_ids, teacher_nodes, tau)
        student_topo = _topology_from_nodes(bucket, node_ids, student_nodes, tau)
        per_bucket[bucket] = _kl_rows(teacher_topo, student_topo)

        node_grad = _pair_gradient(
            student_topo.distance_matrix,
            student_nodes,
            teacher_topo.affinity,
            student_topo.affinity,
            tau,
        )
        class_count = len(agg.class_ids)
        grad[rows] += agg.weights.T @ node_grad[:class_count]

    return StdResult(
        loss=float(sum(per_bucket.values())),
        grad=grad,
        per_bucket=per_bucket,
        skipped_buckets=tuple(skipped),
        excluded_classes=tuple(excluded),
    )
