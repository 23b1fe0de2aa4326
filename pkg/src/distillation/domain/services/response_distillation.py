"""
Correspondence response distillation.

Query i of the student is distilled towards query i of the frozen teacher,
layer by layer. Each query is weighted by the teacher's confidence on the
previously learned classes, alpha_i = max over old classes of the teacher's
softmax, so queries the teacher considers background barely contribute.

    align = sum_i alpha_i * KL(softmax(z_T,i / tau) || softmax(z_S,i / tau))
    reg   = sum_i alpha_i * (l1 * |b_T,i - b_S,i|_1 + giou * (1 - GIoU(b_T,i, b_S,i)))
    total = sum over layers of (align + reg)

The KL runs over every logit column, not just the old classes. No tau^2
factor is applied unless CrdConfig.tau_squared is set.
"""

from collections.abc import Collection, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import log_softmax, softmax

from src.distillation.domain.exceptions import EmptyOldClassesError
from src.distillation.domain.value_objects.distillation_config import CrdConfig
from src.shared.domain.box_regression import box_regression_loss_and_grad
from src.shared.domain.exceptions import LayerMismatchError
from src.shared.domain.value_objects.layer_responses import LayerResponses

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class AlignResult:
    loss: float
    grad: FloatArray
    alpha: FloatArray


@dataclass(frozen=True, eq=False)
class RegResult:
    loss: float
    grad: FloatArray


@dataclass(frozen=True, eq=False)
class CrdLayerResult:
    """
    Response distillation terms of one layer.

    Attributes:
        layer_index: Layer the terms belong to
        align: Weighted KL term
        reg: Weighted box term
        alpha: Per-query teacher confidence on old classes
        logits_grad: d(align) / d(student logits)
        boxes_grad: d(reg) / d(student boxes)
    """

    layer_index: int
    align: float
    reg: float
    alpha: FloatArray
    logits_grad: FloatArray
    boxes_grad: FloatArray


@dataclass(frozen=True, eq=False)
class CrdResult:
    """Per-layer terms and their sums; total == align + reg."""

    align: float
    reg: float
    layers: tuple[CrdLayerResult, ...]

    @property
    def total(self) -> float:
        return self.align + self.reg


def _old_class_columns(old_classes: Collection[int], num_classes: int) -> list[int]:
    columns = sorted({int(c) for c in old_classes})
    if not columns:
        raise EmptyOldClassesError(
            "Response distillation needs at least one previously learned class"
        )
    if columns[0] < 0 or columns[-1] >= num_classes:
        raise EmptyOldClassesError(
            f"Old classes {columns} fall outside the {num_classes} logit columns"
        )
    return columns


def confidence_weights(
    teacher: LayerResponses, old_classes: Collection[int], temperature: float
) -> FloatArray:
    """alpha_i: the teacher's highest softmax probability among the old classes."""
    columns = _old_class_columns(old_classes, teacher.num_classes)
    probs = softmax(teacher.logits / temperature, axis=1)
    alpha: FloatArray = probs[:, columns].max(axis=1)
    return alpha


def crd_align(
    teacher: LayerResponses,
    student: LayerResponses,
    old_classes: Collection[int],
    temperature: float,
    tau_squared: bool = False,
) -> AlignResult:
    """
    Confidence-weighted KL between teacher and student class responses.

    Args:
        teacher: Frozen teacher layer (constant)
        student: Student layer with the same shape
        old_classes: Class columns learned in earlier tasks
        temperature: Softmax temperature
        tau_squared: Scale loss and gradient by temperature**2

    Returns:
        AlignResult with the loss, d loss / d student logits and alpha

    Raises:
        EmptyOldClassesError: If old_classes is empty or out of range
        LayerMismatchError: If the two layers differ in shape
    """
    teacher.check_aligned(student)
    alpha = confidence_weights(teacher, old_classes, temperature)

    log_pt = log_softmax(teacher.logits / temperature, axis=1)
    log_ps = log_softmax(student.logits / temperature, axis=1)
    pt = np.exp(log_pt)
    ps = np.exp(log_ps)

    kl = np.where(pt > 0, pt * (log_pt - log_ps), 0.0).sum(axis=1)
    scale = temperature**2 if tau_squared else 1.0
    loss = scale * float(np.sum(alpha * kl))
    grad = scale * alpha[:, None] * (ps - pt) / temperature
    return AlignResult(loss=loss, grad=grad, alpha=alpha)


def crd_reg(
    teacher: LayerResponses,
    student: LayerResponses,
    alpha: FloatArray,
    cfg: CrdConfig,
) -> RegResult:
    """
    Confidence-weighted box distillation, teacher boxes as targets.

    Raises:
        InvalidBoxError: If any box has a non-positive size
        LayerMismatchError: If the layers or alpha disagree in length
    """
    teacher.check_aligned(student)
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (student.num_queries,):
        raise LayerMismatchError(
            f"Expected {student.num_queries} weights, got shape {alpha.shape}"
        )
    result = box_regression_loss_and_grad(
        student.boxes, teacher.boxes, alpha, cfg.bbox_l1_weight, cfg.bbox_giou_weight
    )
    return RegResult(loss=result.loss, grad=result.grad)


def crd_total(
    teacher_layers: Sequence[LayerResponses],
    student_layers: Sequence[LayerResponses],
    old_classes: Collection[int],
    cfg: CrdConfig,
) -> CrdResult:
    """
    Alignment plus regression, summed over decoder layers in ascending order.

    Raises:
        LayerMismatchError: If the layer counts differ
        EmptyOldClassesError: If old_classes is empty
    """
    if len(teacher_layers) != len(student_layers):
        raise LayerMismatchError(
            f"Teacher has {len(teacher_layers)} layers, student has {len(student_layers)}"
        )

    layers: list[CrdLayerResult] = []
    for teacher, student in zip(teacher_layers, student_layers, strict=True):
        align = crd_align(teacher, student, old_classes, cfg.temperature, cfg.tau_squared)
        reg = crd_reg(teacher, student, align.alpha, cfg)
        layers.append(
            CrdLayerResult(
                layer_index=student.layer_index,
                align=align.loss,
                reg=reg.loss,
                alpha=align.alpha,
                logits_grad=align.grad,
                boxes_grad=reg.grad,
            )
        )

    return CrdResult(
        align=float(sum(layer.align for layer in layers)),
        reg=float(sum(layer.reg for layer in layers)),
        layers=tuple(layers),
    )
