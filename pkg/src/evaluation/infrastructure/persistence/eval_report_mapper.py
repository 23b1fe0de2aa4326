from collections.abc import Mapping

from src.evaluation.domain.value_objects.eval_report import ClassResult, EvalReport
from src.evaluation.infrastructure.persistence.eval_report_dtos import (
    ClassResultDTO,
    EvalReportDTO,
)


def to_persistence(report: EvalReport, names: Mapping[int, str] | None = None) -> EvalReportDTO:
    names = names or {}
    return EvalReportDTO(
        stage=report.stage,
        previous_classes=sorted(report.previous_classes),
        current_classes=sorted(report.current_classes),
        summary=report.summary(),
        per_class=[
            ClassResultDTO(
                class_id=r.class_id,
                name=names.get(r.class_id, ""),
                num_gt=r.num_gt,
                ap=r.ap,
                ap50=r.ap50,
                ap75=r.ap75,
                ap_per_iou=None if r.ap_per_iou is None else list(r.ap_per_iou),
                ap_small=r.ap_small,
                ap_medium=r.ap_medium,
                ap_large=r.ap_large,
            )
            for _, r in sorted(report.per_class.items())
        ],
    )


def to_domain(dto: EvalReportDTO) -> EvalReport:
    """Rebuild a report; PR curves are not part of the JSON layout."""
    return EvalReport(
        per_class={
            entry.class_id: ClassResult(
                class_id=entry.class_id,
                num_gt=entry.num_gt,
                ap_per_iou=None if entry.ap_per_iou is None else tuple(entry.ap_per_iou),
                ap_small=entry.ap_small,
                ap_medium=entry.ap_medium,
                ap_large=entry.ap_large,
            )
            for entry in dto.per_class
        },
        previous_classes=frozenset(dto.previous_classes),
        current_classes=frozenset(dto.current_classes),
        stage=dto.stage,
    )
