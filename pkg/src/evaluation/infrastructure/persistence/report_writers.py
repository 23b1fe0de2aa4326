"""
File and text renderings of evaluation reports.

Text tables show AP in percent with one decimal, undefined values as "-".
"""

import csv
from collections.abc import Mapping
from pathlib import Path

from src.evaluation.domain.value_objects.eval_report import RECALL_POINTS, EvalReport
from src.evaluation.infrastructure.persistence.eval_report_mapper import to_persistence


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{100.0 * value:.1f}"


def render_table(report: EvalReport, names: Mapping[int, str] | None = None) -> str:
    """Aligned per-class table followed by the aggregate metrics."""
    names = names or {}
    header = ("class", "group", "n_gt", "AP", "AP50", "AP75", "APs", "APm", "APl")
    rows: list[tuple[str, ...]] = [header]
    for class_id, r in sorted(report.per_class.items()):
        group = "P" if class_id in report.previous_classes else "C"
        rows.append(
            (
                names.get(class_id, str(class_id)),
                group,
                str(r.num_gt),
                _pct(r.ap),
                _pct(r.ap50),
                _pct(r.ap75),
                _pct(r.ap_small),
                _pct(r.ap_medium),
                _pct(r.ap_large),
            )
        )

    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = [
        "  ".join(
            cell.ljust(widths[i]) if i < 2 else cell.rjust(widths[i]) for i, cell in enumerate(row)
        ).rstrip()
        for row in rows
    ]

    summary = report.summary()
    key_width = max(len(k) for k in summary)
    lines.append("")
    lines.extend(f"{key.ljust(key_width)}  {_pct(value)}" for key, value in summary.items())
    return "\n".join(lines) + "\n"


def write_report_json(
    report: EvalReport, path: Path, names: Mapping[int, str] | None = None
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_persistence(report, names).model_dump_json(indent=2), encoding="utf-8")


def write_pr_curves(report: EvalReport, path: Path) -> None:
    """CSV with one row per (class, recall point): precision at IoU 0.50."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("class_id", "recall", "precision"))
        for class_id, r in sorted(report.per_class.items()):
            if r.pr_curve is None:
                continue
            for recall, precision in zip(RECALL_POINTS, r.pr_curve, strict=True):
                writer.writerow((class_id, f"{recall:.2f}", f"{precision:.6f}"))
