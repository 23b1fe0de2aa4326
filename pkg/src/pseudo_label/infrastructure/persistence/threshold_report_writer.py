import csv
from pathlib import Path

from src.pseudo_label.domain.value_objects.threshold_table import ThresholdTable

REPORT_COLUMNS = ("class_id", "tau", "provenance", "bank_size", "mu_low", "mu_high")


def threshold_rows(table: ThresholdTable) -> list[dict[str, str]]:
    """Report rows in ascending class order; cluster means are blank unless clustered."""
    rows: list[dict[str, str]] = []
    for entry in table:
        rows.append(
            {
                "class_id": str(entry.class_id),
                "tau": f"{entry.tau:.6f}",
                "provenance": entry.provenance.value,
                "bank_size": str(entry.bank_size),
                "mu_low": "" if entry.mu_low is None else f"{entry.mu_low:.6f}",
                "mu_high": "" if entry.mu_high is None else f"{entry.mu_high:.6f}",
            }
        )
    return rows


def write_threshold_report(table: ThresholdTable, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=REPORT_COLUMNS)
        writer.writeheader()
        writer.writerows(threshold_rows(table))
