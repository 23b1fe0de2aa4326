"""
Detection stream adapter.

Text format, UTF-8, one detection per line, fixed field order:

    image_id x y w h score class_id

Fields are separated by whitespace or commas. Blank lines and lines starting
with '#' are ignored. Query indices are not part of the format; they are
assigned per image in file order.
"""

import logging
import re
from collections import defaultdict
from collections.abc import Iterable
from pathlib import Path

from src.shared.domain.exceptions import (
    DomainError,
    InvalidDetectionError,
    MalformedRecordError,
)
from src.shared.domain.repositories.detection_stream_repository import (
    DetectionStreamRepository,
)
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection

logger = logging.getLogger(__name__)

_SEPARATOR = re.compile(r"[\s,]+")
_FIELDS = 7


def parse_record(line: str, line_number: int, query_index: int) -> Detection:
    """
    Parse one stream record.

    Raises:
        MalformedRecordError: On wrong field count, non-numeric fields or
            values rejected by BBox / Detection
    """
    fields = [f for f in _SEPARATOR.split(line.strip()) if f]
    if len(fields) != _FIELDS:
        raise MalformedRecordError(line_number, f"expected {_FIELDS} fields, got {len(fields)}")
    try:
        image_id = int(fields[0])
        x, y, w, h, score = (float(f) for f in fields[1:6])
        class_id = int(fields[6])
    except ValueError as e:
        raise MalformedRecordError(line_number, str(e)) from e

    try:
        return Detection(
            bbox=BBox(x, y, w, h),
            score=score,
            class_id=class_id,
            query_index=query_index,
            image_id=image_id,
        )
    except DomainError as e:
        raise MalformedRecordError(line_number, str(e)) from e


def format_record(detection: Detection) -> str:
    if detection.image_id is None:
        raise InvalidDetectionError("Detection without image_id cannot be streamed")
    b = detection.bbox
    return (
        f"{detection.image_id} {b.x:.10g} {b.y:.10g} {b.w:.10g} {b.h:.10g} "
        f"{detection.score:.10g} {detection.class_id}"
    )


class TextDetectionStreamRepository(DetectionStreamRepository):
    def load(self, path: Path) -> list[Detection]:
        detections: list[Detection] = []
        next_query: defaultdict[str, int] = defaultdict(int)
        with path.open(encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                image_key = _SEPARATOR.split(stripped, maxsplit=1)[0]
                detection = parse_record(stripped, line_number, next_query[image_key])
                next_query[image_key] += 1
                detections.append(detection)
        logger.debug("Loaded %d detections from %s", len(detections), path)
        return detections

    def save(self, detections: Iterable[Detection], path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [format_record(d) for d in detections]
        path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
