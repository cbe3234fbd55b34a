"""
Annotation readers and writers.

ICDAR 2015 text: one ``x1,y1,...,x4,y4,transcription`` quadrangle per line,
``###`` marking don't-care words. Canonical JSON:
``{"image_id": str, "instances": [{"points": [[x, y], ...], "ignore": bool, "transcription": str|null}]}``.
"""

import json
from pathlib import Path

from pydantic import ValidationError

from app.core.errors import AnnotationParseError
from app.schema.annotation import (
    AnnotationFile,
    Detection,
    DetectionFile,
    SourceFormat,
    TextInstance,
)

__all__ = (
    "dump_detection_json",
    "dump_polygon_json",
    "load_annotation_dir",
    "load_annotation_file",
    "load_detection_file",
    "parse_icdar15",
    "parse_polygon_json",
)

DONT_CARE = "###"
BOM = "\ufeff"


def parse_icdar15(text: str, image_id: str = "") -> AnnotationFile:
    instances = []
    for lineno, raw in enumerate(text.removeprefix(BOM).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) < 8:
            raise AnnotationParseError(f"expected 8 coordinates, got {len(fields)} fields", line=lineno)
        try:
            coords = [float(v) for v in fields[:8]]
        except ValueError:
            raise AnnotationParseError(f"non-numeric coordinate in {fields[:8]}", line=lineno) from None
        transcription = ",".join(fields[8:]).strip() or None
        try:
            instances.append(
                TextInstance(
                    points=list(zip(coords[0::2], coords[1::2], strict=True)),
                    ignore=transcription == DONT_CARE,
                    transcription=transcription,
                )
            )
        except ValidationError as e:
            raise AnnotationParseError(f"invalid quadrangle: {e.errors()[0]['msg']}", line=lineno) from None
    return AnnotationFile(image_id=image_id, instances=instances, source_format=SourceFormat.icdar15)


def _error_path(e: ValidationError) -> str:
    first = e.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "$"


def parse_polygon_json(text: str, image_id: str | None = None) -> AnnotationFile:
    try:
        ann = AnnotationFile.model_validate_json(text.removeprefix(BOM))
    except ValidationError as e:
        raise AnnotationParseError(e.errors()[0]["msg"], path=_error_path(e)) from None
    if image_id and not ann.image_id:
        ann.image_id = image_id
    return ann


def dump_polygon_json(ann: AnnotationFile) -> str:
    payload: dict = {"image_id": ann.image_id}
    if ann.width is not None and ann.height is not None:
        payload["width"] = ann.width
        payload["height"] = ann.height
    payload["instances"] = [
        {"points": [[x, y] for x, y in inst.points], "ignore": inst.ignore, "transcription": inst.transcription}
        for inst in ann.instances
    ]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def dump_detection_json(detections: DetectionFile) -> str:
    return detections.model_dump_json(indent=2) + "\n"


def load_annotation_file(path: Path) -> AnnotationFile:
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix == ".json":
            return parse_polygon_json(text, image_id=path.stem)
        return parse_icdar15(text, image_id=path.stem)
    except AnnotationParseError as e:
        raise AnnotationParseError(f"{path}: {e.reason}", line=e.line, path=e.path) from None


def load_annotation_dir(directory: Path) -> list[AnnotationFile]:
    """Every ``.json`` (canonical) and ``.txt`` (ICDAR 2015) file, sorted by name."""
    if not directory.is_dir():
        raise AnnotationParseError("annotation directory not found", path=str(directory))
    files = sorted(p for p in directory.iterdir() if p.suffix in (".json", ".txt"))
    return [load_annotation_file(p) for p in files]


def load_detection_file(path: Path) -> DetectionFile:
    """
    Read a detections file; annotation files are accepted too, every instance
    becoming a detection with score 1.
    """
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json" and '"detections"' in text:
        try:
            found = DetectionFile.model_validate_json(text)
        except ValidationError as e:
            raise AnnotationParseError(f"{path}: {e.errors()[0]['msg']}", path=_error_path(e)) from None
        found.image_id = found.image_id or path.stem
        return found

    ann = load_annotation_file(path)
    return DetectionFile(
        image_id=ann.image_id,
        detections=[Detection(points=inst.points, score=1.0) for inst in ann.instances],
    )
