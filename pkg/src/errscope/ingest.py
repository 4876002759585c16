"""Loading and validation of prediction files (wide CSV and JSON)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .exceptions import (
    DuplicateModelName,
    LengthMismatch,
    MalformedHeader,
    NonFinite,
    NonNumeric,
    UnknownModel,
)
from .metrics import ErrorVector, compute_errors


@dataclass(frozen=True)
class PredictionSet:
    """Ground truth plus named per-model prediction columns.

    Model column order is significant and preserved from the source file.
    Instance ids are opaque; duplicates are legal but worth a warning.
    """

    instance_ids: tuple[str, ...]
    y_true: tuple[float, ...]
    models: dict[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        validate_prediction_set(self)

    @property
    def n(self) -> int:
        return len(self.y_true)

    @property
    def model_names(self) -> list[str]:
        return list(self.models.keys())

    def duplicate_ids(self) -> list[str]:
        """Instance ids that occur more than once, in first-seen order."""
        seen, dups = set(), []
        for iid in self.instance_ids:
            if iid in seen and iid not in dups:
                dups.append(iid)
            seen.add(iid)
        return dups

    def to_csv(self) -> str:
        """Canonical wide-CSV serialization (parse is its left inverse)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "y_true"] + self.model_names)
        for i in range(self.n):
            row = [self.instance_ids[i], repr(self.y_true[i])]
            row += [repr(self.models[m][i]) for m in self.model_names]
            writer.writerow(row)
        return buf.getvalue()

    def to_json(self) -> str:
        instances = [
            {
                "id": self.instance_ids[i],
                "y_true": self.y_true[i],
                "predictions": {m: self.models[m][i] for m in self.model_names},
            }
            for i in range(self.n)
        ]
        return json.dumps({"instances": instances})


def validate_prediction_set(ps: PredictionSet) -> None:
    n = len(ps.y_true)
    if n < 1:
        raise LengthMismatch("prediction set must contain at least one instance")
    if len(ps.instance_ids) != n:
        raise LengthMismatch(
            f"{len(ps.instance_ids)} ids for {n} target values"
        )
    if not ps.models:
        raise MalformedHeader("at least one model column is required")
    for name, preds in ps.models.items():
        if not name:
            raise DuplicateModelName("model names must be non-empty")
        if len(preds) != n:
            raise LengthMismatch(
                f"model {name!r} has {len(preds)} predictions for {n} instances"
            )
    for label, values in [("y_true", ps.y_true)] + list(ps.models.items()):
        for i, v in enumerate(values):
            if not math.isfinite(v):
                raise NonFinite(f"non-finite value in {label!r} at instance {i}")


def _parse_cell(text: str, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonNumeric(
            f"cannot parse {text!r} as a number (row {row}, column {column!r})"
        ) from None
    if not math.isfinite(value):
        raise NonFinite(f"non-finite value {text!r} (row {row}, column {column!r})")
    return value


def _parse_csv(text: str) -> PredictionSet:
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedHeader("empty file") from None
    if len(header) < 3 or header[0] != "id" or header[1] != "y_true":
        raise MalformedHeader(
            "header must be 'id,y_true,<model>...', got " + ",".join(header)
        )
    model_names = header[2:]
    if len(set(model_names)) != len(model_names):
        dupes = sorted({m for m in model_names if model_names.count(m) > 1})
        raise DuplicateModelName(f"duplicate model column(s): {', '.join(dupes)}")

    ids: list[str] = []
    y_true: list[float] = []
    columns: list[list[float]] = [[] for _ in model_names]
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise LengthMismatch(
                f"row {lineno} has {len(row)} cells, expected {len(header)}"
            )
        ids.append(row[0])
        y_true.append(_parse_cell(row[1], lineno, "y_true"))
        for j, name in enumerate(model_names):
            columns[j].append(_parse_cell(row[2 + j], lineno, name))
    return PredictionSet(
        instance_ids=tuple(ids),
        y_true=tuple(y_true),
        models={m: tuple(col) for m, col in zip(model_names, columns)},
    )


def _parse_json(text: str) -> PredictionSet:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedHeader(f"invalid JSON: {exc}") from None
    instances = payload.get("instances") if isinstance(payload, dict) else None
    if not isinstance(instances, list) or not instances:
        raise MalformedHeader("JSON must contain a non-empty 'instances' array")

    first = instances[0]
    model_names = list(first.get("predictions", {}).keys())
    if not model_names:
        raise MalformedHeader("instances must carry a non-empty 'predictions' map")

    ids, y_true = [], []
    columns: dict[str, list[float]] = {m: [] for m in model_names}
    for i, inst in enumerate(instances):
        preds = inst.get("predictions", {})
        if list(preds.keys()) != model_names and set(preds) != set(model_names):
            raise LengthMismatch(
                f"instance {i} lists a different model set than instance 0"
            )
        ids.append(str(inst.get("id", i)))
        y = inst.get("y_true")
        if not isinstance(y, (int, float)) or isinstance(y, bool):
            raise NonNumeric(f"instance {i}: y_true is not a number")
        y_true.append(float(y))
        for m in model_names:
            v = preds[m]
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise NonNumeric(f"instance {i}: prediction {m!r} is not a number")
            columns[m].append(float(v))
    return PredictionSet(
        instance_ids=tuple(ids),
        y_true=tuple(y_true),
        models={m: tuple(col) for m, col in columns.items()},
    )


def parse_predictions(content: bytes | str, format: str = "csv") -> PredictionSet:
    """Parse raw file content into a validated PredictionSet.

    Column order of models is preserved; rows are kept in file order.
    """
    text = content.decode("utf-8") if isinstance(content, bytes) else content
    if format == "csv":
        return _parse_csv(text)
    if format == "json":
        return _parse_json(text)
    raise ValueError(f"unknown format {format!r}")


def select_pair(ps: PredictionSet, name_a: str, name_b: str) -> tuple[ErrorVector, ErrorVector]:
    """Error vectors for two named models (A drawn on x, B on y downstream)."""
    for name in (name_a, name_b):
        if name not in ps.models:
            raise UnknownModel(name)
    return (
        compute_errors(ps.y_true, ps.models[name_a], model_name=name_a),
        compute_errors(ps.y_true, ps.models[name_b], model_name=name_b),
    )
