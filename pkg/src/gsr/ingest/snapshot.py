"""Line-delimited snapshot files: one header line, then one record per line."""
from __future__ import annotations

import datetime as dt
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from gsr.model import PaperRecord, RecordRejected, validate_record

SCHEMA_VERSION = "1"
PathLike = Union[str, "os.PathLike[str]"]


class SnapshotError(Exception):
    pass


class IoFailure(SnapshotError):
    pass


class SchemaVersionMismatch(SnapshotError):
    pass


class CorruptLine(SnapshotError):
    def __init__(self, path: PathLike, line_number: int, reason: str):
        super().__init__(f"{path}:{line_number}: {reason}")
        self.line_number = line_number


@dataclass(frozen=True)
class Snapshot:
    venue_id: str
    retrieval_date: dt.date
    records: tuple[PaperRecord, ...] = ()

    def __post_init__(self):
        stray = {r.venue_id for r in self.records} - {self.venue_id}
        if stray:
            raise ValueError(f"snapshot for {self.venue_id!r} holds records of {sorted(stray)}")

    @property
    def retrieval_year(self) -> int:
        return self.retrieval_date.year


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def snapshot_filename(venue_id: str) -> str:
    return re.sub(r"[^0-9A-Za-z._-]+", "_", venue_id) + ".jsonl"


def write_snapshot(snapshot: Snapshot, path: PathLike) -> Path:
    path = Path(path)
    for record in snapshot.records:
        validate_record(record)
    header = {
        "schema_version": SCHEMA_VERSION,
        "venue_id": snapshot.venue_id,
        "retrieval_date": snapshot.retrieval_date.isoformat(),
    }
    lines = [_dumps(header)] + [_dumps(r.to_dict()) for r in snapshot.records]
    tmp = path.with_name(path.name + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def read_snapshot(path: PathLike) -> Snapshot:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    lines = text.split("\n")
    # a well-formed file ends with a newline, leaving one empty tail element
    if lines and lines[-1] == "":
        lines.pop()
    elif lines:
        raise CorruptLine(path, len(lines), "truncated line (no trailing newline)")
    if not lines:
        raise CorruptLine(path, 1, "missing header")

    try:
        header = json.loads(lines[0])
        version = header["schema_version"]
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptLine(path, 1, f"bad header: {exc}") from exc
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"{path}: schema_version {version!r}, expected {SCHEMA_VERSION!r}")
    try:
        venue_id = header["venue_id"]
        retrieval_date = dt.date.fromisoformat(header["retrieval_date"])
    except (KeyError, ValueError) as exc:
        raise CorruptLine(path, 1, f"bad header: {exc}") from exc

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            record = validate_record(PaperRecord.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError, RecordRejected) as exc:
            raise CorruptLine(path, lineno, str(exc)) from exc
        records.append(record)
    try:
        return Snapshot(venue_id, retrieval_date, tuple(records))
    except ValueError as exc:
        raise CorruptLine(path, 1, str(exc)) from exc


def read_snapshots(paths: Iterable[PathLike]) -> list[Snapshot]:
    return [read_snapshot(p) for p in paths]
