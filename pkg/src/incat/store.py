"""File-backed pipeline store: append-only JSONL collections.

Every mutation rewrites the target collection to a temp file and renames
it into place, so a crash can never leave a half-written line. All writes
funnel through one lock; reads see a committed prefix.
"""
from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from .assess import Assessment, ResponseSet
from .cluster import ClusterModel
from .nvd import CveRecord, record_from_dict, record_to_dict
from .schema import FeatureSchema

SCHEMA_VERSION = 1
COLLECTIONS = (
    "records",
    "models",
    "themes",
    "corpora",
    "mentions",
    "assessments",
    "responses",
    "reports",
)


class StoreError(RuntimeError):
    pass


class Store:
    """One directory, one JSONL file per collection, plus a manifest."""

    def __init__(self, root):
        self.root = Path(root)
        self._lock = threading.Lock()
        self.root.mkdir(parents=True, exist_ok=True)
        manifest = self.root / "manifest.json"
        if manifest.exists():
            with manifest.open("r", encoding="utf-8") as fh:
                data = json.load(fh)
            if data.get("schema_version") != SCHEMA_VERSION:
                raise StoreError(
                    f"store schema version {data.get('schema_version')} "
                    f"does not match expected {SCHEMA_VERSION}"
                )
        else:
            self._atomic_write(manifest, json.dumps(
                {"schema_version": SCHEMA_VERSION, "collections": list(COLLECTIONS)},
                indent=2,
            ).encode("utf-8") + b"\n")

    def _path(self, collection: str) -> Path:
        if collection not in COLLECTIONS:
            raise StoreError(f"unknown collection {collection!r}")
        return self.root / f"{collection}.jsonl"

    def _atomic_write(self, path: Path, payload: bytes) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        fd = os.open(tmp, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o644)
        try:
            os.write(fd, payload)
            os.fsync(fd)
        finally:
            os.close(fd)
        os.replace(tmp, path)

    def append(self, collection: str, obj: dict) -> None:
        self.append_many(collection, [obj])

    def append_many(self, collection: str, objs) -> None:
        path = self._path(collection)
        new_lines = b"".join(
            json.dumps(o, ensure_ascii=False).encode("utf-8") + b"\n" for o in objs
        )
        with self._lock:
            existing = path.read_bytes() if path.exists() else b""
            self._atomic_write(path, existing + new_lines)

    def read_all(self, collection: str) -> list[dict]:
        path = self._path(collection)
        if not path.exists():
            return []
        out = []
        with path.open("r", encoding="utf-8") as fh:
            for n, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    out.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise StoreError(f"{path.name}:{n}: corrupt line: {exc}") from exc
        return out

    def last(self, collection: str) -> dict | None:
        rows = self.read_all(collection)
        return rows[-1] if rows else None

    def count(self, collection: str) -> int:
        return len(self.read_all(collection))


# Collection-level conventions shared by the CLI and the HTTP service:
# records/corpora/mentions/responses accumulate one object per line;
# models/themes/reports append full snapshots, last line is current.


def add_records(store: Store, records, schema: FeatureSchema | None = None) -> None:
    store.append_many("records", [record_to_dict(r, schema) for r in records])


def all_records(store: Store, schema: FeatureSchema | None = None) -> list[CveRecord]:
    return [record_from_dict(d, schema) for d in store.read_all("records")]


def add_model(store: Store, model: ClusterModel) -> None:
    store.append("models", model.to_dict())


def latest_model(store: Store) -> ClusterModel | None:
    data = store.last("models")
    return ClusterModel.from_dict(data) if data else None


def set_themes(store: Store, themes, schema: FeatureSchema | None = None) -> None:
    store.append("themes", {"themes": [t.to_dict(schema) for t in themes]})


def current_themes(store: Store) -> list[dict]:
    data = store.last("themes")
    return list(data["themes"]) if data else []


def add_report(store: Store, kind: str, report: dict) -> None:
    store.append("reports", {"kind": kind, "report": report})


def latest_report(store: Store, kind: str) -> dict | None:
    found = None
    for entry in store.read_all("reports"):
        if entry.get("kind") == kind:
            found = entry["report"]
    return found


def add_assessment(store: Store, assessment: Assessment) -> None:
    store.append("assessments", assessment.to_dict())


def find_assessment(store: Store, assessment_id: str) -> Assessment | None:
    found = None
    for data in store.read_all("assessments"):
        if data.get("assessment_id") == assessment_id:
            found = data
    return Assessment.from_dict(found) if found else None


def all_assessments(store: Store) -> dict[str, Assessment]:
    table: dict[str, Assessment] = {}
    for data in store.read_all("assessments"):
        a = Assessment.from_dict(data)
        table[a.assessment_id] = a
    return table


def add_response(store: Store, resp: ResponseSet) -> int:
    """Persist a response; returns its sequence number in the collection."""
    seq = store.count("responses")
    store.append("responses", resp.to_dict())
    return seq


def all_responses(store: Store) -> list[ResponseSet]:
    return [ResponseSet.from_dict(d) for d in store.read_all("responses")]
