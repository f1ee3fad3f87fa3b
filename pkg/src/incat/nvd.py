"""NVD JSON 1.0 feed ingestion.

Parses `CVE_Items` entries into normalized records: the CVE id, the first
English description, the publication date, and (when the analyzed CVSS v3
base metrics are complete) the 7-field categorical vector used for
clustering. Items with metric values outside the schema domains are
rejected rather than coerced.
"""
from __future__ import annotations

import gzip
import json
import re
from dataclasses import dataclass

from .schema import FeatureSchema, SchemaError

CVE_ID_RE = re.compile(r"^CVE-\d{4}-\d{4,}$")

# NVD feed key -> schema feature name, in canonical feature order.
CVSS_FIELD_KEYS = (
    ("attackVector", "attack_vector"),
    ("attackComplexity", "attack_complexity"),
    ("privilegesRequired", "privileges_required"),
    ("userInteraction", "user_interaction"),
    ("confidentialityImpact", "confidentiality_impact"),
    ("integrityImpact", "integrity_impact"),
    ("availabilityImpact", "availability_impact"),
)


class FeedError(ValueError):
    """Structural problem with a feed (bad JSON, missing CVE_Items)."""


@dataclass(frozen=True)
class CveRecord:
    id: str
    description: str
    base_metrics: tuple[str, ...] | None = None
    published: str | None = None


@dataclass(frozen=True)
class RejectedItem:
    """One feed item that could not become a record, with the offending field."""

    id: str | None
    field: str | None
    reason: str


@dataclass(frozen=True)
class ParseResult:
    records: list[CveRecord]
    rejects: list[RejectedItem]

    @property
    def with_metrics(self) -> list[CveRecord]:
        return [r for r in self.records if r.base_metrics is not None]


def _decode_feed(feed_bytes: bytes) -> dict:
    if feed_bytes[:2] == b"\x1f\x8b":
        feed_bytes = gzip.decompress(feed_bytes)
    text = feed_bytes.decode("utf-8")
    try:
        feed = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_offset = len(text[: exc.pos].encode("utf-8"))
        raise FeedError(f"malformed JSON at byte {byte_offset}: {exc.msg}") from exc
    if not isinstance(feed, dict) or "CVE_Items" not in feed:
        raise FeedError("feed has no CVE_Items array")
    items = feed["CVE_Items"]
    if not isinstance(items, list):
        raise FeedError("CVE_Items is not an array")
    return feed


def _first_english_description(cve: dict) -> str | None:
    entries = (cve.get("description") or {}).get("description_data") or []
    for entry in entries:
        if entry.get("lang", "en") == "en" and entry.get("value"):
            return entry["value"]
    return None


def _extract_metrics(item: dict, schema: FeatureSchema):
    """Return (vector|None, reject_field|None).

    Missing BM3 or missing individual fields -> (None, None): the record is
    kept for text analysis only. A present field outside its domain ->
    (None, field): the whole item is rejected.
    """
    impact = item.get("impact") or {}
    bm3 = impact.get("baseMetricV3") or impact.get("baseMetricV31")
    if not bm3:
        return None, None
    cvss = bm3.get("cvssV3") or bm3.get("cvssV31") or {}
    values = {}
    for feed_key, feature in CVSS_FIELD_KEYS:
        raw = cvss.get(feed_key)
        if raw is None:
            return None, None
        values[feature] = str(raw).upper()
    try:
        return schema.vector_from_mapping(values), None
    except SchemaError:
        for feed_key, feature in CVSS_FIELD_KEYS:
            if values[feature] not in schema.domain(feature):
                return None, feature
        raise


def parse_nvd_feed(feed_bytes: bytes, schema: FeatureSchema | None = None) -> ParseResult:
    """Parse an NVD JSON 1.0 feed into records plus a rejects list.

    Every CVE_Items entry lands in exactly one bucket: a record with
    metrics, a record without metrics, or a reject.
    """
    schema = schema or FeatureSchema.default()
    feed = _decode_feed(feed_bytes)

    records: list[CveRecord] = []
    rejects: list[RejectedItem] = []
    for item in feed["CVE_Items"]:
        cve = item.get("cve") or {}
        cve_id = (cve.get("CVE_data_meta") or {}).get("ID")
        if not cve_id or not CVE_ID_RE.match(cve_id):
            rejects.append(RejectedItem(cve_id, "id", "missing or malformed CVE id"))
            continue
        description = _first_english_description(cve)
        if description is None or not description.strip():
            rejects.append(RejectedItem(cve_id, "description", "no non-empty English description"))
            continue
        metrics, bad_field = _extract_metrics(item, schema)
        if bad_field is not None:
            rejects.append(
                RejectedItem(cve_id, bad_field, f"value outside domain of {bad_field}")
            )
            continue
        records.append(
            CveRecord(
                id=cve_id,
                description=description,
                base_metrics=metrics,
                published=item.get("publishedDate"),
            )
        )
    return ParseResult(records, rejects)


def categorical_matrix(records, schema: FeatureSchema | None = None):
    """Order-preserving (ids, rows) for the records that carry base metrics."""
    schema = schema or FeatureSchema.default()
    ids: list[str] = []
    rows: list[tuple[str, ...]] = []
    for record in records:
        if record.base_metrics is None:
            continue
        ids.append(record.id)
        rows.append(schema.validate_vector(record.base_metrics))
    return ids, rows


def record_to_dict(record: CveRecord, schema: FeatureSchema | None = None) -> dict:
    schema = schema or FeatureSchema.default()
    metrics = None
    if record.base_metrics is not None:
        metrics = schema.to_mapping(record.base_metrics)
    return {
        "id": record.id,
        "description": record.description,
        "metrics": metrics,
        "published": record.published,
    }


def record_from_dict(data: dict, schema: FeatureSchema | None = None) -> CveRecord:
    schema = schema or FeatureSchema.default()
    metrics = data.get("metrics")
    vector = schema.vector_from_mapping(metrics) if metrics is not None else None
    return CveRecord(
        id=data["id"],
        description=data["description"],
        base_metrics=vector,
        published=data.get("published"),
    )


def write_records_jsonl(records, path, schema: FeatureSchema | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record, schema), ensure_ascii=False) + "\n")


def read_records_jsonl(path, schema: FeatureSchema | None = None) -> list[CveRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line), schema))
    return records
