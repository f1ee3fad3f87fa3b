"""Attack-vector themes and prevalence reports.

Turns raw categorical rows into combination frequency tables (with
coverage curves) and turns fitted cluster models into tagged training
themes. The mode->tag rules live in a JSON config so operators can steer
training content without touching code.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .cluster import ClusterModel
from .schema import FeatureSchema, SchemaError


class ThemeError(ValueError):
    pass


def _schema_for(vectors, schema: FeatureSchema | None) -> FeatureSchema:
    """Explicit schema, else the default one when the vectors fit it,
    else a schema inferred from the vectors."""
    if schema is not None:
        return schema
    default = FeatureSchema.default()
    try:
        for v in vectors:
            default.validate_vector(v)
        return default
    except SchemaError:
        return FeatureSchema.from_rows(list(vectors))


@dataclass(frozen=True)
class CombinationStats:
    total_rows: int
    combos: tuple[tuple[tuple[str, ...], int], ...]

    def observed(self) -> int:
        return len(self.combos)


@dataclass(frozen=True)
class Theme:
    theme_id: str
    source_cluster: int
    mode: tuple[str, ...]
    count: int
    tags: tuple[str, ...]

    def to_dict(self, schema: FeatureSchema | None = None) -> dict:
        schema = schema or FeatureSchema.default()
        return {
            "theme_id": self.theme_id,
            "source_cluster": self.source_cluster,
            "mode": schema.to_mapping(self.mode),
            "count": self.count,
            "tags": list(self.tags),
        }


# feature -> value -> tag; encodes the two observations the clustering
# surfaces most strongly (NETWORK prevalence, REQUIRED user action) plus
# the high-impact dimensions.
DEFAULT_TAG_MAP: dict[str, dict[str, str]] = {
    "attack_vector": {"NETWORK": "network-attack-vector"},
    "privileges_required": {"NONE": "no-privileges-needed"},
    "user_interaction": {"REQUIRED": "user-interaction-required"},
    "confidentiality_impact": {"HIGH": "confidentiality-impact-high"},
    "integrity_impact": {"HIGH": "integrity-impact-high"},
    "availability_impact": {"HIGH": "availability-impact-high"},
}


def load_tag_map(path) -> dict[str, dict[str, str]]:
    with open(path, "r", encoding="utf-8") as fh:
        tag_map = json.load(fh)
    if not isinstance(tag_map, dict) or not all(
        isinstance(rules, dict) for rules in tag_map.values()
    ):
        raise ThemeError("tag map must be a {feature: {value: tag}} object")
    return tag_map


def tags_for_mode(mode, tag_map: dict[str, dict[str, str]],
                  schema: FeatureSchema | None = None) -> tuple[str, ...]:
    """Tags triggered by a mode, in canonical feature order."""
    schema = _schema_for([mode], schema)
    mapping = schema.to_mapping(mode)
    tags = []
    for name in schema.names:
        tag = tag_map.get(name, {}).get(mapping[name])
        if tag is not None:
            tags.append(tag)
    return tuple(tags)


def combination_stats(rows, schema: FeatureSchema | None = None) -> CombinationStats:
    """Exact frequency table of distinct vectors, most common first."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return CombinationStats(total_rows=0, combos=())
    schema = _schema_for(rows, schema)
    counts = Counter(rows)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], schema.sort_key(kv[0])))
    return CombinationStats(total_rows=len(rows), combos=tuple(ordered))


def coverage_top_m(stats: CombinationStats, m: int) -> float:
    """Fraction of rows covered by the m most frequent combinations."""
    if m < 0:
        raise ThemeError("m must be non-negative")
    if stats.total_rows == 0:
        raise ThemeError("coverage is undefined for an empty row set")
    covered = sum(count for _, count in stats.combos[:m])
    return covered / stats.total_rows


def combos_report(rows, schema: FeatureSchema | None = None) -> dict:
    """Plottable report: product-space size, observed combos, coverage curve."""
    schema = schema or FeatureSchema.default()
    stats = combination_stats(rows, schema=schema)
    curve = []
    if stats.total_rows > 0:
        curve = [[m, coverage_top_m(stats, m)] for m in range(stats.observed() + 1)]
    return {
        "possible": schema.possible_combinations(),
        "observed": stats.observed(),
        "total_rows": stats.total_rows,
        "coverage_curve": curve,
        "combos": [
            {"vector": schema.to_mapping(vec), "count": count}
            for vec, count in stats.combos
        ],
    }


def profile_clusters(model: ClusterModel, rows,
                     schema: FeatureSchema | None = None):
    """Per-cluster (mode, count), most populated first."""
    if len(model.assignments) != len(rows):
        raise ThemeError(
            f"model covers {len(model.assignments)} rows, got {len(rows)}"
        )
    schema = _schema_for(model.modes, schema)
    counts = [0] * model.k
    for a in model.assignments:
        counts[a] += 1
    profile = list(zip(model.modes, counts))
    profile.sort(key=lambda mc: (-mc[1], schema.sort_key(mc[0])))
    return profile


def themes_from_model(model: ClusterModel, rows,
                      tag_map: dict[str, dict[str, str]] | None = None,
                      schema: FeatureSchema | None = None) -> list[Theme]:
    """One tagged Theme per non-empty cluster, most populated first."""
    if len(model.assignments) != len(rows):
        raise ThemeError(
            f"model covers {len(model.assignments)} rows, got {len(rows)}"
        )
    schema = _schema_for(model.modes, schema)
    tag_map = DEFAULT_TAG_MAP if tag_map is None else tag_map
    counts = [0] * model.k
    for a in model.assignments:
        counts[a] += 1
    themes = [
        Theme(
            theme_id=f"theme-{c:02d}",
            source_cluster=c,
            mode=model.modes[c],
            count=counts[c],
            tags=tags_for_mode(model.modes[c], tag_map, schema=schema),
        )
        for c in range(model.k)
        if counts[c] > 0
    ]
    themes.sort(key=lambda t: (-t.count, schema.sort_key(t.mode)))
    return themes
