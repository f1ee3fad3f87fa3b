"""Vulnerability-description type system and pre-annotation dictionaries.

The type system is a single-parent entity hierarchy (a forest) plus typed
relations; it is entirely file-driven so richer ontology revisions can be
swapped in. Dictionaries map entity types to surface-form gazetteers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources


class TypeSystemError(ValueError):
    pass


# gazetteer shape: entity type name -> surface forms
Dictionary = dict[str, list[str]]


@dataclass(frozen=True)
class EntityType:
    name: str
    parent: str | None = None
    description: str = ""


@dataclass(frozen=True)
class RelationType:
    name: str
    domain: str
    range: str
    description: str = ""


@dataclass(frozen=True)
class TypeSystem:
    entity_types: tuple[EntityType, ...]
    relation_types: tuple[RelationType, ...] = field(default=())

    def __post_init__(self) -> None:
        names = [e.name for e in self.entity_types]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise TypeSystemError(f"duplicate entity types: {', '.join(dupes)}")
        by_name = {e.name: e for e in self.entity_types}
        for e in self.entity_types:
            if e.parent is not None and e.parent not in by_name:
                raise TypeSystemError(
                    f"entity {e.name!r} references unknown parent {e.parent!r}"
                )
        # cycle detection along parent links
        for e in self.entity_types:
            seen = [e.name]
            cur = e.parent
            while cur is not None:
                if cur in seen:
                    cycle = " -> ".join(seen[seen.index(cur):] + [cur])
                    raise TypeSystemError(f"parent cycle: {cycle}")
                seen.append(cur)
                cur = by_name[cur].parent
        rel_names = [r.name for r in self.relation_types]
        if len(set(rel_names)) != len(rel_names):
            raise TypeSystemError("duplicate relation names")
        for r in self.relation_types:
            for ref, label in ((r.domain, "domain"), (r.range, "range")):
                if ref not in by_name:
                    raise TypeSystemError(
                        f"relation {r.name!r} references unknown {label} {ref!r}"
                    )

    def entity(self, name: str) -> EntityType:
        for e in self.entity_types:
            if e.name == name:
                return e
        raise TypeSystemError(f"unknown entity type {name!r}")

    def relation(self, name: str) -> RelationType:
        for r in self.relation_types:
            if r.name == name:
                return r
        raise TypeSystemError(f"unknown relation type {name!r}")

    def has_entity(self, name: str) -> bool:
        return any(e.name == name for e in self.entity_types)

    def to_dict(self) -> dict:
        return {
            "entities": [
                {"name": e.name, "parent": e.parent, "desc": e.description}
                for e in self.entity_types
            ],
            "relations": [
                {"name": r.name, "domain": r.domain, "range": r.range, "desc": r.description}
                for r in self.relation_types
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TypeSystem":
        entities = tuple(
            EntityType(e["name"], e.get("parent"), e.get("desc", ""))
            for e in data.get("entities", [])
        )
        relations = tuple(
            RelationType(r["name"], r["domain"], r["range"], r.get("desc", ""))
            for r in data.get("relations", [])
        )
        return cls(entities, relations)


def load_type_system(path=None) -> TypeSystem:
    """Load and validate a type-system JSON file (the bundled one by default)."""
    if path is None:
        with resources.files("incat.data").joinpath("type_system.json").open(
            "r", encoding="utf-8"
        ) as fh:
            return TypeSystem.from_dict(json.load(fh))
    with open(path, "r", encoding="utf-8") as fh:
        return TypeSystem.from_dict(json.load(fh))


def save_type_system(ts: TypeSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ts.to_dict(), fh, indent=2)
        fh.write("\n")


def is_subtype(ts: TypeSystem, child: str, ancestor: str) -> bool:
    """True iff ancestor is reachable from child via parent links (reflexive)."""
    ts.entity(ancestor)
    cur: str | None = ts.entity(child).name
    while cur is not None:
        if cur == ancestor:
            return True
        cur = ts.entity(cur).parent
    return False


def validate_relation(ts: TypeSystem, relation_name: str, subj_type: str, obj_type: str) -> bool:
    """True iff the subject/object types satisfy the relation's domain/range."""
    rel = ts.relation(relation_name)
    return is_subtype(ts, subj_type, rel.domain) and is_subtype(ts, obj_type, rel.range)


def load_dictionary(path=None, ts: TypeSystem | None = None) -> dict[str, list[str]]:
    """Load a {entity type: [surface forms]} gazetteer, validating against ts."""
    if path is None:
        with resources.files("incat.data").joinpath("dictionaries.json").open(
            "r", encoding="utf-8"
        ) as fh:
            entries = json.load(fh)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            entries = json.load(fh)
    if not isinstance(entries, dict):
        raise TypeSystemError("dictionary file must be a JSON object")
    validate_dictionary(entries, ts)
    return entries


def validate_dictionary(entries: dict[str, list[str]], ts: TypeSystem | None = None) -> None:
    for type_name, forms in entries.items():
        if ts is not None and not ts.has_entity(type_name):
            raise TypeSystemError(f"dictionary keys unknown entity type {type_name!r}")
        seen = set()
        for form in forms:
            if not form or not form.strip():
                raise TypeSystemError(f"empty surface form under {type_name!r}")
            folded = form.casefold()
            if folded in seen:
                raise TypeSystemError(
                    f"duplicate surface form {form!r} under {type_name!r}"
                )
            seen.add(folded)
