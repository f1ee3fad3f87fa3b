import json

import pytest

from incat.typesystem import (
    EntityType,
    RelationType,
    TypeSystem,
    TypeSystemError,
    is_subtype,
    load_dictionary,
    load_type_system,
    save_type_system,
    validate_relation,
)


@pytest.fixture(scope="module")
def ts():
    return load_type_system()


def test_default_file_loads(ts):
    names = {e.name for e in ts.entity_types}
    assert {"Product", "Version", "AttackTheater", "Remote", "Local", "Physical",
            "ImpactMethod", "LogicalImpact", "Context", "Mitigation"} <= names
    assert {r.name for r in ts.relation_types} >= {"affects", "hasVersion"}


def test_subtype_examples(ts):
    assert is_subtype(ts, "Remote", "AttackTheater")
    assert is_subtype(ts, "Product", "Product")
    assert not is_subtype(ts, "Product", "ImpactMethod")
    assert not is_subtype(ts, "AttackTheater", "Remote")


def test_subtype_unknown_name_errors(ts):
    with pytest.raises(TypeSystemError):
        is_subtype(ts, "Nope", "Product")
    with pytest.raises(TypeSystemError):
        is_subtype(ts, "Product", "Nope")


def test_subtype_reflexive_transitive_antisymmetric(ts):
    names = [e.name for e in ts.entity_types]
    for a in names:
        assert is_subtype(ts, a, a)
    for a in names:
        for b in names:
            for c in names:
                if is_subtype(ts, a, b) and is_subtype(ts, b, c):
                    assert is_subtype(ts, a, c)
            if a != b and is_subtype(ts, a, b):
                assert not is_subtype(ts, b, a)


def test_relation_validation(ts):
    assert validate_relation(ts, "affects", "ImpactMethod", "Product")
    assert validate_relation(ts, "affects", "CodeExecution", "Product")
    assert not validate_relation(ts, "affects", "Product", "Product")
    assert validate_relation(ts, "occursIn", "ImpactMethod", "Remote")
    with pytest.raises(TypeSystemError):
        validate_relation(ts, "unknownRel", "Product", "Product")


def test_self_loop_relation_allowed():
    ts = TypeSystem(
        (EntityType("X"),),
        (RelationType("r", "X", "X"),),
    )
    assert validate_relation(ts, "r", "X", "X")


def test_cycle_detection_names_cycle():
    with pytest.raises(TypeSystemError, match="cycle"):
        TypeSystem((EntityType("A", parent="B"), EntityType("B", parent="A")))


def test_dangling_parent_and_relation():
    with pytest.raises(TypeSystemError, match="parent"):
        TypeSystem((EntityType("A", parent="Ghost"),))
    with pytest.raises(TypeSystemError, match="unknown range"):
        TypeSystem((EntityType("A"),), (RelationType("r", "A", "Ghost"),))


def test_duplicate_entities_rejected():
    with pytest.raises(TypeSystemError, match="duplicate"):
        TypeSystem((EntityType("A"), EntityType("A")))


def test_round_trip(tmp_path, ts):
    path = tmp_path / "ts.json"
    save_type_system(ts, path)
    assert load_type_system(path) == ts


def test_default_dictionary_validates(ts):
    entries = load_dictionary(ts=ts)
    assert "SQL injection" in entries["ImpactMethod"]
    for key in entries:
        assert ts.has_entity(key)


def test_dictionary_unknown_type_rejected(tmp_path, ts):
    path = tmp_path / "dict.json"
    path.write_text(json.dumps({"NotAType": ["x"]}))
    with pytest.raises(TypeSystemError, match="unknown entity type"):
        load_dictionary(path, ts)


def test_dictionary_casefold_duplicates_rejected(tmp_path, ts):
    path = tmp_path / "dict.json"
    path.write_text(json.dumps({"Product": ["Windows", "windows"]}))
    with pytest.raises(TypeSystemError, match="duplicate"):
        load_dictionary(path, ts)


def test_dictionary_empty_form_rejected(tmp_path, ts):
    path = tmp_path / "dict.json"
    path.write_text(json.dumps({"Product": ["  "]}))
    with pytest.raises(TypeSystemError, match="empty"):
        load_dictionary(path, ts)
