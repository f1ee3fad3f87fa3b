"""Categorical feature schemas and vectors.

A vector is a plain tuple of value strings; the schema pins feature names,
the per-feature value domains and the canonical feature order used for
serialization, tie-breaking and reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field


class SchemaError(ValueError):
    """Raised when a vector or schema definition violates its domain rules."""


# CVSS v3 base-metric features in canonical order. Domain order is
# significant: it defines the canonical sort order for vectors.
DEFAULT_FEATURES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("attack_vector", ("NETWORK", "ADJACENT", "LOCAL", "PHYSICAL")),
    ("attack_complexity", ("LOW", "HIGH")),
    ("privileges_required", ("NONE", "LOW", "HIGH")),
    ("user_interaction", ("NONE", "REQUIRED")),
    ("confidentiality_impact", ("HIGH", "LOW", "NONE")),
    ("integrity_impact", ("HIGH", "LOW", "NONE")),
    ("availability_impact", ("HIGH", "LOW", "NONE")),
)


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered categorical features with fixed value domains."""

    features: tuple[tuple[str, tuple[str, ...]], ...] = field(default=DEFAULT_FEATURES)

    def __post_init__(self) -> None:
        names = [name for name, _ in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("feature names must be unique")
        for name, domain in self.features:
            if not domain:
                raise SchemaError(f"feature {name!r} has an empty domain")
            if len(set(domain)) != len(domain):
                raise SchemaError(f"feature {name!r} has duplicate domain values")

    @classmethod
    def default(cls) -> "FeatureSchema":
        return cls(DEFAULT_FEATURES)

    @classmethod
    def from_rows(cls, rows) -> "FeatureSchema":
        """Infer a schema from data rows: generic feature names, sorted domains."""
        if not rows:
            raise SchemaError("cannot infer a schema from no rows")
        width = len(rows[0])
        domains: list[set] = [set() for _ in range(width)]
        for row in rows:
            if len(row) != width:
                raise SchemaError("rows have inconsistent widths")
            for i, value in enumerate(row):
                domains[i].add(value)
        return cls(tuple((f"f{i}", tuple(sorted(d))) for i, d in enumerate(domains)))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.features)

    @property
    def width(self) -> int:
        return len(self.features)

    def domain(self, name: str) -> tuple[str, ...]:
        for fname, values in self.features:
            if fname == name:
                return values
        raise SchemaError(f"unknown feature {name!r}")

    def possible_combinations(self) -> int:
        """Size of the full categorical product space."""
        total = 1
        for _, domain in self.features:
            total *= len(domain)
        return total

    def validate_vector(self, vector) -> tuple[str, ...]:
        """Check width and domain membership; returns the vector as a tuple."""
        vec = tuple(vector)
        if len(vec) != self.width:
            raise SchemaError(
                f"vector has {len(vec)} fields, schema expects {self.width}"
            )
        for (name, domain), value in zip(self.features, vec):
            if value not in domain:
                raise SchemaError(f"value {value!r} not in domain of {name!r}")
        return vec

    def vector_from_mapping(self, mapping) -> tuple[str, ...]:
        """Build a vector from a name->value mapping in canonical field order."""
        try:
            vec = tuple(mapping[name] for name in self.names)
        except KeyError as exc:
            raise SchemaError(f"missing feature {exc.args[0]!r}") from None
        return self.validate_vector(vec)

    def to_mapping(self, vector) -> dict[str, str]:
        return dict(zip(self.names, self.validate_vector(vector)))

    def sort_key(self, vector) -> tuple[int, ...]:
        """Canonical order: tuple of per-feature domain indices."""
        vec = self.validate_vector(vector)
        return tuple(domain.index(v) for (_, domain), v in zip(self.features, vec))

    def encode(self, rows) -> "np.ndarray":
        """Encode rows as an int16 code matrix (one column per feature)."""
        import numpy as np

        index = [
            {value: i for i, value in enumerate(domain)} for _, domain in self.features
        ]
        out = np.empty((len(rows), self.width), dtype=np.int16)
        for r, row in enumerate(rows):
            vec = self.validate_vector(row)
            for c, value in enumerate(vec):
                out[r, c] = index[c][value]
        return out

    def decode(self, codes) -> tuple[str, ...]:
        """Decode one code row back to a value tuple."""
        if len(codes) != self.width:
            raise SchemaError("code row width does not match schema")
        return tuple(
            self.features[i][1][int(code)] for i, code in enumerate(codes)
        )
