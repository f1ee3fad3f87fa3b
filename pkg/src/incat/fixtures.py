"""Synthetic data generators, clearly synthetic, for demos and tests.

The vulnerability profiles below mirror the ten most prevalent CVSS v3
base-metric combinations in analyzed 2018 NVD data; sampling around them
produces realistic categorical matrices without shipping a feed snapshot.
"""
from __future__ import annotations

from random import Random

from .assess import Assessment, ResponseSet
from .schema import FeatureSchema

# (vector in canonical feature order, row count); counts sum to 6851
PREVALENT_PROFILES: tuple[tuple[tuple[str, ...], int], ...] = (
    (("NETWORK", "LOW", "NONE", "NONE", "HIGH", "HIGH", "HIGH"), 2394),
    (("NETWORK", "LOW", "NONE", "NONE", "NONE", "HIGH", "NONE"), 853),
    (("NETWORK", "LOW", "NONE", "NONE", "HIGH", "NONE", "NONE"), 711),
    (("NETWORK", "LOW", "NONE", "NONE", "NONE", "NONE", "HIGH"), 656),
    (("NETWORK", "LOW", "NONE", "REQUIRED", "LOW", "LOW", "NONE"), 638),
    (("LOCAL", "LOW", "LOW", "NONE", "HIGH", "HIGH", "HIGH"), 525),
    (("NETWORK", "LOW", "LOW", "REQUIRED", "LOW", "LOW", "NONE"), 486),
    (("NETWORK", "LOW", "NONE", "REQUIRED", "NONE", "NONE", "HIGH"), 296),
    (("NETWORK", "LOW", "NONE", "REQUIRED", "HIGH", "NONE", "NONE"), 211),
    (("NETWORK", "LOW", "LOW", "NONE", "LOW", "LOW", "LOW"), 81),
)


def synthetic_matrix(seed: int = 2018, profiles=PREVALENT_PROFILES,
                     mutation_rate: float = 0.05,
                     schema: FeatureSchema | None = None):
    """Rows sampled around generating profiles.

    Each field independently mutates to a uniformly-chosen *different*
    domain value with probability `mutation_rate`, so the expected
    per-row distance to the generating profile is width * rate.

    Returns (rows, generating_modes).
    """
    schema = schema or FeatureSchema.default()
    rng = Random(seed)
    rows = []
    for mode, count in profiles:
        mode = schema.validate_vector(mode)
        for _ in range(count):
            row = list(mode)
            for j, (_, domain) in enumerate(schema.features):
                if rng.random() < mutation_rate:
                    alternatives = [v for v in domain if v != row[j]]
                    row[j] = rng.choice(alternatives)
            rows.append(tuple(row))
    return rows, [mode for mode, _ in profiles]


SYNTHETIC_GROUPS = ("engineering", "finance", "operations", "support")

# per-group probability of answering any item correctly; spreads groups
# apart so readiness rankings are non-trivial
_GROUP_SKILL = {
    "engineering": 0.85,
    "finance": 0.45,
    "operations": 0.65,
    "support": 0.30,
}


def synthetic_responses(assessment: Assessment, n: int = 127, seed: int = 127,
                        groups=SYNTHETIC_GROUPS) -> list[ResponseSet]:
    """A batch of synthetic answer sheets for one assessment."""
    rng = Random(seed)
    out = []
    for i in range(n):
        group = groups[i % len(groups)]
        skill = _GROUP_SKILL.get(group, 0.5)
        answers = {}
        for item in assessment.items:
            roll = rng.random()
            if roll < skill:
                answers[item.item_id] = item.correct_index
            elif roll < skill + 0.05:
                continue  # abandoned item
            else:
                wrong = [c for c in range(len(item.choices)) if c != item.correct_index]
                answers[item.item_id] = rng.choice(wrong)
        free_text = {}
        if i % 17 == 0:
            first = assessment.items[0]
            free_text[first.item_id] = (
                "I would report the suspicious SQL injection attempt against "
                "our Windows server to the security team."
            )
        out.append(
            ResponseSet(
                user_id=f"synthetic-user-{i:03d}",
                group_id=group,
                assessment_id=assessment.assessment_id,
                answers=answers,
                free_text=free_text,
                submitted_at=f"2018-09-{19 + i % 10:02d}T{8 + i % 10:02d}:00:00Z",
            )
        )
    return out
