"""Theme-targeted assessments, scoring, and readiness ranking.

Items are tagged knowledge probes; tags are the join key between cluster
themes and training content. Readiness for a (group, theme) cell is the
fraction of correct answers over that group's responses, summed over the
per-tag score cells. Low readiness puts a group at the front of the
targeting queue.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from random import Random

from .annotate import Document
from .themes import Theme


class AssessError(ValueError):
    pass


@dataclass(frozen=True)
class AssessmentItem:
    item_id: str
    prompt: str
    choices: tuple[str, ...]
    correct_index: int
    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.choices) < 2:
            raise AssessError(f"item {self.item_id!r} needs at least 2 choices")
        if not 0 <= self.correct_index < len(self.choices):
            raise AssessError(f"item {self.item_id!r} has correct_index out of range")
        if not self.tags:
            raise AssessError(f"item {self.item_id!r} carries no tags")

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "prompt": self.prompt,
            "choices": list(self.choices),
            "correct_index": self.correct_index,
            "tags": list(self.tags),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssessmentItem":
        return cls(
            item_id=data["item_id"],
            prompt=data["prompt"],
            choices=tuple(data["choices"]),
            correct_index=data["correct_index"],
            tags=tuple(data["tags"]),
        )


@dataclass(frozen=True)
class Assessment:
    assessment_id: str
    theme_id: str
    items: tuple[AssessmentItem, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise AssessError("assessment has no items")

    def item(self, item_id: str) -> AssessmentItem:
        for item in self.items:
            if item.item_id == item_id:
                return item
        raise AssessError(f"unknown item {item_id!r}")

    def to_dict(self) -> dict:
        return {
            "assessment_id": self.assessment_id,
            "theme_id": self.theme_id,
            "items": [i.to_dict() for i in self.items],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Assessment":
        return cls(
            assessment_id=data["assessment_id"],
            theme_id=data["theme_id"],
            items=tuple(AssessmentItem.from_dict(i) for i in data["items"]),
        )


@dataclass(frozen=True)
class ResponseSet:
    user_id: str
    group_id: str
    assessment_id: str
    answers: dict = field(default_factory=dict)
    free_text: dict = field(default_factory=dict)
    submitted_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "group_id": self.group_id,
            "assessment_id": self.assessment_id,
            "answers": dict(self.answers),
            "free_text": dict(self.free_text),
            "submitted_at": self.submitted_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResponseSet":
        return cls(
            user_id=data["user_id"],
            group_id=data["group_id"],
            assessment_id=data["assessment_id"],
            answers=dict(data.get("answers") or {}),
            free_text=dict(data.get("free_text") or {}),
            submitted_at=data.get("submitted_at"),
        )


@dataclass(frozen=True)
class ReadinessReport:
    matrix: dict
    support: dict
    ranking: dict

    def to_dict(self) -> dict:
        groups = sorted({g for g, _ in self.matrix})
        out_matrix: dict = {}
        out_support: dict = {}
        for g in groups:
            themes = sorted(t for gg, t in self.matrix if gg == g)
            out_matrix[g] = {t: self.matrix[(g, t)] for t in themes}
            out_support[g] = {t: self.support[(g, t)] for t in themes}
        return {
            "matrix": out_matrix,
            "support": out_support,
            "ranking": {t: list(gs) for t, gs in sorted(self.ranking.items())},
        }


def load_item_bank(path=None) -> list[AssessmentItem]:
    """Item bank JSON (the bundled, hand-curated one by default)."""
    if path is None:
        with resources.files("incat.data").joinpath("item_bank.json").open(
            "r", encoding="utf-8"
        ) as fh:
            raw = json.load(fh)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    items = [AssessmentItem.from_dict(entry) for entry in raw]
    ids = [i.item_id for i in items]
    if len(set(ids)) != len(ids):
        raise AssessError("duplicate item ids in bank")
    return items


def generate_assessment(theme: Theme, bank, n_items: int, seed: int) -> Assessment:
    """Seeded uniform sample of bank items sharing at least one theme tag."""
    if n_items < 1:
        raise AssessError("n_items must be at least 1")
    theme_tags = set(theme.tags)
    eligible = [item for item in bank if theme_tags & set(item.tags)]
    if len(eligible) < n_items:
        per_tag = Counter()
        for item in eligible:
            for tag in set(item.tags) & theme_tags:
                per_tag[tag] += 1
        detail = ", ".join(f"{tag}={per_tag.get(tag, 0)}" for tag in sorted(theme_tags))
        raise AssessError(
            f"need {n_items} eligible items for theme {theme.theme_id!r}, "
            f"have {len(eligible)} (per tag: {detail})"
        )
    picked = Random(seed).sample(eligible, n_items)
    return Assessment(
        assessment_id=f"{theme.theme_id}-n{n_items}-s{seed}",
        theme_id=theme.theme_id,
        items=tuple(picked),
    )


def score_response(resp: ResponseSet, assessment: Assessment) -> dict:
    """Per-tag (correct, attempted) counts; unanswered items count as
    attempted and incorrect."""
    if resp.assessment_id != assessment.assessment_id:
        raise AssessError(
            f"response targets {resp.assessment_id!r}, not {assessment.assessment_id!r}"
        )
    known = {item.item_id for item in assessment.items}
    for item_id, choice in resp.answers.items():
        if item_id not in known:
            raise AssessError(f"answer references unknown item {item_id!r}")
        item = assessment.item(item_id)
        if not isinstance(choice, int) or not 0 <= choice < len(item.choices):
            raise AssessError(
                f"answer {choice!r} out of range for item {item_id!r}"
            )
    scores: dict = {}
    for item in assessment.items:
        answered = resp.answers.get(item.item_id)
        correct = answered == item.correct_index
        for tag in item.tags:
            c, a = scores.get(tag, (0, 0))
            scores[tag] = (c + (1 if correct else 0), a + 1)
    return scores


def rank_groups(matrix: dict, support: dict) -> dict:
    """Per theme: groups ascending by score; ties prefer larger support,
    then lexicographic group id."""
    themes = sorted({t for _, t in matrix})
    ranking = {}
    for t in themes:
        groups = [g for g, tt in matrix if tt == t]
        groups.sort(key=lambda g: (matrix[(g, t)], -support[(g, t)], g))
        ranking[t] = groups
    return ranking


def aggregate_readiness(responses, assessments, grouping=None) -> ReadinessReport:
    """Fold scored responses into the (group, theme) readiness matrix.

    `assessments` maps assessment_id -> Assessment (a list is accepted).
    `grouping` optionally overrides each response's group by user id.
    """
    if not isinstance(assessments, dict):
        assessments = {a.assessment_id: a for a in assessments}
    correct: Counter = Counter()
    attempted: Counter = Counter()
    count: Counter = Counter()
    for i, resp in enumerate(responses):
        assessment = assessments.get(resp.assessment_id)
        if assessment is None:
            raise AssessError(
                f"response #{i} from {resp.user_id!r} targets unknown "
                f"assessment {resp.assessment_id!r}"
            )
        if grouping is not None:
            if resp.user_id not in grouping:
                raise AssessError(f"response #{i}: no group for user {resp.user_id!r}")
            group = grouping[resp.user_id]
        else:
            group = resp.group_id
        try:
            scores = score_response(resp, assessment)
        except AssessError as exc:
            raise AssessError(f"response #{i} from {resp.user_id!r}: {exc}") from exc
        cell = (group, assessment.theme_id)
        for c, a in scores.values():
            correct[cell] += c
            attempted[cell] += a
        count[cell] += 1
    matrix = {cell: correct[cell] / attempted[cell] for cell in attempted if attempted[cell]}
    support = {cell: count[cell] for cell in matrix}
    return ReadinessReport(
        matrix=matrix, support=support, ranking=rank_groups(matrix, support)
    )


def target_groups(report: ReadinessReport, theme_id: str, quota: int) -> list[str]:
    """The `quota` least-ready groups for a theme, most vulnerable first."""
    if theme_id not in report.ranking:
        raise AssessError(f"theme {theme_id!r} not present in the readiness report")
    if quota < 0:
        raise AssessError("quota must be non-negative")
    return list(report.ranking[theme_id][:quota])


def response_documents(resp: ResponseSet, prefix: str) -> list[Document]:
    """Free-text answers as annotatable documents (one per answered item)."""
    docs = []
    for item_id in sorted(resp.free_text):
        text = resp.free_text[item_id]
        if text and text.strip():
            docs.append(
                Document(
                    doc_id=f"{prefix}-{item_id}",
                    source="ASSESSMENT_RESPONSE",
                    text=text,
                )
            )
    return docs
