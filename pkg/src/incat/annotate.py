"""Dictionary pre-annotation, corpus splits, agreement and evaluation.

Mentions are typed character spans (start inclusive, end exclusive).
Matching is deliberately simple and fully deterministic: spans are paired
greedily in (doc, start, end) order, each mention matched at most once.
"""
from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass

from .typesystem import TypeSystem, validate_dictionary, validate_relation

SOURCES = ("THREAT_REPORT", "ASSESSMENT_RESPONSE")
PROVENANCES = ("DICTIONARY", "HUMAN", "MODEL")
EXACT = "EXACT"
OVERLAP = "OVERLAP"

# token boundary: adjacent to a non-alphanumeric character or a string edge
_BOUNDARY_L = r"(?<![^\W_])"
_BOUNDARY_R = r"(?![^\W_])"


class AnnotationError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    doc_id: str
    source: str
    text: str

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise AnnotationError(f"unknown document source {self.source!r}")
        if not self.text:
            raise AnnotationError(f"document {self.doc_id!r} has empty text")


@dataclass(frozen=True, order=True)
class Mention:
    doc_id: str
    start: int
    end: int
    entity_type: str
    annotator_id: str = "dictionary"
    provenance: str = "DICTIONARY"

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise AnnotationError(
                f"bad span [{self.start}, {self.end}) in {self.doc_id!r}"
            )
        if self.provenance not in PROVENANCES:
            raise AnnotationError(f"unknown provenance {self.provenance!r}")

    def to_dict(self) -> dict:
        return {
            "doc": self.doc_id,
            "start": self.start,
            "end": self.end,
            "type": self.entity_type,
            "annotator": self.annotator_id,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Mention":
        return cls(
            doc_id=data["doc"],
            start=data["start"],
            end=data["end"],
            entity_type=data["type"],
            annotator_id=data.get("annotator", "dictionary"),
            provenance=data.get("provenance", "DICTIONARY"),
        )


@dataclass(frozen=True)
class RelationMention:
    """A typed relation between two mention spans of one annotator."""

    doc_id: str
    relation: str
    subject: Mention
    object: Mention
    annotator_id: str = "dictionary"

    def key(self):
        return (
            self.doc_id,
            self.relation,
            (self.subject.start, self.subject.end, self.subject.entity_type),
            (self.object.start, self.object.end, self.object.entity_type),
        )


def make_relation(ts: TypeSystem, relation: str, subject: Mention, object: Mention,
                  annotator_id: str = "dictionary") -> RelationMention:
    if subject.doc_id != object.doc_id:
        raise AnnotationError("relation endpoints live in different documents")
    if not validate_relation(ts, relation, subject.entity_type, object.entity_type):
        raise AnnotationError(
            f"{relation!r} does not accept ({subject.entity_type}, {object.entity_type})"
        )
    return RelationMention(subject.doc_id, relation, subject, object, annotator_id)


@dataclass(frozen=True)
class CorpusSplit:
    train: frozenset
    test: frozenset
    blind: frozenset
    seed: int

    def to_dict(self) -> dict:
        return {
            "train": sorted(self.train),
            "test": sorted(self.test),
            "blind": sorted(self.blind),
            "sizes": {"train": len(self.train), "test": len(self.test), "blind": len(self.blind)},
            "seed": self.seed,
        }


@dataclass(frozen=True)
class AgreementReport:
    per_type: dict
    overall: float
    mode: str

    def to_dict(self) -> dict:
        return {"per_type": dict(sorted(self.per_type.items())), "overall": self.overall, "mode": self.mode}


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    mode: str
    true_pos: int
    pred_total: int
    gold_total: int

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "mode": self.mode,
            "counts": {
                "true_pos": self.true_pos,
                "pred_total": self.pred_total,
                "gold_total": self.gold_total,
            },
        }


def preannotate(doc: Document, dictionary: dict, ts: TypeSystem | None = None) -> list[Mention]:
    """Gazetteer matching: case-insensitive, token-bounded, leftmost-longest.

    Scanning resumes past each accepted match, so output spans never
    overlap. Ties at one position go to the earlier dictionary entry.
    """
    validate_dictionary(dictionary, ts)
    candidates = []
    for type_rank, (entity_type, forms) in enumerate(dictionary.items()):
        for form_rank, form in enumerate(forms):
            pattern = re.compile(
                _BOUNDARY_L + re.escape(form) + _BOUNDARY_R, re.IGNORECASE
            )
            for match in pattern.finditer(doc.text):
                start, end = match.span()
                candidates.append((start, -(end - start), type_rank, form_rank, entity_type))
    candidates.sort()
    mentions = []
    cursor = 0
    for start, neg_len, _, _, entity_type in candidates:
        end = start - neg_len
        if start >= cursor:
            mentions.append(Mention(doc.doc_id, start, end, entity_type))
            cursor = end
    return mentions


def _largest_remainder(n: int, ratios) -> list[int]:
    quotas = [n * r for r in ratios]
    sizes = [math.floor(q) for q in quotas]
    leftover = n - sum(sizes)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in order[:leftover]:
        sizes[i] += 1
    return sizes


def split_corpus(doc_ids, ratios, seed: int) -> CorpusSplit:
    """Seeded shuffle, then largest-remainder apportionment into
    train/test/blind."""
    doc_ids = list(doc_ids)
    if not doc_ids:
        raise AnnotationError("cannot split an empty corpus")
    if len(set(doc_ids)) != len(doc_ids):
        raise AnnotationError("duplicate doc ids in corpus")
    if len(ratios) != 3:
        raise AnnotationError("ratios must be (train, test, blind)")
    if any(r <= 0 for r in ratios):
        raise AnnotationError("ratios must all be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise AnnotationError(f"ratios sum to {sum(ratios)}, expected 1")
    shuffled = doc_ids[:]
    random.Random(seed).shuffle(shuffled)
    n_train, n_test, n_blind = _largest_remainder(len(shuffled), ratios)
    return CorpusSplit(
        train=frozenset(shuffled[:n_train]),
        test=frozenset(shuffled[n_train:n_train + n_test]),
        blind=frozenset(shuffled[n_train + n_test:]),
        seed=seed,
    )


def assign_overlap(doc_ids, annotators, overlap_fraction: float, batch_size: int,
                   seed: int) -> dict:
    """Draw a batch and assign it to a pair of annotators with the given
    overlap. Half-up rounding of the shared count; an odd exclusive
    remainder gives the first annotator one extra document."""
    doc_ids = list(doc_ids)
    annotators = list(annotators)
    if len(annotators) != 2:
        raise AnnotationError("overlap assignment expects exactly 2 annotators")
    if not 0.0 <= overlap_fraction <= 1.0:
        raise AnnotationError("overlap_fraction must be in [0, 1]")
    if batch_size > len(doc_ids):
        raise AnnotationError(
            f"batch_size {batch_size} exceeds corpus of {len(doc_ids)} documents"
        )
    if batch_size < 0:
        raise AnnotationError("batch_size must be non-negative")
    batch = random.Random(seed).sample(doc_ids, batch_size)
    n_shared = math.floor(batch_size * overlap_fraction + 0.5)
    shared, exclusive = batch[:n_shared], batch[n_shared:]
    half = math.ceil(len(exclusive) / 2)
    first, second = annotators
    return {
        first: shared + exclusive[:half],
        second: shared + exclusive[half:],
    }


def _check_mode(mode: str) -> str:
    normalized = mode.upper()
    if normalized not in (EXACT, OVERLAP):
        raise AnnotationError(f"unknown matching mode {mode!r}")
    return normalized


def _check_no_overlap(mentions) -> None:
    by_doc_annotator = {}
    for m in mentions:
        by_doc_annotator.setdefault((m.doc_id, m.annotator_id), []).append(m)
    for (doc_id, annotator), group in by_doc_annotator.items():
        group.sort(key=lambda m: (m.start, m.end))
        for a, b in zip(group, group[1:]):
            if b.start < a.end:
                raise AnnotationError(
                    f"overlapping mentions by {annotator!r} in {doc_id!r}: "
                    f"[{a.start},{a.end}) and [{b.start},{b.end})"
                )


def _compatible(p: Mention, g: Mention, mode: str) -> bool:
    if p.doc_id != g.doc_id or p.entity_type != g.entity_type:
        return False
    if mode == EXACT:
        return p.start == g.start and p.end == g.end
    return p.start < g.end and g.start < p.end


def _greedy_match(pred, gold, mode: str):
    pred = sorted(pred, key=lambda m: (m.doc_id, m.start, m.end, m.entity_type))
    gold = sorted(gold, key=lambda m: (m.doc_id, m.start, m.end, m.entity_type))
    taken = [False] * len(gold)
    pairs = []
    for p in pred:
        for gi, g in enumerate(gold):
            if not taken[gi] and _compatible(p, g, mode):
                taken[gi] = True
                pairs.append((p, g))
                break
    return pairs


def _restrict_to_docs(mentions, docs) -> None:
    if docs is None:
        return
    allowed = set(docs)
    for m in mentions:
        if m.doc_id not in allowed:
            raise AnnotationError(
                f"mention references {m.doc_id!r}, outside the shared documents"
            )


def pairwise_agreement(a, b, mode: str = EXACT, docs=None,
                       a_relations=(), b_relations=()) -> AgreementReport:
    """Inter-annotator F1 over two mention sets.

    Overall is micro-F1 (symmetric under swapping a and b). Relation
    mentions, when given, are compared by exact key and only count toward
    the overall score in EXACT mode.
    """
    mode = _check_mode(mode)
    a, b = list(a), list(b)
    _restrict_to_docs(a, docs)
    _restrict_to_docs(b, docs)
    _check_no_overlap(a)
    _check_no_overlap(b)
    pairs = _greedy_match(a, b, mode)

    per_type = {}
    types = {m.entity_type for m in a} | {m.entity_type for m in b}
    for t in sorted(types):
        tp = sum(1 for p, _ in pairs if p.entity_type == t)
        total = sum(1 for m in a if m.entity_type == t) + sum(
            1 for m in b if m.entity_type == t
        )
        per_type[t] = 2 * tp / total if total else 0.0

    tp = len(pairs)
    total = len(a) + len(b)
    if mode == EXACT and (a_relations or b_relations):
        a_keys = {r.key() for r in a_relations}
        b_keys = {r.key() for r in b_relations}
        tp += len(a_keys & b_keys)
        total += len(a_keys) + len(b_keys)
    overall = 2 * tp / total if total else 1.0
    return AgreementReport(per_type=per_type, overall=overall, mode=mode)


def evaluate(pred, gold, mode: str = EXACT, docs=None) -> EvalReport:
    """Precision/recall/F1 of predicted mentions against gold mentions."""
    mode = _check_mode(mode)
    pred, gold = list(pred), list(gold)
    _restrict_to_docs(pred, docs)
    _restrict_to_docs(gold, docs)
    _check_no_overlap(pred)
    _check_no_overlap(gold)
    tp = len(_greedy_match(pred, gold, mode))
    precision = tp / len(pred) if pred else 0.0
    recall = tp / len(gold) if gold else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision > 0 and recall > 0
        else 0.0
    )
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        mode=mode,
        true_pos=tp,
        pred_total=len(pred),
        gold_total=len(gold),
    )


def write_mentions_jsonl(mentions, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for m in mentions:
            fh.write(json.dumps(m.to_dict(), ensure_ascii=False) + "\n")


def read_mentions_jsonl(path) -> list[Mention]:
    mentions = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                mentions.append(Mention.from_dict(json.loads(line)))
    return mentions


def document_to_dict(doc: Document) -> dict:
    return {"doc_id": doc.doc_id, "source": doc.source, "text": doc.text}


def document_from_dict(data: dict) -> Document:
    return Document(doc_id=data["doc_id"], source=data["source"], text=data["text"])


def read_corpus_jsonl(path) -> list[Document]:
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                docs.append(document_from_dict(json.loads(line)))
    seen = set()
    for d in docs:
        if d.doc_id in seen:
            raise AnnotationError(f"duplicate doc id {d.doc_id!r} in corpus")
        seen.add(d.doc_id)
    return docs


def write_corpus_jsonl(docs, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(json.dumps(document_to_dict(d), ensure_ascii=False) + "\n")
