"""Text side of the loop: dictionaries, splits, and agreement.

Pre-annotates threat descriptions against the bundled type system and
gazetteers, builds the train/test/blind split, simulates a two-annotator
overlap round, and scores agreement and model-vs-gold quality.
"""
from incat import (
    Document,
    Mention,
    assign_overlap,
    evaluate,
    load_dictionary,
    load_type_system,
    pairwise_agreement,
    preannotate,
    split_corpus,
)

ts = load_type_system()
dictionary = load_dictionary(ts=ts)
print(f"type system: {len(ts.entity_types)} entity types, "
      f"{len(ts.relation_types)} relation types")
print(f"dictionaries: {sum(len(v) for v in dictionary.values())} surface forms "
      f"over {len(dictionary)} types")

docs = [
    Document("d001", "THREAT_REPORT",
             "SQL injection in the login form allows remote attackers to "
             "execute arbitrary commands on the Windows server."),
    Document("d002", "THREAT_REPORT",
             "A buffer overflow in the kernel driver allows local users to "
             "gain elevated privileges on Linux."),
    Document("d003", "THREAT_REPORT",
             "Cross-site scripting in WordPress before 4.9 leads to "
             "information disclosure when a victim follows a crafted link."),
]

print()
print("== Dictionary pre-annotation ==")
gold = []
for doc in docs:
    mentions = preannotate(doc, dictionary, ts)
    gold.extend(mentions)
    print(f"{doc.doc_id}: {doc.text}")
    for m in mentions:
        print(f"   [{m.start:>3}:{m.end:<3}] {m.entity_type:<22} {doc.text[m.start:m.end]!r}")

print()
print("== Corpus split 70/23/7 ==")
corpus_ids = [f"d{i:03d}" for i in range(1, 101)]
split = split_corpus(corpus_ids, (0.70, 0.23, 0.07), seed=4)
print(f"train={len(split.train)} test={len(split.test)} blind={len(split.blind)}")

print()
print("== Overlapping assignment for a 50-document round ==")
assignment = assign_overlap(corpus_ids, ["annotator-a", "annotator-b"],
                            overlap_fraction=0.5, batch_size=50, seed=4)
shared = set(assignment["annotator-a"]) & set(assignment["annotator-b"])
for name, assigned in assignment.items():
    print(f"{name}: {len(assigned)} documents ({len(shared)} shared)")

print()
print("== Agreement between two imperfect annotators ==")
annotator_b = []
for m in gold:
    if m.start % 7 == 3:
        continue  # annotator b missed some mentions
    annotator_b.append(Mention(m.doc_id, m.start, m.end, m.entity_type,
                               annotator_id="annotator-b", provenance="HUMAN"))
annotator_a = [Mention(m.doc_id, m.start, m.end, m.entity_type,
                       annotator_id="annotator-a", provenance="HUMAN") for m in gold]
for mode in ("EXACT", "OVERLAP"):
    report = pairwise_agreement(annotator_a, annotator_b, mode)
    print(f"{mode:<8} overall F1 = {report.overall:.3f}")

print()
print("== Model-vs-gold evaluation (dictionary output as the model) ==")
pred = [Mention(m.doc_id, m.start, m.end, m.entity_type,
                annotator_id="model", provenance="MODEL") for m in gold[:-2]]
report = evaluate(pred, annotator_a, "EXACT")
print(f"precision={report.precision:.3f} recall={report.recall:.3f} f1={report.f1:.3f} "
      f"(tp={report.true_pos}, pred={report.pred_total}, gold={report.gold_total})")
