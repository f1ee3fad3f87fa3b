"""Human side of the loop: assessments, scoring, readiness, targeting.

Generates a theme-targeted assessment from the bundled item bank, runs a
synthetic batch of 127 responses through scoring, and ranks groups for
the next training wave.
"""
from incat import (
    aggregate_readiness,
    fit_best,
    generate_assessment,
    load_item_bank,
    score_response,
    target_groups,
    themes_from_model,
)
from incat.fixtures import synthetic_matrix, synthetic_responses

rows, _ = synthetic_matrix(seed=2018)
model = fit_best(rows, 10, "HUANG", seed=42, restarts=10)
themes = themes_from_model(model, rows)
theme = themes[0]
print(f"most prevalent theme: {theme.theme_id} (n={theme.count})")
print(f"tags: {', '.join(theme.tags)}")

print()
print("== Assessment generated from the item bank ==")
bank = load_item_bank()
assessment = generate_assessment(theme, bank, n_items=8, seed=3)
print(f"{assessment.assessment_id}: {len(assessment.items)} items")
for item in assessment.items[:3]:
    print(f"  [{item.item_id}] {item.prompt[:70]}...")
print("  ...")

print()
print("== One scored response ==")
responses = synthetic_responses(assessment, n=127, seed=127)
scores = score_response(responses[0], assessment)
for tag, (correct, attempted) in sorted(scores.items()):
    print(f"  {tag:<28} {correct}/{attempted}")

print()
print("== Readiness matrix over 127 synthetic responses ==")
report = aggregate_readiness(responses, [assessment])
payload = report.to_dict()
for group, themes_scores in payload["matrix"].items():
    for theme_id, score in themes_scores.items():
        n = payload["support"][group][theme_id]
        print(f"  {group:<12} {theme_id}  readiness={score:.3f}  (n={n})")

print()
print("== Targeting: the two least-ready groups go first ==")
targets = target_groups(report, theme.theme_id, quota=2)
print(f"next training wave for {theme.theme_id}: {', '.join(targets)}")
