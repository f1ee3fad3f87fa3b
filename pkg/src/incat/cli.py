"""Operator command line for the full pipeline.

Every command prints machine-readable JSON to stdout and a short human
summary to stderr. Exit codes: 0 success, 1 usage, 2 data/validation
error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import store as storage
from .annotate import (
    AnnotationError,
    assign_overlap,
    document_to_dict,
    evaluate,
    pairwise_agreement,
    preannotate,
    read_corpus_jsonl,
    read_mentions_jsonl,
    split_corpus,
    write_mentions_jsonl,
)
from .assess import (
    AssessError,
    ResponseSet,
    aggregate_readiness,
    generate_assessment,
    load_item_bank,
    response_documents,
    score_response,
)
from .cluster import ClusterError, fit_best, sweep_k
from .nvd import FeedError, categorical_matrix, parse_nvd_feed
from .schema import FeatureSchema, SchemaError
from .service import ServiceConfig, serve
from .store import Store, StoreError
from .themes import (
    ThemeError,
    combos_report,
    coverage_top_m,
    combination_stats,
    load_tag_map,
    themes_from_model,
)
from .typesystem import TypeSystemError, load_dictionary, load_type_system

DATA_ERRORS = (
    SchemaError,
    FeedError,
    ClusterError,
    ThemeError,
    TypeSystemError,
    AnnotationError,
    AssessError,
    StoreError,
    FileNotFoundError,
    json.JSONDecodeError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(payload, summary_lines=()) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))
    for line in summary_lines:
        print(line, file=sys.stderr)


def _table(rows, header) -> list[str]:
    rows = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]


def _open_store(args) -> Store:
    return Store(args.store)


def _load_matrix_file(path, schema: FeatureSchema):
    """Rows from JSONL metric objects or CSV with schema feature names."""
    path = Path(path)
    rows = []
    if path.suffix.lower() == ".csv":
        with path.open("r", encoding="utf-8", newline="") as fh:
            for record in csv.DictReader(fh):
                rows.append(schema.vector_from_mapping(record))
    else:
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rows.append(schema.vector_from_mapping(json.loads(line)))
    return rows


def _store_rows(args, schema: FeatureSchema):
    if getattr(args, "matrix", None):
        return _load_matrix_file(args.matrix, schema)
    store = _open_store(args)
    _, rows = categorical_matrix(storage.all_records(store, schema), schema)
    if not rows:
        raise StoreError("no categorical rows in store; run `incat ingest` first")
    return rows


def _read_responses_file(path) -> list[ResponseSet]:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("["):
        return [ResponseSet.from_dict(d) for d in json.loads(text)]
    return [
        ResponseSet.from_dict(json.loads(line))
        for line in text.splitlines()
        if line.strip()
    ]


def cmd_ingest(args) -> int:
    schema = FeatureSchema.default()
    feed_bytes = Path(args.feed).read_bytes()
    result = parse_nvd_feed(feed_bytes, schema)
    store = _open_store(args)
    storage.add_records(store, result.records, schema)
    payload = {
        "records": len(result.records),
        "with_metrics": len(result.with_metrics),
        "rejects": [
            {"id": r.id, "field": r.field, "reason": r.reason} for r in result.rejects
        ],
    }
    _emit(payload, [
        f"ingested {payload['records']} records "
        f"({payload['with_metrics']} with base metrics, "
        f"{len(result.rejects)} rejected) into {store.root}",
    ])
    return 0


def cmd_cluster(args) -> int:
    schema = FeatureSchema.default()
    rows = _store_rows(args, schema)
    model = fit_best(
        rows, args.k, args.init.upper(), args.seed, args.restarts, schema=schema
    )
    store = _open_store(args)
    storage.add_model(store, model)
    if args.out:
        Path(args.out).write_text(model.to_json() + "\n", encoding="utf-8")
    _emit(model.to_dict(), [
        f"k={model.k} init={model.init_method} seed={model.seed} "
        f"cost={model.cost} iterations={model.iterations} rows={len(rows)}",
    ])
    return 0


def cmd_elbow(args) -> int:
    schema = FeatureSchema.default()
    rows = _store_rows(args, schema)
    report = sweep_k(
        rows, args.kmin, args.kmax, args.init.upper(), args.seed, args.restarts,
        schema=schema,
    )
    store = _open_store(args)
    storage.add_report(store, "elbow", report.to_dict())
    _emit(report.to_dict(), _table(
        [(e.k, e.cost) for e in report.entries], ("k", "cost")
    ))
    return 0


def cmd_combos(args) -> int:
    schema = FeatureSchema.default()
    rows = _store_rows(args, schema)
    report = combos_report(rows, schema=schema)
    if args.top is not None:
        stats = combination_stats(rows, schema=schema)
        report["top"] = {"m": args.top, "coverage": coverage_top_m(stats, args.top)}
    store = _open_store(args)
    storage.add_report(store, "combos", report)
    lines = [
        f"possible={report['possible']} observed={report['observed']} "
        f"rows={report['total_rows']}"
    ]
    if args.top is not None:
        lines.append(f"top-{args.top} coverage: {report['top']['coverage']:.3f}")
    _emit(report, lines)
    return 0


def cmd_themes(args) -> int:
    schema = FeatureSchema.default()
    store = _open_store(args)
    model = storage.latest_model(store)
    if model is None:
        raise StoreError("no cluster model in store; run `incat cluster` first")
    rows = _store_rows(args, schema)
    tag_map = load_tag_map(args.tagmap) if args.tagmap else None
    themes = themes_from_model(model, rows, tag_map, schema=schema)
    storage.set_themes(store, themes, schema)
    _emit([t.to_dict(schema) for t in themes], _table(
        [(t.theme_id, t.count, ",".join(t.tags)) for t in themes],
        ("theme", "count", "tags"),
    ))
    return 0


def cmd_preannotate(args) -> int:
    ts = load_type_system(args.typesystem)
    dictionary = load_dictionary(args.dict, ts)
    store = _open_store(args)
    if args.corpus:
        docs = read_corpus_jsonl(args.corpus)
        store.append_many("corpora", [document_to_dict(d) for d in docs])
    else:
        from .annotate import document_from_dict

        docs = [document_from_dict(d) for d in store.read_all("corpora")]
        if not docs:
            raise StoreError("no documents in store; pass --corpus")
    mentions = []
    for doc in docs:
        mentions.extend(preannotate(doc, dictionary, ts))
    store.append_many("mentions", [m.to_dict() for m in mentions])
    if args.out:
        write_mentions_jsonl(mentions, args.out)
    _emit([m.to_dict() for m in mentions], [
        f"pre-annotated {len(docs)} documents, {len(mentions)} mentions",
    ])
    return 0


def cmd_split(args) -> int:
    ratios = tuple(float(x) for x in args.ratios.split(","))
    if args.corpus:
        doc_ids = [d.doc_id for d in read_corpus_jsonl(args.corpus)]
    else:
        store = _open_store(args)
        doc_ids = [d["doc_id"] for d in store.read_all("corpora")]
    split = split_corpus(doc_ids, ratios, args.seed)
    payload = split.to_dict()
    _emit(payload, [
        "train/test/blind sizes: {train}/{test}/{blind}".format(**payload["sizes"]),
    ])
    return 0


def cmd_assign(args) -> int:
    annotators = args.annotators.split(",")
    if args.corpus:
        doc_ids = [d.doc_id for d in read_corpus_jsonl(args.corpus)]
    else:
        store = _open_store(args)
        doc_ids = [d["doc_id"] for d in store.read_all("corpora")]
    assignment = assign_overlap(doc_ids, annotators, args.overlap, args.batch, args.seed)
    shared = set(assignment[annotators[0]]) & set(assignment[annotators[1]])
    _emit(assignment, [
        f"batch={args.batch} shared={len(shared)} "
        + " ".join(f"{a}={len(docs)}" for a, docs in assignment.items()),
    ])
    return 0


def cmd_agree(args) -> int:
    a = read_mentions_jsonl(args.a)
    b = read_mentions_jsonl(args.b)
    docs = None
    if args.docs:
        docs = [line.strip() for line in Path(args.docs).read_text(encoding="utf-8").splitlines() if line.strip()]
    report = pairwise_agreement(a, b, args.mode.upper(), docs=docs)
    _emit(report.to_dict(), [f"overall {args.mode} agreement: {report.overall:.3f}"])
    return 0


def cmd_eval(args) -> int:
    pred = read_mentions_jsonl(args.pred)
    gold = read_mentions_jsonl(args.gold)
    report = evaluate(pred, gold, args.mode.upper())
    _emit(report.to_dict(), [
        f"precision={report.precision:.3f} recall={report.recall:.3f} f1={report.f1:.3f}",
    ])
    return 0


def cmd_gen_assessment(args) -> int:
    store = _open_store(args)
    themes = storage.current_themes(store)
    match = next((t for t in themes if t["theme_id"] == args.theme), None)
    if match is None:
        raise StoreError(f"theme {args.theme!r} not in store; run `incat themes`")
    from .themes import Theme

    schema = FeatureSchema.default()
    theme = Theme(
        theme_id=match["theme_id"],
        source_cluster=match["source_cluster"],
        mode=schema.vector_from_mapping(match["mode"]),
        count=match["count"],
        tags=tuple(match["tags"]),
    )
    bank = load_item_bank(args.bank)
    assessment = generate_assessment(theme, bank, args.n, args.seed)
    storage.add_assessment(store, assessment)
    _emit(assessment.to_dict(), [
        f"assessment {assessment.assessment_id} with {len(assessment.items)} items",
    ])
    return 0


def cmd_score(args) -> int:
    store = _open_store(args)
    responses = _read_responses_file(args.responses)
    assessments = storage.all_assessments(store)
    results = []
    for resp in responses:
        assessment = assessments.get(resp.assessment_id)
        if assessment is None:
            raise AssessError(f"unknown assessment {resp.assessment_id!r}")
        scores = score_response(resp, assessment)
        seq = storage.add_response(store, resp)
        docs = response_documents(resp, prefix=f"resp-{seq:06d}")
        if docs:
            store.append_many("corpora", [document_to_dict(d) for d in docs])
        results.append({
            "user_id": resp.user_id,
            "group_id": resp.group_id,
            "assessment_id": resp.assessment_id,
            "scores": {tag: {"correct": c, "attempted": a} for tag, (c, a) in sorted(scores.items())},
        })
    _emit(results, [f"scored and stored {len(results)} responses"])
    return 0


def cmd_readiness(args) -> int:
    store = _open_store(args)
    report = aggregate_readiness(
        storage.all_responses(store), storage.all_assessments(store)
    )
    payload = report.to_dict()
    storage.add_report(store, "readiness", payload)
    rows = [
        (g, t, f"{score:.3f}", payload["support"][g][t])
        for g, themes in payload["matrix"].items()
        for t, score in themes.items()
    ]
    _emit(payload, _table(rows, ("group", "theme", "score", "n")))
    return 0


def cmd_serve(args) -> int:
    store = _open_store(args)
    config = ServiceConfig(token=args.token or os.environ.get("INCAT_TOKEN") or None)
    print(json.dumps({"serving": str(store.root), "port": args.port}))
    serve(store, args.port, config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="incat")
    default_store = os.environ.get("INCAT_STORE", "./incat-store")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--store", default=default_store)
        return p

    p = add("ingest", cmd_ingest, help="parse an NVD JSON feed into the store")
    p.add_argument("--feed", required=True)

    p = add("cluster", cmd_cluster, help="fit the k-modes model")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--init", choices=["huang", "random"], default="huang")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--matrix", help="JSONL/CSV matrix instead of store records")
    p.add_argument("--out", help="also write the model JSON to this file")

    p = add("elbow", cmd_elbow, help="sweep k and report best costs")
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--init", choices=["huang", "random"], default="huang")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--matrix")

    p = add("combos", cmd_combos, help="combination statistics and coverage")
    p.add_argument("--top", type=int)
    p.add_argument("--matrix")

    p = add("themes", cmd_themes, help="derive tagged themes from the latest model")
    p.add_argument("--tagmap")
    p.add_argument("--matrix")

    p = add("preannotate", cmd_preannotate, help="dictionary pre-annotation")
    p.add_argument("--dict")
    p.add_argument("--typesystem")
    p.add_argument("--corpus", help="corpus JSONL to load (else store corpora)")
    p.add_argument("--out", help="write standoff mentions JSONL here too")

    p = add("split", cmd_split, help="train/test/blind corpus split")
    p.add_argument("--ratios", default="0.70,0.23,0.07")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corpus")

    p = add("assign", cmd_assign, help="overlapping annotator assignment")
    p.add_argument("--overlap", type=float, default=0.5)
    p.add_argument("--batch", type=int, default=50)
    p.add_argument("--annotators", default="annotator-a,annotator-b")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corpus")

    p = add("agree", cmd_agree, help="inter-annotator agreement between two standoff files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--mode", choices=["exact", "overlap"], default="exact")
    p.add_argument("--docs", help="file with one shared doc id per line")

    p = add("eval", cmd_eval, help="score predicted mentions against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--mode", choices=["exact", "overlap"], default="exact")

    p = add("gen-assessment", cmd_gen_assessment, help="build an assessment for a theme")
    p.add_argument("--theme", required=True)
    p.add_argument("--bank", help="item bank JSON (bundled bank by default)")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)

    p = add("score", cmd_score, help="score and store a responses file")
    p.add_argument("--responses", required=True)

    add("readiness", cmd_readiness, help="aggregate the readiness matrix")

    p = add("serve", cmd_serve, help="run the HTTP API")
    p.add_argument("--port", type=int, default=int(os.environ.get("INCAT_PORT", "8800")))
    p.add_argument("--token")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DATA_ERRORS as exc:
        print(f"incat: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
