import json
from importlib import resources

import pytest

from incat import store as storage
from incat.cli import main
from incat.cluster import fit_best
from incat.nvd import categorical_matrix
from incat.schema import FeatureSchema
from incat.store import Store


@pytest.fixture()
def feed_path(tmp_path):
    data = resources.files("incat.data").joinpath("nvd_sample_feed.json").read_bytes()
    path = tmp_path / "feed.json"
    path.write_bytes(data)
    return path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ingest_then_combos(tmp_path, feed_path, capsys):
    store_dir = str(tmp_path / "store")
    code, out, err = run(capsys, "ingest", "--feed", str(feed_path), "--store", store_dir)
    assert code == 0
    payload = json.loads(out)
    assert payload["records"] == 3 and payload["with_metrics"] == 2
    assert "ingested 3 records" in err

    code, out, _ = run(capsys, "combos", "--store", store_dir, "--top", "1")
    assert code == 0
    report = json.loads(out)
    assert report["possible"] == 1296
    assert report["observed"] == 2
    assert report["top"]["m"] == 1


def test_cluster_deterministic_model_files(tmp_path, feed_path, capsys):
    store_dir = str(tmp_path / "store")
    run(capsys, "ingest", "--feed", str(feed_path), "--store", store_dir)
    out1 = tmp_path / "m1.json"
    out2 = tmp_path / "m2.json"
    code, _, _ = run(capsys, "cluster", "--store", store_dir, "--k", "2",
                     "--init", "huang", "--seed", "42", "--out", str(out1))
    assert code == 0
    code, _, _ = run(capsys, "cluster", "--store", store_dir, "--k", "2",
                     "--init", "huang", "--seed", "42", "--out", str(out2))
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cluster_output_matches_library(tmp_path, feed_path, capsys):
    store_dir = str(tmp_path / "store")
    run(capsys, "ingest", "--feed", str(feed_path), "--store", store_dir)
    code, out, _ = run(capsys, "cluster", "--store", store_dir, "--k", "2",
                       "--seed", "7", "--restarts", "3")
    assert code == 0
    schema = FeatureSchema.default()
    records = storage.all_records(Store(store_dir), schema)
    _, rows = categorical_matrix(records, schema)
    expected = fit_best(rows, 2, "HUANG", 7, 3, schema=schema).to_dict()
    assert json.loads(out) == expected


def test_full_pipeline_to_readiness(tmp_path, feed_path, capsys):
    store_dir = str(tmp_path / "store")
    run(capsys, "ingest", "--feed", str(feed_path), "--store", store_dir)
    run(capsys, "cluster", "--store", store_dir, "--k", "2", "--seed", "1")
    code, out, _ = run(capsys, "themes", "--store", store_dir)
    assert code == 0
    themes = json.loads(out)
    assert themes and all("tags" in t for t in themes)

    theme_id = themes[0]["theme_id"]
    code, out, _ = run(capsys, "gen-assessment", "--store", store_dir,
                       "--theme", theme_id, "--n", "4", "--seed", "2")
    assert code == 0
    assessment = json.loads(out)

    responses = [
        {
            "user_id": "u1", "group_id": "alpha",
            "assessment_id": assessment["assessment_id"],
            "answers": {i["item_id"]: i["correct_index"] for i in assessment["items"]},
        },
        {
            "user_id": "u2", "group_id": "beta",
            "assessment_id": assessment["assessment_id"],
            "answers": {},
        },
    ]
    resp_file = tmp_path / "responses.json"
    resp_file.write_text(json.dumps(responses))
    code, out, _ = run(capsys, "score", "--store", store_dir, "--responses", str(resp_file))
    assert code == 0
    assert len(json.loads(out)) == 2

    code, out, _ = run(capsys, "readiness", "--store", store_dir)
    assert code == 0
    report = json.loads(out)
    assert report["matrix"]["alpha"][assessment["theme_id"]] == 1.0
    assert report["ranking"][assessment["theme_id"]][0] == "beta"


def test_split_sizes_in_output_json(tmp_path, capsys):
    corpus = tmp_path / "corpus.jsonl"
    lines = [json.dumps({"doc_id": f"d{i}", "source": "THREAT_REPORT", "text": "t"})
             for i in range(100)]
    corpus.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "split", "--corpus", str(corpus),
                       "--ratios", "0.70,0.23,0.07", "--seed", "3",
                       "--store", str(tmp_path / "s"))
    assert code == 0
    payload = json.loads(out)
    assert payload["sizes"] == {"train": 70, "test": 23, "blind": 7}


def test_preannotate_agree_eval_flow(tmp_path, capsys):
    store_dir = str(tmp_path / "store")
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(json.dumps({
        "doc_id": "d1", "source": "THREAT_REPORT",
        "text": "SQL injection in Windows server",
    }) + "\n")
    mentions_file = tmp_path / "mentions.jsonl"
    code, out, _ = run(capsys, "preannotate", "--store", store_dir,
                       "--corpus", str(corpus), "--out", str(mentions_file))
    assert code == 0
    mentions = json.loads(out)
    assert [(m["start"], m["end"]) for m in mentions] == [(0, 13), (17, 24)]

    code, out, _ = run(capsys, "agree", "--a", str(mentions_file),
                       "--b", str(mentions_file), "--mode", "exact",
                       "--store", store_dir)
    assert code == 0
    assert json.loads(out)["overall"] == 1.0

    code, out, _ = run(capsys, "eval", "--pred", str(mentions_file),
                       "--gold", str(mentions_file), "--mode", "overlap",
                       "--store", store_dir)
    assert code == 0
    assert json.loads(out)["f1"] == 1.0


def test_assign_overlap_output(tmp_path, capsys):
    corpus = tmp_path / "corpus.jsonl"
    lines = [json.dumps({"doc_id": f"d{i}", "source": "THREAT_REPORT", "text": "t"})
             for i in range(60)]
    corpus.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "assign", "--corpus", str(corpus), "--batch", "50",
                       "--overlap", "0.5", "--seed", "1", "--store", str(tmp_path / "s"))
    assert code == 0
    payload = json.loads(out)
    names = sorted(payload)
    shared = set(payload[names[0]]) & set(payload[names[1]])
    assert len(shared) == 25


def test_data_error_exit_code_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, _, err = run(capsys, "ingest", "--feed", str(bad), "--store", str(tmp_path / "s"))
    assert code == 2
    assert "incat:" in err


def test_usage_error_exit_code_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cluster", "--k", "not-a-number"])
    assert exc.value.code == 1


def test_entry_point_installed():
    import shutil
    import subprocess

    exe = shutil.which("incat")
    if exe is None:
        pytest.skip("entry point not on PATH")
    result = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert result.returncode == 0
    assert "cluster" in result.stdout
