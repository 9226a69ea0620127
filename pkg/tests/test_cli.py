import json

import pytest

from scenebench.cli import main
from scenebench.fixtures import five_object_scene
from scenebench.scene import save_scene


@pytest.fixture()
def scene_file(tmp_path):
    path = tmp_path / "fiveobj.json"
    save_scene(five_object_scene(), path)
    return path


def test_validate_scene_ok(scene_file, capsys):
    assert main(["validate-scene", str(scene_file)]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_scene_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate-scene", str(bad)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "SceneFormatError"


def test_build_occupancy_writes_pgm(tmp_path, capsys):
    out = tmp_path / "map.pgm"
    assert main(["build-occupancy", "--scene", "fiveobj", "--out", str(out)]) == 0
    assert out.read_bytes().startswith(b"P5")


def test_gen_episodes_split_sizes(tmp_path, capsys):
    out = tmp_path / "eps.jsonl"
    assert main(["gen-episodes", "--scene", "house", "--task", "object_loconav",
                 "--count", "12", "--seed", "7", "--out", str(out)]) == 0
    lines = [json.loads(l) for l in out.read_text().splitlines()]
    assert len(lines) == 12
    assert sum(1 for l in lines if l["split"] == "validation") == 4


def test_gen_episodes_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["gen-episodes", "--scene", "house", "--task", "loco_manip",
            "--count", "6", "--seed", "9"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_bench_and_eval_pipeline(tmp_path, capsys):
    eps = tmp_path / "eps.jsonl"
    main(["gen-episodes", "--scene", "house", "--task", "object_loconav",
          "--count", "6", "--seed", "2", "--out", str(eps)])
    results = tmp_path / "results.jsonl"
    report = tmp_path / "report.json"
    code = main(["run-bench", "--scene", "house", "--episodes", str(eps),
                 "--agent", "random", "--split", "validation", "--seed", "1",
                 "--out", str(results), "--report", str(report)])
    assert code == 0
    out = capsys.readouterr().out
    assert "SR" in out
    payload = json.loads(report.read_text())
    assert payload["task"] == "object_loconav"
    assert payload["schema_version"] == 1

    code = main(["eval", "--results", str(results)])
    assert code == 0
    assert "SR" in capsys.readouterr().out


def test_eval_empty_results_fails(tmp_path, capsys):
    empty = tmp_path / "none.jsonl"
    empty.write_text("")
    assert main(["eval", "--results", str(empty)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "UndefinedMetricError"


def test_qa_eval(tmp_path, capsys):
    qa = tmp_path / "qa.jsonl"
    records = [
        {"question": "Which room is it in?", "gold_answer": "It is in the kitchen.",
         "target": "chair/c"},
        {"question": "What is near it?", "gold_answer": "It stands near a window.",
         "target": "chair/a"},
    ]
    qa.write_text("\n".join(json.dumps(r) for r in records) + "\n")
    assert main(["qa-eval", "--scene", "fiveobj", "--qa", str(qa)]) == 0
    out = capsys.readouterr().out
    assert "mean score" in out


def test_make_fixtures(tmp_path):
    assert main(["make-fixtures", "--out", str(tmp_path / "scenes")]) == 0
    assert (tmp_path / "scenes" / "house.json").exists()


def test_unknown_subcommand_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2
