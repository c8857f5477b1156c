import json

import pytest

from symbench.cli import main
from symbench.harness import (
    parse_curriculum,
    read_jsonl,
    read_manifest,
    sha256_digest,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen_small(tmp_path, capsys, name="d.jsonl", count="6", task="container", seed="0"):
    out = tmp_path / name
    code, stdout, _ = run(
        capsys, "gen", "--task", task, "--count", count, "--seed", seed, "--out", str(out)
    )
    assert code == 0
    return out, stdout


def test_gen_writes_dataset_and_manifest(tmp_path, capsys):
    out, stdout = gen_small(tmp_path, capsys)
    assert "wrote 6 scenarios" in stdout
    records = read_jsonl(out)
    assert len(records) == 6
    manifest = read_manifest(tmp_path / "d.manifest.toml")
    assert manifest.count == 6
    assert manifest.digest == sha256_digest(out.read_bytes())
    assert manifest.digest in stdout


def test_gen_preset_with_count_override(tmp_path, capsys):
    out = tmp_path / "t.jsonl"
    code, stdout, _ = run(
        capsys, "gen", "--preset", "train-default", "--count", "5", "--out", str(out)
    )
    assert code == 0
    assert len(read_jsonl(out)) == 5
    assert read_manifest(tmp_path / "t.manifest.toml").name == "train-default"


def test_gen_preset_task_cross_check(tmp_path, capsys):
    code, _, stderr = run(
        capsys,
        "gen", "--preset", "train-default", "--task", "nav_route",
        "--count", "2", "--out", str(tmp_path / "x.jsonl"),
    )
    assert code == 1
    assert "is for task 'container'" in stderr


def test_gen_regenerates_from_manifest(tmp_path, capsys):
    out, stdout = gen_small(tmp_path, capsys, task="nav_result", count="8")
    digest = stdout.strip().splitlines()[-1]
    copy = tmp_path / "copy.jsonl"
    code, stdout2, _ = run(
        capsys, "gen", "--config", str(tmp_path / "d.manifest.toml"), "--out", str(copy)
    )
    assert code == 0
    assert copy.read_bytes() == out.read_bytes()
    assert digest in stdout2


def test_gen_rejects_invalid_count(tmp_path, capsys):
    code, _, stderr = run(
        capsys, "gen", "--task", "container", "--count", "0", "--out", str(tmp_path / "x.jsonl")
    )
    assert code == 1
    assert "count must be positive" in stderr


def test_gen_requires_some_source(tmp_path, capsys):
    code, _, stderr = run(capsys, "gen", "--out", str(tmp_path / "x.jsonl"))
    assert code == 1
    assert "either --task, --preset, or --config" in stderr


def test_gen_io_error_is_exit_2(tmp_path, capsys):
    code, _, stderr = run(
        capsys,
        "gen", "--task", "container", "--count", "2",
        "--out", str(tmp_path / "missing_dir" / "x.jsonl"),
    )
    assert code == 2
    assert "error:" in stderr


def test_score_oracle_baseline(tmp_path, capsys):
    out, _ = gen_small(tmp_path, capsys)
    report_path = tmp_path / "report.json"
    code, stdout, _ = run(
        capsys,
        "score", "--dataset", str(out), "--predictor", "oracle",
        "--out-report", str(report_path),
    )
    assert code == 0
    assert "exact      1.000000" in stdout
    assert "bleu       1.000000" in stdout
    doc = json.loads(report_path.read_text(encoding="utf-8"))
    assert doc["aggregates"]["count"] == 6


def test_score_external_predictions(tmp_path, capsys):
    out, _ = gen_small(tmp_path, capsys)
    preds = tmp_path / "p.jsonl"
    code, _, _ = run(
        capsys,
        "score", "--dataset", str(out), "--predictor", "oracle",
        "--out-predictions", str(preds),
    )
    assert code == 0
    code, stdout, _ = run(capsys, "score", "--dataset", str(out), "--predictions", str(preds))
    assert code == 0
    assert "exact      1.000000" in stdout


def test_score_reports_missing_ids(tmp_path, capsys):
    out, _ = gen_small(tmp_path, capsys)
    preds = tmp_path / "p.jsonl"
    preds.write_text('{"id": "nope", "prediction": "x"}\n', encoding="utf-8")
    code, _, stderr = run(capsys, "score", "--dataset", str(out), "--predictions", str(preds))
    assert code == 1
    assert "without predictions" in stderr
    assert "nope" in stderr


def test_score_missing_dataset_is_exit_2(tmp_path, capsys):
    code, _, stderr = run(
        capsys, "score", "--dataset", str(tmp_path / "absent.jsonl"), "--predictor", "oracle"
    )
    assert code == 2
    assert "error:" in stderr


def test_score_usage_error_without_predictor(tmp_path, capsys):
    out, _ = gen_small(tmp_path, capsys)
    with pytest.raises(SystemExit) as exc:
        main(["score", "--dataset", str(out)])
    assert exc.value.code == 2


def test_grid_fig2_cli(tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    code, stdout, _ = run(
        capsys,
        "grid", "--task", "container", "--grid-preset", "fig2",
        "--out-csv", str(csv_path),
    )
    assert code == 0
    assert "grid 18x4 cells, 0 infeasible" in stdout
    assert "examples   7200" in stdout
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 19  # header + objects 2..19
    assert lines[0] == "n_objects/n_containers,2,3,4,5"
    assert all(line.count(",") == 4 for line in lines)
    code, _, stderr = run(
        capsys,
        "grid", "--task", "container", "--grid-preset", "no-such-grid",
        "--out-csv", str(csv_path),
    )
    assert code == 1
    assert "no-such-grid" in stderr


def test_gibberish_round_trip(tmp_path, capsys):
    out, _ = gen_small(tmp_path, capsys, task="hard_object", count="4")
    map_path = tmp_path / "map.tsv"
    swapped = tmp_path / "g.jsonl"
    code, stdout, _ = run(
        capsys, "gibberish", "--in", str(out), "--map", str(map_path), "--out", str(swapped)
    )
    assert code == 0
    assert "built new substitution map" in stdout
    assert map_path.exists()
    restored = tmp_path / "back.jsonl"
    code, _, _ = run(
        capsys,
        "gibberish", "--in", str(swapped), "--map", str(map_path),
        "--invert", "--out", str(restored),
    )
    assert code == 0
    assert restored.read_bytes() == out.read_bytes()
    # the transformed dataset carries a manifest recording the map digest
    manifest = read_manifest(tmp_path / "g.manifest.toml")
    assert manifest.gibberish_map_digest is not None
    assert manifest.name.endswith("-gibberish")


def test_vocab_listing_and_derivation(tmp_path, capsys):
    code, stdout, _ = run(capsys, "vocab")
    assert code == 0
    assert "train" in stdout and "rooms" in stdout
    out = tmp_path / "train.txt"
    code, stdout, _ = run(capsys, "vocab", "--derive", "train", "--out", str(out))
    assert code == 0
    assert out.exists()
    assert "121 words" in stdout
    code, _, stderr = run(capsys, "vocab", "--derive", "bogus")
    assert code == 1
    assert "unknown word set" in stderr


def test_vocab_top_n_sets(capsys):
    code, stdout, _ = run(capsys, "vocab", "--top-n", "25", "--derive", "train_common")
    assert code == 0
    assert "25 words" in stdout


def test_curriculum_command(tmp_path, capsys):
    out = tmp_path / "c.toml"
    code, stdout, _ = run(
        capsys, "curriculum", "--name", "ContNav5050-HardObj", "--out", str(out)
    )
    assert code == 0
    assert "total 3000 steps" in stdout
    manifest = parse_curriculum(out.read_text(encoding="utf-8"))
    assert manifest.total_steps == 3000
    code, _, stderr = run(capsys, "curriculum", "--name", "Nope")
    assert code == 1
    assert "unknown curriculum preset" in stderr


def test_presets_listing(capsys):
    code, stdout, _ = run(capsys, "presets")
    assert code == 0
    for expected in ("train-default", "interp", "sys-extrap", "fig2", "nav-fig3", "HardObj"):
        assert expected in stdout


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_stdout_is_plain_text(tmp_path, capsys):
    _, stdout = gen_small(tmp_path, capsys, name="plain.jsonl")
    assert "\x1b[" not in stdout  # no ANSI escapes, NO_COLOR-safe by construction
