from __future__ import annotations

import json
from pathlib import Path

import pytest

from poemetrics.cli import main

from conftest import DATA_DIR

HUMAN = str(DATA_DIR / "fixture_human.jsonl")
GPT = str(DATA_DIR / "fixture_gpt.jsonl")

SINGLE_CORPUS_TABLES = {"lengths", "quatrains", "rhyme", "meter", "pronouns", "touchstones"}


def _tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def test_analyze_writes_six_table_families(tmp_path, capsys):
    out = tmp_path / "report"
    assert main(["analyze", HUMAN, GPT, "--out", str(out), "--min-docs", "1"]) == 0
    tables = {p.stem for p in (out / "tables").glob("*.csv")}
    assert tables == SINGLE_CORPUS_TABLES
    report = json.loads((out / "report.json").read_text())
    assert set(report["tables"]) == SINGLE_CORPUS_TABLES
    assert report["metadata"]["dictionary_sha256"]
    assert report["metadata"]["corpora"] == {"fixture_human": 4, "fixture_gpt": 4}
    grids = sorted(p.name for p in (out / "grids").glob("*.csv"))
    assert grids == ["occupancy_fixture_gpt.csv", "occupancy_fixture_human.csv"]


def test_analyze_compare_adds_logodds_tables(tmp_path):
    out = tmp_path / "report"
    assert main([
        "analyze", GPT, HUMAN, "--compare", "--out", str(out), "--min-docs", "1",
    ]) == 0
    tables = {p.stem for p in (out / "tables").glob("*.csv")}
    assert tables == SINGLE_CORPUS_TABLES | {"logodds", "first_words"}
    header = (out / "tables" / "logodds.csv").read_text().splitlines()[0]
    assert header == "word,delta,variance,z,doc_freq_a,doc_freq_b"


def test_analyze_is_deterministic_across_thread_counts(tmp_path):
    out1 = tmp_path / "t1"
    out8 = tmp_path / "t8"
    args = ["analyze", HUMAN, GPT, "--compare", "--min-docs", "1", "--emit-plots"]
    assert main([*args, "--out", str(out1), "--threads", "1"]) == 0
    assert main([*args, "--out", str(out8), "--threads", "8"]) == 0
    assert _tree_bytes(out1) == _tree_bytes(out8)


def test_analyze_rerun_is_byte_identical(tmp_path):
    out1 = tmp_path / "r1"
    out2 = tmp_path / "r2"
    for out in (out1, out2):
        assert main(["analyze", GPT, "--out", str(out)]) == 0
    assert _tree_bytes(out1) == _tree_bytes(out2)


def test_rhyme_subcommand_writes_only_rhyme(tmp_path):
    out = tmp_path / "rhyme-only"
    assert main(["rhyme", GPT, "--out", str(out)]) == 0
    assert {p.stem for p in (out / "tables").glob("*.csv")} == {"rhyme"}
    rows = (out / "tables" / "rhyme.csv").read_text().splitlines()
    assert rows[0] == (
        "source,style,poems,poems_with_rhyme_pct,avg_rhymed_fraction,pooled_rhymed_fraction"
    )
    assert any(row.startswith("fixture_gpt,ALL,") for row in rows)


def test_structure_subcommand_writes_grids(tmp_path):
    out = tmp_path / "structure-only"
    assert main(["structure", HUMAN, "--out", str(out),
                 "--heatmap-rows", "20", "--heatmap-cols", "40"]) == 0
    assert {p.stem for p in (out / "tables").glob("*.csv")} == {"lengths", "quatrains"}
    grid_rows = (out / "grids" / "occupancy_fixture_human.csv").read_text().splitlines()
    assert len(grid_rows) == 20
    assert len(grid_rows[0].split(",")) == 40


def test_compare_subcommand(tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", GPT, HUMAN, "--out", str(out), "--min-docs", "1"]) == 0
    assert {p.stem for p in (out / "tables").glob("*.csv")} == {"logodds", "first_words"}


def test_json_table_format(tmp_path):
    out = tmp_path / "json-out"
    assert main(["meter", GPT, "--out", str(out), "--format", "json"]) == 0
    rows = json.loads((out / "tables" / "meter.json").read_text())
    assert all("pct_dominant_iambic" in row for row in rows)


def test_emit_plots_writes_svg(tmp_path):
    out = tmp_path / "plots"
    assert main(["analyze", GPT, "--out", str(out), "--emit-plots"]) == 0
    names = {p.name for p in (out / "plots").glob("*.svg")}
    assert "lengths_fixture_gpt.svg" in names
    assert "rhyme_pct.svg" in names
    assert "occupancy_fixture_gpt.svg" in names
    svg = (out / "plots" / "rhyme_pct.svg").read_text()
    assert svg.startswith("<svg ")


def test_per_poem_rhyme_annotations(tmp_path):
    out = tmp_path / "annotated"
    assert main(["rhyme", GPT, "--out", str(out), "--per-poem"]) == 0
    lines = (out / "annotations" / "rhyme_fixture_gpt.jsonl").read_text().splitlines()
    assert len(lines) == 4
    first = json.loads(lines[0])
    assert first["id"] == "gpt4-0001"
    assert first["rhymed_fraction"] == 1.0


def test_strip_prefatory_default_on(tmp_path):
    # A sonnet-styled record with a leading dedication is trimmed to 14
    # lines by default and left alone with --no-strip-prefatory.
    body = (DATA_DIR / "sonnet18.txt").read_text().rstrip("\n")
    record = {"id": "s", "text": "for the reader:\n" + body, "source": "human",
              "style": "sonnet"}
    corpus_path = tmp_path / "dedicated.jsonl"
    corpus_path.write_text(json.dumps(record) + "\n")

    out_on = tmp_path / "on"
    assert main(["structure", str(corpus_path), "--out", str(out_on)]) == 0
    rows = (out_on / "tables" / "lengths.csv").read_text().splitlines()
    assert any(row.startswith("dedicated,ALL,1,14.000000") for row in rows)

    out_off = tmp_path / "off"
    assert main(["structure", str(corpus_path), "--out", str(out_off),
                 "--no-strip-prefatory"]) == 0
    rows = (out_off / "tables" / "lengths.csv").read_text().splitlines()
    assert any(row.startswith("dedicated,ALL,1,15.000000") for row in rows)


def test_directory_corpus_with_source_default(tmp_path):
    out = tmp_path / "dir-report"
    assert main([
        "structure", str(DATA_DIR / "poems_dir"), "--out", str(out),
        "--source-default", "human",
    ]) == 0
    rows = (out / "tables" / "lengths.csv").read_text().splitlines()
    assert any(row.startswith("poems_dir,ALL,2,") for row in rows)


def test_missing_corpus_argument_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2


def test_nonexistent_corpus_path_fails_cleanly(tmp_path, capsys):
    code = main(["analyze", str(tmp_path / "missing.jsonl"), "--out", str(tmp_path / "o")])
    assert code == 1
    assert "does not exist" in capsys.readouterr().err


def test_compare_requires_two_corpora(tmp_path, capsys):
    code = main(["analyze", GPT, "--compare", "--out", str(tmp_path / "o")])
    assert code == 1
    assert "two corpora" in capsys.readouterr().err


def test_dry_run_prints_full_grid(capsys):
    assert main(["generate", "--model", "gpt-4", "--dry-run"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2880
    assert all(line.startswith("Write a poem about the subject of ") for line in lines)


def test_dry_run_custom_grid(capsys):
    assert main([
        "generate", "--model", "gpt-4", "--dry-run",
        "--styles", "sonnet", "--subjects", "love", "--templates", "figurative",
    ]) == 0
    out = capsys.readouterr().out.strip()
    assert out == (
        "Write a poem about the subject of love in the following form or style: "
        "sonnet. Do not use the actual word(s) love or sonnet in the poem."
    )


def test_generate_requires_out_path(capsys):
    assert main(["generate", "--model", "gpt-4"]) == 2
    assert "--out" in capsys.readouterr().err


def test_generate_requires_api_key(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("POEM_TEST_KEY", raising=False)
    code = main([
        "generate", "--model", "gpt-4", "--out", str(tmp_path / "c.jsonl"),
        "--api-key-env", "POEM_TEST_KEY",
    ])
    assert code == 1
    assert "POEM_TEST_KEY" in capsys.readouterr().err


def test_generate_against_mock_endpoint(tmp_path, monkeypatch):
    from mock_server import MockChatEndpoint

    monkeypatch.setenv("POEM_TEST_KEY", "k")
    out = tmp_path / "gen.jsonl"
    with MockChatEndpoint() as endpoint:
        code = main([
            "generate", "--model", "gpt-4", "--out", str(out),
            "--endpoint", endpoint.url, "--api-key-env", "POEM_TEST_KEY",
            "--styles", "haiku", "--subjects", "nature", "--templates", "general",
            "--max-retries", "0",
        ])
    assert code == 0
    from poemetrics.corpus import load_corpus

    assert len(load_corpus(out)) == 1
