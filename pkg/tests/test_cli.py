from __future__ import annotations

import pytest
from click.testing import CliRunner

from mailweave.cli import cli, main

import oracles


@pytest.fixture()
def runner():
    return CliRunner()


def _ingest(runner, wh_path, fixtures_dir):
    result = runner.invoke(
        cli,
        ["--warehouse", str(wh_path), "ingest", str(fixtures_dir / "list-a.mbox"), "--list", "xsl"],
        obj={},
    )
    assert result.exit_code == 0, result.output
    return result


def test_ingest_prints_report(runner, tmp_path, fixtures_dir):
    result = _ingest(runner, tmp_path / "wh", fixtures_dir)
    assert "accepted            10" in result.output
    assert "skipped             1" in result.output
    assert "duplicates_dropped  1" in result.output


def test_parse_check_needs_no_warehouse(runner, fixtures_dir):
    result = runner.invoke(
        cli, ["parse-check", str(fixtures_dir / "list-b.jsonl"), "--list", "xmlschema"], obj={}
    )
    assert result.exit_code == 0
    assert "accepted            7" in result.output


def test_ingest_both_formats_and_query(runner, tmp_path, fixtures_dir):
    wh = tmp_path / "wh"
    runner.invoke(cli, ["--warehouse", str(wh), "ingest",
                        str(fixtures_dir / "list-a.mbox"), "--list", "xsl"], obj={})
    runner.invoke(cli, ["--warehouse", str(wh), "ingest",
                        str(fixtures_dir / "list-b.jsonl"), "--list", "xmlschema"], obj={})
    result = runner.invoke(cli, ["--warehouse", str(wh), "query", "FROM messages COUNT"], obj={})
    assert result.exit_code == 0
    assert result.output.strip() == "17"


def test_query_empty_warehouse(runner, tmp_path):
    result = runner.invoke(
        cli, ["--warehouse", str(tmp_path / "wh"), "query", "FROM messages COUNT"], obj={}
    )
    assert result.exit_code == 0
    assert result.output.strip() == "0"


def test_export_io_failure_exit_code(tmp_path):
    code = main(["--warehouse", str(tmp_path / "wh"), "export", "posts-per-person",
                 "--format", "csv", "--out", str(tmp_path / "no-such-dir" / "x.csv")])
    assert code == 3


def test_full_pipeline_and_determinism(runner, tmp_path, fixtures_dir):
    wh = tmp_path / "wh"
    runner.invoke(cli, ["--warehouse", str(wh), "ingest",
                        str(fixtures_dir / "corpus.mbox"), "--list", "xquery"], obj={})
    resolved = runner.invoke(cli, ["--warehouse", str(wh), "resolve",
                                   "--asserted-at", "2002-05-01"], obj={})
    assert resolved.exit_code == 0
    assert "resolved 8 persons from 18 messages" in resolved.output

    args = ["--warehouse", str(wh), "query",
            "FROM messages GROUP BY sender.person COUNT ORDER BY count DESC", "--format", "csv"]
    first = runner.invoke(cli, args, obj={})
    second = runner.invoke(cli, args, obj={})
    assert first.exit_code == 0
    assert first.output == second.output
    assert first.output.splitlines()[1] == "doe@a.com,5"


def test_graph_command_text_output(runner, tmp_path, fixtures_dir):
    wh = tmp_path / "wh"
    runner.invoke(cli, ["--warehouse", str(wh), "ingest",
                        str(fixtures_dir / "corpus.mbox"), "--list", "xquery"], obj={})
    runner.invoke(cli, ["--warehouse", str(wh), "resolve", "--asserted-at", "2002-05-01"], obj={})
    result = runner.invoke(cli, ["--warehouse", str(wh), "graph", "answering",
                                 "--person", "doe@a.com"], obj={})
    assert result.exit_code == 0
    lines = set(result.output.splitlines())
    assert lines == {"doe@a.com -> chen@c.com [1]", "doe@a.com -> mary@b.org [2]"}


def test_export_command_writes_graphml(runner, tmp_path, fixtures_dir):
    wh = tmp_path / "wh"
    runner.invoke(cli, ["--warehouse", str(wh), "ingest",
                        str(fixtures_dir / "corpus.mbox"), "--list", "xquery"], obj={})
    runner.invoke(cli, ["--warehouse", str(wh), "resolve", "--asserted-at", "2002-05-01"], obj={})
    out = tmp_path / "social.graphml"
    result = runner.invoke(cli, ["--warehouse", str(wh), "export", "social",
                                 "--format", "graphml", "--out", str(out)], obj={})
    assert result.exit_code == 0
    nodes, edges, _ = oracles.parse_graphml(out.read_text(encoding="utf-8"))
    assert edges == oracles.brute_force_social_edges()


def test_exit_codes():
    assert main(["no-such-command"]) == 1
    assert main(["--warehouse", "/tmp/nonexistent-wh-x", "query", "FROM"]) == 2


def test_query_syntax_error_is_data_error(tmp_path, capsys):
    code = main(["--warehouse", str(tmp_path / "wh"), "query", "FROM messages GROUP BY"])
    assert code == 2
    err = capsys.readouterr().err
    assert "error[data]" in err
    assert "line 1" in err


def test_warehouse_env_var(runner, tmp_path, fixtures_dir, monkeypatch):
    monkeypatch.setenv("MAILWEAVE_WAREHOUSE", str(tmp_path / "wh"))
    result = runner.invoke(cli, ["ingest", str(fixtures_dir / "list-a.mbox"), "--list", "xsl"], obj={})
    assert result.exit_code == 0
    assert (tmp_path / "wh" / "index").exists()


def test_missing_warehouse_is_usage_error(runner, fixtures_dir, monkeypatch):
    monkeypatch.delenv("MAILWEAVE_WAREHOUSE", raising=False)
    assert main(["query", "FROM messages COUNT"]) == 1
