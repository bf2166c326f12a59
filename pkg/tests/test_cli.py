import json

import pytest

from convo_miner.cli import main
from convo_miner.corpus import load_corpus
from convo_miner.fixture import generate_fixture


@pytest.fixture(scope="module")
def fixture_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "fixture.json"
    path.write_text(json.dumps(generate_fixture()))
    return str(path)


@pytest.fixture()
def broken_file(tmp_path):
    doc = generate_fixture(n_students=4, n_tasks=3, n_conversations=6, n_turns=12)
    doc["conversations"][0]["turns"][0]["codes"] = ["XX"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestValidate:
    def test_valid_corpus_exits_zero(self, fixture_file, capsys):
        assert main(["validate", fixture_file]) == 0
        assert "ok" in capsys.readouterr().out

    def test_dangling_code_exits_one_and_names_code(self, broken_file, capsys):
        assert main(["validate", broken_file]) == 1
        assert "'XX'" in capsys.readouterr().err

    def test_unreadable_file_exits_one(self, capsys):
        assert main(["validate", "/does/not/exist.json"]) == 1
        assert "error" in capsys.readouterr().err


class TestIngest:
    def test_prints_stats(self, fixture_file, capsys):
        assert main(["ingest", fixture_file]) == 0
        out = capsys.readouterr().out
        assert "conversations:  744" in out
        assert "turns:          2507" in out

    def test_out_writes_loadable_normalized_corpus(self, fixture_file, tmp_path, capsys):
        out_path = tmp_path / "normalized.json"
        assert main(["ingest", fixture_file, "--out", str(out_path)]) == 0
        normalized = load_corpus(out_path.read_bytes())
        original = load_corpus(open(fixture_file, "rb").read())
        assert normalized == original

    def test_validation_failure_exits_via_systemexit(self, broken_file):
        with pytest.raises(SystemExit) as excinfo:
            main(["ingest", broken_file])
        assert excinfo.value.code == 1


class TestServe:
    def test_env_port_overrides_flag(self, fixture_file, monkeypatch, capsys):
        import uvicorn

        seen = {}
        monkeypatch.setattr(uvicorn, "run", lambda app, **kwargs: seen.update(kwargs))
        monkeypatch.setenv("CONVO_MINER_PORT", "9321")
        assert main(["serve", fixture_file, "--port", "8000"]) == 0
        assert seen["port"] == 9321

    def test_flag_port_used_without_env(self, fixture_file, monkeypatch):
        import uvicorn

        seen = {}
        monkeypatch.setattr(uvicorn, "run", lambda app, **kwargs: seen.update(kwargs))
        monkeypatch.delenv("CONVO_MINER_PORT", raising=False)
        assert main(["serve", fixture_file, "--port", "8001"]) == 0
        assert seen["port"] == 8001

    def test_bad_env_port_exits_one(self, fixture_file, monkeypatch, capsys):
        monkeypatch.setenv("CONVO_MINER_PORT", "not-a-port")
        assert main(["serve", fixture_file]) == 1
        assert "CONVO_MINER_PORT" in capsys.readouterr().err


class TestReport:
    def test_json_report_round_trips(self, fixture_file, tmp_path):
        out_path = tmp_path / "report.json"
        assert main(["report", fixture_file, "--format", "json", "--out", str(out_path)]) == 0
        report = json.loads(out_path.read_text())
        assert report["overview"]["conversations"] == 744
        assert len(report["top_patterns"]["sequence"]) == 20
        assert len(report["top_patterns"]["set"]) == 20
        assert len(report["task_type_summaries"]) == 7
        assert report["task_trees"]

    def test_markdown_report(self, fixture_file, tmp_path):
        out_path = tmp_path / "report.md"
        assert main(["report", fixture_file, "--format", "md", "--out", str(out_path)]) == 0
        text = out_path.read_text()
        assert text.startswith("# Corpus report")
        assert "| L | Pattern | C | Avg. |" in text
