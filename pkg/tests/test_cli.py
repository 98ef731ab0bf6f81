import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from koshagraph.cli import main
from koshagraph.service import ServiceConfig, create_app, default_users_path

from conftest import APPENDIX_CORPUS, DEMO_ANNOTATIONS, SECTIONS_CORPUS


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, tmp_path, *args):
    return runner.invoke(main, ["--data-dir", str(tmp_path / "data"), *args],
                         catch_exceptions=False)


def seed(runner, tmp_path):
    assert invoke(runner, tmp_path, "import-corpus", str(APPENDIX_CORPUS)).exit_code == 0
    assert invoke(runner, tmp_path, "import-corpus", str(SECTIONS_CORPUS)).exit_code == 0
    assert invoke(runner, tmp_path, "import-annotations", str(DEMO_ANNOTATIONS)).exit_code == 0


def test_import_and_stats(runner, tmp_path):
    result = invoke(runner, tmp_path, "import-corpus", str(APPENDIX_CORPUS))
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert (payload["chapters"], payload["verses"], payload["lines"]) == (1, 10, 21)

    stats = json.loads(invoke(runner, tmp_path, "stats").output)
    assert stats["nodes"] == 0
    assert stats["corpus"]["lines"] == 21


def test_full_pipeline(runner, tmp_path):
    seed(runner, tmp_path)
    stats = json.loads(invoke(runner, tmp_path, "stats").output)
    assert stats["nodes"] == 29
    assert stats["edges"] == 24

    query = invoke(runner, tmp_path, "query", "tridosha_increased_by", "कफ")
    rows = json.loads(query.output)["rows"]
    assert [row["entity"]["lemma"] for row in rows] == ["गोधूम"]

    raw = invoke(runner, tmp_path, "query", "--raw",
                 'MATCH (s)-[:IS_SYNONYM_OF]->(x) WHERE x.lemma = "गोधूम" RETURN s')
    assert [row["s"]["lemma"] for row in json.loads(raw.output)["rows"]] == ["सुमन"]


def test_suggest_below_minimum(runner, tmp_path):
    seed(runner, tmp_path)
    assert json.loads(invoke(runner, tmp_path, "suggest", "ma").output)["suggestions"] == []
    got = json.loads(invoke(runner, tmp_path, "suggest", "god").output)["suggestions"]
    assert got == ["गोधूम"]


def test_curate_dry_run_then_commit(runner, tmp_path):
    seed(runner, tmp_path)
    dry = json.loads(invoke(runner, tmp_path, "curate", "--pass", "canonicalize",
                            "--dry-run").output)
    assert dry["dry_run"] is True
    before = json.loads(invoke(runner, tmp_path, "stats").output)
    committed = json.loads(invoke(runner, tmp_path, "canonicalize").output)
    assert committed["dry_run"] is False
    after = json.loads(invoke(runner, tmp_path, "stats").output)
    assert after["edges"] <= before["edges"]
    # the canonical substitution now answers synonym lookups in one hop
    query = invoke(runner, tmp_path, "query", "properties_of", "क्षव")
    rows = json.loads(query.output)["rows"]
    assert [row["p"]["lemma"] for row in rows] == ["उष्ण"]


def test_conflicts_pass(runner, tmp_path):
    seed(runner, tmp_path)
    report = json.loads(invoke(runner, tmp_path, "curate", "--pass", "conflicts").output)
    assert [c["lemma"] for c in report["conflicts"]] == ["ज्वर"]


def test_export_graph(runner, tmp_path):
    seed(runner, tmp_path)
    out = tmp_path / "graph.json"
    result = invoke(runner, tmp_path, "export-graph", "--out", str(out))
    assert result.exit_code == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert len(doc["nodes"]) == 29
    assert len(doc["edges"]) == 24


def test_error_is_structured_json(runner, tmp_path):
    seed(runner, tmp_path)
    result = runner.invoke(main, ["--data-dir", str(tmp_path / "data"),
                                  "query", "properties_of", "नास्त्येव"])
    assert result.exit_code == 1
    err = json.loads(result.stderr)
    assert err["error"]["type"] == "unknown_entity"


def test_pretty_output(runner, tmp_path):
    seed(runner, tmp_path)
    result = invoke(runner, tmp_path, "query", "properties_of", "गोधूम", "--pretty")
    assert "गोधूम" in result.output
    assert "मधुर" in result.output
    with pytest.raises(json.JSONDecodeError):
        json.loads(result.output)


def test_cli_and_http_payloads_are_identical(runner, tmp_path):
    seed(runner, tmp_path)
    cli_stats = invoke(runner, tmp_path, "stats").output.strip()
    cli_query = invoke(runner, tmp_path, "query", "tridosha_increased_by", "कफ").output.strip()
    cli_export = invoke(runner, tmp_path, "export-graph").output.strip()

    config = ServiceConfig(data_dir=tmp_path / "data", users_file=default_users_path(),
                           load_fixtures=False)
    app = create_app(config)
    with TestClient(app) as client:
        headers = {"X-Auth-Token": "querier-token"}
        http_stats = client.get("/api/graph/stats", headers=headers).text.strip()
        http_query = client.post(
            "/api/query", headers=headers,
            json={"template_id": "tridosha_increased_by", "args": ["कफ"]}).text.strip()
        http_export = client.get("/api/graph/export", headers=headers).text.strip()

    def drop_version(text):
        payload = json.loads(text)
        payload.pop("graph_version", None)
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))

    # graph_version counts replay steps per process; everything else is byte-equal
    assert drop_version(cli_stats) == drop_version(http_stats)
    assert drop_version(cli_query) == drop_version(http_query)
    assert cli_export == http_export
