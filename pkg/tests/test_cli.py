import json

import pytest
from click.testing import CliRunner

from kgwebqa.cli import main
from kgwebqa.kg import KnowledgeGraph, Triple
from kgwebqa.web.fixture_server import FixtureWebServer

QUESTION = "what does head 3 know about?"

PAGES = {
    "t3": "<p>" + "Everyone agrees that head 3 knows about the target 3 item "
          "and discusses it at length in public talks all the time." + "</p>",
}
RESULTS = {QUESTION: [{"page": "t3", "rank": 1}]}


@pytest.fixture(scope="module")
def server():
    with FixtureWebServer(RESULTS, PAGES) as srv:
        yield srv


@pytest.fixture(scope="module")
def kg_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("kg") / "graph.tsv"
    KnowledgeGraph([
        Triple("head 3", "knows.about.3", "target 3 item"),
        Triple("head 4", "knows.about.4", "target 4 item"),
    ]).save(path)
    return str(path)


@pytest.fixture(scope="module")
def dataset_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "data.jsonl"
    rows = [
        {"id": "q1", "question": QUESTION, "topic_entities": ["head 3"],
         "answers": ["target 3 item"]},
        {"id": "q2", "question": "what does head 4 know about?",
         "topic_entities": ["head 4"], "answers": ["something else"]},
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return str(path)


def _runner():
    return CliRunner()


def _answer_args(kg_file, cache, extra=()):
    return ["answer", QUESTION, "--topic-entity", "head 3", "--mode", "kg+web",
            "--kg", kg_file, "--cache", cache, "--clock", "fixed", *extra]


def test_answer_text_output_lists_sources(server, kg_file, tmp_path):
    result = _runner().invoke(
        main, _answer_args(kg_file, str(tmp_path / "c.sqlite")),
        env={"SEARCH_API_ENDPOINT": server.search_endpoint},
    )
    assert result.exit_code == 0, result.output
    assert "Answer based on reference [1]:" in result.output
    assert "Sources:" in result.output
    assert "[1] KG" in result.output
    assert "[2] http" in result.output


def test_answer_is_byte_identical_across_runs(server, kg_file, tmp_path):
    outputs = []
    for i in range(3):
        result = _runner().invoke(
            main, _answer_args(kg_file, str(tmp_path / f"c_run{i}.sqlite"),
                               extra=["--json", "--trace"]),
            env={"SEARCH_API_ENDPOINT": server.search_endpoint},
        )
        assert result.exit_code == 0, result.output
        outputs.append(result.stdout_bytes)
    assert outputs[0] == outputs[1] == outputs[2]
    payload = json.loads(outputs[0])
    assert payload["schema_version"] == 1
    assert payload["llm_calls"] == 1


def test_answer_kg_mode_missing_entity_fails_cleanly(kg_file, tmp_path):
    result = _runner().invoke(main, [
        "answer", "who?", "--topic-entity", "ghost", "--mode", "kg",
        "--kg", kg_file, "--cache", str(tmp_path / "c2.sqlite"),
    ])
    assert result.exit_code == 3
    error = json.loads(result.stderr)
    assert error["error"]["type"] == "DataError"


def test_answer_requires_kg_for_kg_mode(tmp_path):
    result = _runner().invoke(main, [
        "answer", "q", "--mode", "kg", "--cache", str(tmp_path / "c3.sqlite"),
    ])
    assert result.exit_code == 2


def test_evaluate_writes_report_and_csv(server, kg_file, dataset_file, tmp_path):
    out = tmp_path / "report.json"
    csv_out = tmp_path / "dist.csv"
    result = _runner().invoke(main, [
        "evaluate", "--dataset", dataset_file, "--output", str(out),
        "--csv", str(csv_out), "--mode", "kg", "--kg", kg_file,
        "--cache", str(tmp_path / "c4.sqlite"), "--clock", "fixed",
    ])
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["schema_version"] == 1
    assert report["items"] == 2
    assert report["hits_at_1"] == 0.5
    assert report["mean_llm_calls"] == 1.0
    assert "category,count" in csv_out.read_text(encoding="utf-8")
    summary = json.loads(result.stderr.strip().splitlines()[-1])
    assert summary["items"] == 2


def test_evaluate_report_bytes_are_stable(server, kg_file, dataset_file, tmp_path):
    bodies = []
    for i in range(3):
        out = tmp_path / f"r{i}.json"
        result = _runner().invoke(main, [
            "evaluate", "--dataset", dataset_file, "--output", str(out),
            "--mode", "kg", "--kg", kg_file,
            "--cache", str(tmp_path / f"c5_{i}.sqlite"), "--clock", "fixed",
        ])
        assert result.exit_code == 0, result.output
        bodies.append(out.read_bytes())
    assert bodies[0] == bodies[1] == bodies[2]


def test_evaluate_sampling_is_seeded(server, kg_file, dataset_file, tmp_path):
    reports = []
    for i in range(2):
        out = tmp_path / f"s{i}.json"
        result = _runner().invoke(main, [
            "evaluate", "--dataset", dataset_file, "--output", str(out),
            "--sample", "1", "--seed", "7", "--mode", "kg", "--kg", kg_file,
            "--cache", str(tmp_path / f"c6_{i}.sqlite"), "--clock", "fixed",
        ])
        assert result.exit_code == 0, result.output
        reports.append(json.loads(out.read_text(encoding="utf-8")))
    ids = [[r["item_id"] for r in rep["records"]] for rep in reports]
    assert ids[0] == ids[1]
    assert len(ids[0]) == 1


def test_evaluate_missing_dataset_exits_nonzero(kg_file, tmp_path):
    result = _runner().invoke(main, [
        "evaluate", "--dataset", str(tmp_path / "absent.jsonl"),
        "--mode", "kg", "--kg", kg_file, "--cache", str(tmp_path / "c7.sqlite"),
    ])
    assert result.exit_code != 0


def test_retrieve_kg_serializes_paths(kg_file, tmp_path):
    result = _runner().invoke(main, [
        "retrieve-kg", QUESTION, "--topic-entity", "head 3",
        "--kg", kg_file, "--cache", str(tmp_path / "c8.sqlite"),
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["subgraph"] == "('head 3', 'knows.about.3', 'target 3 item')"
    assert payload["paths"]
    for path in payload["paths"]:
        assert path["hops"]


def test_retrieve_web_trace_fields(server, kg_file, tmp_path):
    result = _runner().invoke(
        main, ["retrieve-web", QUESTION, "--trace",
               "--cache", str(tmp_path / "c9.sqlite"), "--clock", "fixed"],
        env={"SEARCH_API_ENDPOINT": server.search_endpoint},
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["quotes"]
    seconds = payload["trace"]["seconds"]
    stages = [seconds[k] for k in ("search", "fetch", "extract",
                                   "filter_rerank", "dedup")]
    assert all(s >= 0 for s in stages)
    assert sum(stages) <= seconds["total"] + 1e-9


def test_cache_stats_and_clear(server, tmp_path):
    cache = str(tmp_path / "c10.sqlite")
    runner = _runner()
    result = runner.invoke(
        main, ["retrieve-web", QUESTION, "--cache", cache],
        env={"SEARCH_API_ENDPOINT": server.search_endpoint},
    )
    assert result.exit_code == 0
    stats = json.loads(runner.invoke(main, ["cache", "stats", "--cache", cache]).output)
    assert stats["entries"] > 0
    cleared = json.loads(runner.invoke(main, ["cache", "clear", "--cache", cache]).output)
    assert cleared["removed"] == stats["entries"]
    stats2 = json.loads(runner.invoke(main, ["cache", "stats", "--cache", cache]).output)
    assert stats2["entries"] == 0


def test_python_dash_m_entry_point(kg_file, tmp_path):
    import subprocess
    import sys
    proc = subprocess.run(
        [sys.executable, "-m", "kgwebqa", "retrieve-kg", QUESTION,
         "--topic-entity", "head 3", "--kg", kg_file,
         "--cache", str(tmp_path / "c11.sqlite")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["subgraph"].startswith("('head 3'")


def test_network_error_exit_code(kg_file, tmp_path):
    result = _runner().invoke(
        main, ["retrieve-web", "anything",
               "--cache", str(tmp_path / "c12.sqlite")],
        env={"SEARCH_API_ENDPOINT": "http://127.0.0.1:9/search"},
    )
    assert result.exit_code == 4
    assert json.loads(result.stderr)["error"]["type"] == "RetrievalError"


def test_backend_error_exit_code(kg_file, tmp_path):
    result = _runner().invoke(main, [
        "retrieve-kg", QUESTION, "--topic-entity", "head 3",
        "--kg", kg_file, "--cache", str(tmp_path / "c13.sqlite"),
        "--backend-embed", "http://127.0.0.1:9",
    ])
    assert result.exit_code == 5
    assert json.loads(result.stderr)["error"]["type"] == "BackendError"


def test_retrieve_commands_are_byte_stable(server, kg_file, tmp_path):
    kg_runs, web_runs = [], []
    for i in range(2):
        result = _runner().invoke(main, [
            "retrieve-kg", QUESTION, "--topic-entity", "head 3",
            "--kg", kg_file, "--cache", str(tmp_path / f"kgb{i}.sqlite"),
        ])
        assert result.exit_code == 0
        kg_runs.append(result.stdout_bytes)
        result = _runner().invoke(
            main, ["retrieve-web", QUESTION, "--trace", "--clock", "fixed",
                   "--cache", str(tmp_path / f"webb{i}.sqlite")],
            env={"SEARCH_API_ENDPOINT": server.search_endpoint},
        )
        assert result.exit_code == 0
        web_runs.append(result.stdout_bytes)
    assert kg_runs[0] == kg_runs[1]
    assert web_runs[0] == web_runs[1]


def test_answer_with_llama_chat_style(server, kg_file, tmp_path):
    result = _runner().invoke(
        main, _answer_args(kg_file, str(tmp_path / "c14.sqlite"),
                           extra=["--prompt-style", "llama-chat", "--json"]),
        env={"SEARCH_API_ENDPOINT": server.search_endpoint},
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["answer"]["citations"] == [1]
    assert payload["llm_calls"] == 1
