"""Full pipeline run with every model capability served by the shim."""

import json
import subprocess
import sys


def test_cli_answer_against_shim(shim, tmp_path):
    kg = tmp_path / "graph.tsv"
    kg.write_text("Esma Sultan Mansion\tdesigned.by\tBalyan family\n",
                  encoding="utf-8")
    url = shim.base_url
    proc = subprocess.run(
        [sys.executable, "-m", "kgwebqa", "answer",
         "who designed the esma sultan mansion",
         "--topic-entity", "Esma Sultan Mansion",
         "--mode", "kg", "--kg", str(kg),
         "--cache", str(tmp_path / "cache.sqlite"),
         "--backend-embed", url, "--backend-score", url,
         "--backend-spans", url, "--backend-generate", url,
         "--json"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["llm_calls"] == 1
    assert payload["references"][0]["source"] == "kg"
    assert "Balyan" in payload["answer"]["text"]
    assert 1 in payload["answer"]["citations"]
