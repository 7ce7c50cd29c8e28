"""Command-line entry points.

Commands: ``answer``, ``evaluate``, ``retrieve-kg``, ``retrieve-web`` and
``cache stats|clear``. All machine-readable output is JSON carrying a
schema_version field; hard errors print a JSON error object on stderr and
exit with a code identifying the failure class (2 config, 3 data,
4 network, 5 model backend).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .beam import BeamConfig, beam_search, serialize_subgraph
from .config import RunConfig, build_runtime, load_config
from .errors import PipelineError
from .evaluation import SCHEMA_VERSION, load_dataset, run_eval, sample_items
from .web.cache import PersistentCache
from .web.pipeline import retrieve_web


def _emit_json(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


def _fail(exc: Exception) -> None:
    code = getattr(exc, "exit_code", 1)
    error = {
        "schema_version": SCHEMA_VERSION,
        "error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code},
    }
    click.echo(json.dumps(error, sort_keys=True), err=True)
    sys.exit(code)


def _config_options(fn):
    options = [
        click.option("--config", "config_file", type=click.Path(), default=None,
                     help="JSON config file (flags take precedence)."),
        click.option("--mode", type=click.Choice(["kg", "web", "kg+web"]), default=None),
        click.option("--kg", "kg_path", type=click.Path(), default=None,
                     help="TSV triple file backing the graph search."),
        click.option("--cache", "cache_path", type=click.Path(), default=None,
                     help="Persistent search/page cache (sqlite)."),
        click.option("--backend-embed", default=None, help="'mock' or backend URL."),
        click.option("--backend-score", default=None, help="'mock' or backend URL."),
        click.option("--backend-spans", default=None, help="'mock' or backend URL."),
        click.option("--backend-generate", default=None, help="'mock' or backend URL."),
        click.option("--beam-width", type=int, default=None),
        click.option("--beam-depth", type=int, default=None),
        click.option("--direction-policy", type=click.Choice(["both", "outgoing-only"]),
                     default=None),
        click.option("--refs-total", type=int, default=None),
        click.option("--keep-filter", type=int, default=None),
        click.option("--keep-final", type=int, default=None),
        click.option("--search-k", type=int, default=None),
        click.option("--prompt-style", type=click.Choice(["glm", "llama-chat"]),
                     default=None),
        click.option("--splitter-mode", type=click.Choice(["adaptive", "baseline"]),
                     default=None),
        click.option("--parallelism", type=int, default=None),
        click.option("--max-tokens", "max_answer_tokens", type=int, default=None),
        click.option("--clock", type=click.Choice(["wall", "fixed"]), default=None,
                     help="'fixed' uses a deterministic tick clock."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _build_config(config_file: str | None, **flags) -> RunConfig:
    return load_config(flags, config_file=config_file)


@click.group()
@click.version_option(version=__version__, prog_name="kgwebqa")
def main() -> None:
    """Citation-grounded QA over web search and a local knowledge graph."""


@main.command()
@click.argument("question")
@click.option("--topic-entity", "topic_entities", multiple=True,
              help="Topic entity anchoring the graph search (repeatable).")
@click.option("--json", "as_json", is_flag=True, help="Emit the full result as JSON.")
@click.option("--trace", is_flag=True, help="Include per-stage timings.")
@_config_options
def answer(question, topic_entities, as_json, trace, config_file, **flags):
    """Answer QUESTION with numbered, citable sources."""
    try:
        cfg = _build_config(config_file, **flags)
        runtime = build_runtime(cfg)
        result = runtime.engine.answer(question, list(topic_entities))
    except (PipelineError, ValueError, OSError) as exc:
        _fail(exc)
    for notice in result.notices:
        click.echo(f"notice: {notice}", err=True)
    if as_json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "question": question,
            "answer": result.answer.as_dict(),
            "references": result.references.as_dict(),
            "llm_calls": result.llm_calls,
            "notices": result.notices,
        }
        if trace:
            payload["trace"] = result.trace.as_dict()
        _emit_json(payload)
        return
    click.echo(result.answer.text)
    click.echo("")
    click.echo("Sources:")
    for ref in result.references.references:
        label = "KG" if ref.source == "kg" else (ref.source_url or "web")
        click.echo(f"  [{ref.index}] {label}")
    if trace:
        click.echo("")
        _emit_json({"schema_version": SCHEMA_VERSION, "trace": result.trace.as_dict()})


@main.command()
@click.option("--dataset", required=True, type=click.Path(), help="JSONL dataset.")
@click.option("--output", type=click.Path(), default=None,
              help="Write the JSON report here (default: stdout).")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Also write the citation-category distribution as CSV.")
@click.option("--sample", type=int, default=None,
              help="Evaluate a seeded random subset of this size.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Sampling seed.")
@click.option("--eval-parallelism", type=int, default=None,
              help="Concurrent items (default 1, fully deterministic).")
@_config_options
def evaluate(dataset, output, csv_path, sample, seed, eval_parallelism,
             config_file, **flags):
    """Run the evaluation harness over a dataset and write a JSON report."""
    try:
        cfg = _build_config(config_file, **flags)
        items = sample_items(load_dataset(dataset), sample, seed=seed)
        runtime = build_runtime(cfg)
        report = run_eval(items, runtime.engine,
                          parallelism=eval_parallelism or cfg.eval_parallelism,
                          clock=runtime.clock)
    except (PipelineError, ValueError, OSError) as exc:
        _fail(exc)
    report["dataset"] = Path(dataset).name
    body = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    if output:
        Path(output).write_text(body + "\n", encoding="utf-8")
    else:
        click.echo(body)
    if csv_path:
        lines = ["category,count"]
        lines += [f"{c},{n}" for c, n in sorted(report["citation_categories"].items())]
        Path(csv_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    summary = {
        "items": report["items"],
        "failures": report["failures"],
        "hits_at_1": report["hits_at_1"],
        "mean_llm_calls": report["mean_llm_calls"],
    }
    click.echo(json.dumps(summary, sort_keys=True), err=True)


@main.command("retrieve-kg")
@click.argument("question")
@click.option("--topic-entity", "topic_entities", multiple=True, required=True)
@_config_options
def retrieve_kg(question, topic_entities, config_file, **flags):
    """Run only the graph retrieval and print the scored paths as JSON."""
    try:
        cfg = _build_config(config_file, **{**flags, "mode": "kg"})
        runtime = build_runtime(cfg)
        beam_cfg = BeamConfig(width=cfg.beam_width, depth=cfg.beam_depth,
                              direction_policy=cfg.direction_policy)
        paths = beam_search(runtime.kg, question, list(topic_entities), beam_cfg,
                            gateway=runtime.gateway)
    except (PipelineError, ValueError, OSError) as exc:
        _fail(exc)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "question": question,
        "topic_entities": list(topic_entities),
        "subgraph": serialize_subgraph(paths),
        "paths": [
            {
                "score": p.score,
                "hops": [
                    {"head": h.head, "relation": h.relation, "tail": h.tail,
                     "direction": h.direction}
                    for h in p.hops
                ],
                "hop_scores": [list(pair) for pair in p.hop_scores],
            }
            for p in paths
        ],
    }
    _emit_json(payload)


@main.command("retrieve-web")
@click.argument("query")
@click.option("--trace", is_flag=True, help="Include per-stage timing JSON.")
@_config_options
def retrieve_web_cmd(query, trace, config_file, **flags):
    """Run only the web retrieval and print the final quotes as JSON."""
    try:
        cfg = _build_config(config_file, **{**flags, "mode": "web"})
        runtime = build_runtime(cfg)
        engine = runtime.engine
        quotes, retrieval_trace = retrieve_web(
            query, engine.config.web, gateway=runtime.gateway,
            search_client=engine.search_client, fetcher=engine.fetcher,
            clock=runtime.clock,
        )
    except (PipelineError, ValueError, OSError) as exc:
        _fail(exc)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "query": query,
        "quotes": [q.as_dict() for q in quotes],
    }
    if trace:
        payload["trace"] = retrieval_trace.as_dict()
    _emit_json(payload)


@main.group()
def cache() -> None:
    """Inspect or clear the persistent search/page cache."""


def _open_cache(cache_path, config_file):
    cfg = load_config({"cache_path": cache_path, "mode": "web"},
                      config_file=config_file)
    return PersistentCache(Path(cfg.cache_path).expanduser())


@cache.command("stats")
@click.option("--cache", "cache_path", type=click.Path(), default=None)
@click.option("--config", "config_file", type=click.Path(), default=None)
def cache_stats(cache_path, config_file):
    try:
        stats = _open_cache(cache_path, config_file).stats()
    except (PipelineError, ValueError, OSError) as exc:
        _fail(exc)
    _emit_json({"schema_version": SCHEMA_VERSION, **stats})


@cache.command("clear")
@click.option("--cache", "cache_path", type=click.Path(), default=None)
@click.option("--config", "config_file", type=click.Path(), default=None)
def cache_clear(cache_path, config_file):
    try:
        store = _open_cache(cache_path, config_file)
        removed = store.clear()
    except (PipelineError, ValueError, OSError) as exc:
        _fail(exc)
    _emit_json({"schema_version": SCHEMA_VERSION, "removed": removed,
                "path": str(store.path)})


if __name__ == "__main__":
    main()
