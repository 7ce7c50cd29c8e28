"""Dataset-driven evaluation: answer accuracy, citation behavior, efficiency.

The headline metric is Hits@1: an answer scores 1 iff any gold answer
string occurs inside it after normalization (lowercase, whitespace runs
collapsed, punctuation stripped from the gold's edges). The harness also
classifies which knowledge source each answer cites, measures per-question
runtime and LLM-call counts, judges citation support with a generator
prompt, and aggregates human quote-annotation scores.
"""

from __future__ import annotations

import csv
import json
import logging
import random
import string
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .compose import SOURCE_KG, SOURCE_WEB, ComposedAnswer, ReferenceSet, load_judge_template
from .engine import QAEngine
from .errors import DataError, GenerationError, PipelineError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

CATEGORY_NONE = "none"
CATEGORY_WEB = "web-only"
CATEGORY_KG = "kg-only"
CATEGORY_BOTH = "web+kg"
CATEGORIES = (CATEGORY_NONE, CATEGORY_WEB, CATEGORY_KG, CATEGORY_BOTH)

SUPPORTED = "supported"
UNSUPPORTED = "unsupported"

DEFAULT_SAMPLE_SEED = 0

_GOLD_STRIP = string.punctuation + string.whitespace


# ---------------------------------------------------------------------------
# Dataset
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetItem:
    id: str
    question: str
    topic_entities: tuple[str, ...]
    gold_answers: tuple[str, ...]


def load_dataset(path: str | Path) -> list[DatasetItem]:
    """Parse a JSONL dataset: {"id", "question", "topic_entities", "answers"}."""
    path = Path(path)
    items: list[DatasetItem] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            try:
                item = DatasetItem(
                    id=str(raw["id"]),
                    question=raw["question"],
                    topic_entities=tuple(raw.get("topic_entities") or ()),
                    gold_answers=tuple(raw["answers"]),
                )
            except KeyError as exc:
                raise DataError(f"{path}:{lineno}: missing field {exc}") from None
            if not item.question or not item.question.strip():
                raise DataError(f"{path}:{lineno}: empty question")
            if not item.gold_answers:
                raise DataError(f"{path}:{lineno}: answers must be non-empty")
            if item.id in seen_ids:
                raise DataError(f"{path}:{lineno}: duplicate item id {item.id!r}")
            seen_ids.add(item.id)
            items.append(item)
    if not items:
        raise DataError(f"{path}: dataset is empty")
    return items


def sample_items(items: list[DatasetItem], n: int | None,
                 seed: int = DEFAULT_SAMPLE_SEED) -> list[DatasetItem]:
    """Seeded random subset of ``n`` items, kept in dataset order."""
    if n is None or n >= len(items):
        return list(items)
    if n < 1:
        raise ValueError("sample size must be positive")
    picked = sorted(random.Random(seed).sample(range(len(items)), n))
    return [items[i] for i in picked]


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


def _normalize(text: str) -> str:
    return " ".join(text.split()).lower()


def hits_at_1(answer_text: str, gold_answers: list[str] | tuple[str, ...]) -> int:
    """1 iff any normalized gold answer is a substring of the normalized answer."""
    if not gold_answers:
        raise ValueError("gold_answers must be non-empty")
    haystack = _normalize(answer_text)
    for gold in gold_answers:
        needle = _normalize(gold).strip(_GOLD_STRIP)
        if needle and needle in haystack:
            return 1
    return 0


def classify_citations(answer: ComposedAnswer, refs: ReferenceSet) -> str:
    """Which knowledge sources the answer actually cites."""
    invalid = answer.citations - refs.indices()
    if invalid:
        raise ValueError(f"citations outside the reference range: {sorted(invalid)}")
    if not answer.citations:
        return CATEGORY_NONE
    sources = {refs[i].source for i in answer.citations}
    if sources == {SOURCE_KG}:
        return CATEGORY_KG
    if sources == {SOURCE_WEB}:
        return CATEGORY_WEB
    return CATEGORY_BOTH


def judge_citation(gateway, answer_sentence: str, quote: str) -> str:
    """One generator call deciding whether the quote supports the sentence."""
    if not answer_sentence or not quote:
        raise ValueError("both the answer sentence and the quote must be non-empty")
    prompt = render_judge_prompt(answer_sentence, quote)
    verdict = gateway.generate(prompt, max_tokens=16)
    return SUPPORTED if verdict.strip().lower().startswith("yes") else UNSUPPORTED


def render_judge_prompt(answer_sentence: str, quote: str) -> str:
    template = load_judge_template()
    return (template
            .replace("{sub-answer}", answer_sentence)
            .replace("{quote}", quote))


def citation_accuracy(gateway, answered: list[tuple[ComposedAnswer, ReferenceSet]],
                      ) -> tuple[float | None, int, int]:
    """Fraction of (cited sentence, cited quote) pairs judged supported.

    Returns (accuracy, judged_pairs, errored_pairs); accuracy is ``None``
    when no pair could be judged, which is distinct from an accuracy of 0.
    Judge calls are made on the gateway passed in here, so callers can keep
    them accounted apart from composition calls.
    """
    supported = 0
    judged = 0
    errors = 0
    for answer, refs in answered:
        valid = refs.indices()
        for sentence, markers in answer.cited_sentences:
            for index in sorted(markers):
                if index not in valid:
                    continue
                try:
                    verdict = judge_citation(gateway, sentence, refs[index].text)
                except GenerationError as exc:
                    errors += 1
                    logger.warning("citation judgment failed, pair excluded: %s", exc)
                    continue
                judged += 1
                if verdict == SUPPORTED:
                    supported += 1
    return (supported / judged if judged else None), judged, errors


def llm_guided_search_call_bound(width: int, depth: int) -> int:
    """Worst-case generator calls for an LLM-pruned beam search comparator.

    Such a search prompts the model once per relation-pruning and once per
    entity-pruning step for each of the ``width`` paths at every level, plus
    one reasoning call per level and a final answering call:
    ``2*width*depth + depth + 1``. Reported next to this pipeline's measured
    single call per question.
    """
    if width < 1 or depth < 1:
        raise ValueError("width and depth must be positive")
    return 2 * width * depth + depth + 1


# ---------------------------------------------------------------------------
# Quote annotations (human evaluation ingest)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuoteAnnotation:
    query_id: str
    quote_id: str
    pertinence: int
    highlight: tuple[int, int] | None
    self_containment: int
    quote_length_chars: int

    def __post_init__(self):
        if self.pertinence not in (0, 1, 2, 3):
            raise DataError(f"pertinence must be in 0..3, got {self.pertinence}")
        if self.self_containment not in (0, 1):
            raise DataError(f"self_containment must be 0 or 1, got {self.self_containment}")
        if self.quote_length_chars < 1:
            raise DataError("quote_length_chars must be positive")
        if self.highlight is not None:
            start, end = self.highlight
            if not (0 <= start <= end <= self.quote_length_chars):
                raise DataError(f"highlight {self.highlight} outside "
                                f"[0, {self.quote_length_chars}]")

    @property
    def answer_span(self) -> float:
        if self.highlight is None:
            return 0.0
        start, end = self.highlight
        return (end - start) / self.quote_length_chars


@dataclass(frozen=True)
class AnnotationMeans:
    pertinence: float
    answer_span: float
    self_containment: float


def load_annotations(path: str | Path) -> tuple[list[QuoteAnnotation], int]:
    """Read annotation rows from CSV; invalid rows are skipped with a warning.

    Columns: query_id, quote_id, pertinence, highlight_start, highlight_end,
    self_containment, quote_length_chars. Empty highlight bounds mean no
    highlight. Returns (rows, skipped_count).
    """
    rows: list[QuoteAnnotation] = []
    skipped = 0
    with Path(path).open(encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(csv.DictReader(fh), start=2):
            try:
                start, end = raw.get("highlight_start", ""), raw.get("highlight_end", "")
                highlight = (int(start), int(end)) if start != "" and end != "" else None
                rows.append(QuoteAnnotation(
                    query_id=raw["query_id"],
                    quote_id=raw["quote_id"],
                    pertinence=int(raw["pertinence"]),
                    highlight=highlight,
                    self_containment=int(raw["self_containment"]),
                    quote_length_chars=int(raw["quote_length_chars"]),
                ))
            except (DataError, KeyError, TypeError, ValueError) as exc:
                skipped += 1
                logger.warning("%s:%d: annotation row skipped: %s", path, lineno, exc)
    return rows, skipped


def aggregate_annotations(annotations: list[QuoteAnnotation]) -> AnnotationMeans:
    """Mean pertinence, answer-span fraction, and self-containment."""
    if not annotations:
        raise DataError("cannot aggregate an empty annotation set")
    n = len(annotations)
    return AnnotationMeans(
        pertinence=sum(a.pertinence for a in annotations) / n,
        answer_span=sum(a.answer_span for a in annotations) / n,
        self_containment=sum(a.self_containment for a in annotations) / n,
    )


# ---------------------------------------------------------------------------
# Harness
# ---------------------------------------------------------------------------


@dataclass
class EvalRecord:
    item_id: str
    hit: int | None
    citation_category: str | None
    llm_calls: int
    runtime_seconds: float
    answer: dict | None
    trace: dict | None
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "hit": self.hit,
            "citation_category": self.citation_category,
            "llm_calls": self.llm_calls,
            "runtime_seconds": self.runtime_seconds,
            "answer": self.answer,
            "trace": self.trace,
            "error": self.error,
        }


def run_eval(items: list[DatasetItem], engine: QAEngine,
             parallelism: int = 1, clock=time.perf_counter) -> dict:
    """Answer every item and aggregate the report.

    Per-item failures are recorded and skipped, never fatal. Records are
    reported in dataset order regardless of ``parallelism``; with
    parallelism 1 and deterministic backends the report is byte-stable.
    """
    if not items:
        raise DataError("dataset is empty")
    ledger_before = engine.gateway.ledger.llm_calls

    def evaluate_one(item: DatasetItem) -> EvalRecord:
        started = clock()
        try:
            result = engine.answer(item.question, list(item.topic_entities))
        except (PipelineError, ValueError) as exc:
            logger.warning("item %s failed: %s", item.id, exc)
            return EvalRecord(item_id=item.id, hit=None, citation_category=None,
                              llm_calls=0, runtime_seconds=max(clock() - started, 0.0),
                              answer=None, trace=None, error=str(exc))
        return EvalRecord(
            item_id=item.id,
            hit=hits_at_1(result.answer.text, item.gold_answers),
            citation_category=classify_citations(result.answer, result.references),
            llm_calls=result.llm_calls,
            runtime_seconds=max(clock() - started, 0.0),
            answer=result.answer.as_dict(),
            trace=result.trace.as_dict(),
        )

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(evaluate_one, items))
    else:
        records = [evaluate_one(item) for item in items]

    scored = [r for r in records if r.error is None]
    failures = len(records) - len(scored)
    categories = {c: 0 for c in CATEGORIES}
    for record in scored:
        categories[record.citation_category] += 1
    llm_calls_total = engine.gateway.ledger.llm_calls - ledger_before
    beam = engine.config.beam

    return {
        "schema_version": SCHEMA_VERSION,
        "mode": engine.config.mode,
        "items": len(records),
        "failures": failures,
        "hits_at_1": (sum(r.hit for r in scored) / len(scored)) if scored else None,
        "citation_categories": categories,
        "mean_runtime_seconds": (sum(r.runtime_seconds for r in scored) / len(scored))
        if scored else None,
        "mean_llm_calls": (llm_calls_total / len(scored)) if scored else None,
        "llm_guided_search_call_bound": llm_guided_search_call_bound(beam.width, beam.depth),
        "records": [r.as_dict() for r in records],
    }
