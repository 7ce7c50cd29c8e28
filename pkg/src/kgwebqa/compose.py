"""Answer composition: numbered references, one generation call, citations.

The reference list is the contract with the generator: serialized KG
triples, when present, always sit at index 1 and the web quotes follow in
rank order. Prompts are instantiated byte-exactly from versioned template
assets; citations are parsed back out of the answer as ``[n]`` markers.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources

from . import textseg
from .errors import ConfigError, DataError
from .web.types import Quote

logger = logging.getLogger(__name__)

PROMPT_STYLES = ("glm", "llama-chat")
DEFAULT_TOTAL_REFERENCES = 5
KG_REFERENCE_MAX_TOKENS = 128

SOURCE_KG = "kg"
SOURCE_WEB = "web"

_CITATION = re.compile(r"\[(\d+)\]")
_PLACEHOLDER = re.compile(r"\{(references|question)\}")


@dataclass(frozen=True)
class Reference:
    index: int
    text: str
    source: str
    source_url: str | None = None


@dataclass(frozen=True)
class ReferenceSet:
    references: tuple[Reference, ...]

    def __post_init__(self):
        kg_count = 0
        for position, ref in enumerate(self.references, start=1):
            if ref.index != position:
                raise DataError("reference indices must be contiguous from 1")
            if ref.source == SOURCE_KG:
                kg_count += 1
                if ref.index != 1:
                    raise DataError("the KG reference must be index 1")
        if kg_count > 1:
            raise DataError("at most one KG reference is allowed")

    def __len__(self) -> int:
        return len(self.references)

    def __bool__(self) -> bool:
        return bool(self.references)

    def __getitem__(self, index: int) -> Reference:
        """1-based lookup matching citation indices."""
        return self.references[index - 1]

    def indices(self) -> set[int]:
        return {ref.index for ref in self.references}

    def as_dict(self) -> list[dict]:
        return [vars(ref).copy() for ref in self.references]


@dataclass
class ComposedAnswer:
    text: str
    citations: set[int] = field(default_factory=set)
    cited_sentences: list[tuple[str, set[int]]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "text": self.text,
            "citations": sorted(self.citations),
            "cited_sentences": [
                {"sentence": s, "citations": sorted(c)} for s, c in self.cited_sentences
            ],
        }


def build_references(subgraph_text: str | None, quotes: list[Quote],
                     total: int = DEFAULT_TOTAL_REFERENCES) -> ReferenceSet:
    """Number the evidence fed to the composer.

    The KG serialization, when non-empty, takes slot 1 and displaces the
    lowest-ranked quote; it is token-capped like any web quote so the prompt
    stays bounded. Fewer inputs than ``total`` yield a shorter set.
    """
    if total < 1:
        raise ValueError("total must be positive")
    refs: list[Reference] = []
    if subgraph_text:
        refs.append(Reference(
            index=1,
            text=textseg.truncate_to_tokens(subgraph_text, KG_REFERENCE_MAX_TOKENS),
            source=SOURCE_KG,
        ))
    for quote in quotes[: total - len(refs)]:
        refs.append(Reference(index=len(refs) + 1, text=quote.text,
                              source=SOURCE_WEB, source_url=quote.source_url))
    return ReferenceSet(tuple(refs))


def _load_template(name: str) -> str:
    path = resources.files("kgwebqa.templates").joinpath(f"{name}.txt")
    return path.read_text(encoding="utf-8")


def render_prompt(style: str, question: str, refs: ReferenceSet) -> str:
    """Instantiate the selected prompt template byte-exactly."""
    if not refs:
        raise DataError("cannot render a prompt without references")
    if style == "glm":
        rendered = " \\".join(f"Reference [{r.index}]: {r.text}" for r in refs.references)
    elif style == "llama-chat":
        rendered = "\n".join(f"{r.index}: {r.text}" for r in refs.references)
    else:
        raise ConfigError(f"unknown prompt style: {style!r} (expected one of {PROMPT_STYLES})")
    template = _load_template(style)
    mapping = {"references": rendered, "question": question}
    return _PLACEHOLDER.sub(lambda m: mapping[m.group(1)], template)


def parse_citations(answer_text: str) -> tuple[set[int], list[tuple[str, set[int]]]]:
    """All cited indices plus each citing sentence with its own markers."""
    cited: set[int] = set()
    cited_sentences: list[tuple[str, set[int]]] = []
    for start, end in textseg.sentence_spans(answer_text):
        sentence = answer_text[start:end]
        markers = {int(m) for m in _CITATION.findall(sentence)}
        if markers:
            cited |= markers
            cited_sentences.append((sentence, markers))
    return cited, cited_sentences


def compose(gateway, question: str, refs: ReferenceSet, style: str = "glm",
            max_tokens: int = 256) -> ComposedAnswer:
    """One generation call over the rendered prompt, with citations parsed out.

    Citation markers pointing outside the reference range are dropped with
    a warning; sentences left without any valid marker drop out of the
    cited-sentence list.
    """
    if not refs:
        raise DataError("compose requires at least one reference")
    prompt = render_prompt(style, question, refs)
    text = gateway.generate(prompt, max_tokens=max_tokens)
    citations, cited_sentences = parse_citations(text)
    valid = refs.indices()
    out_of_range = citations - valid
    if out_of_range:
        logger.warning("answer cited out-of-range references %s; dropping",
                       sorted(out_of_range))
        citations &= valid
        cited_sentences = [
            (sentence, markers & valid)
            for sentence, markers in cited_sentences
            if markers & valid
        ]
    return ComposedAnswer(text=text, citations=citations,
                          cited_sentences=cited_sentences)


def load_judge_template() -> str:
    """The citation-support judging prompt (versioned text asset)."""
    return _load_template("judge")
