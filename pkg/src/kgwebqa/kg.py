"""Read-only knowledge graph loaded from a TSV triple file.

File format: one ``head<TAB>relation<TAB>tail`` triple per line, UTF-8,
LF (CRLF tolerated). Duplicate triples collapse to one edge. The graph is
immutable after construction and safe for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataError

OUTGOING = "outgoing"
INCOMING = "incoming"


@dataclass(frozen=True)
class Triple:
    head: str
    relation: str
    tail: str

    def __post_init__(self):
        for field in ("head", "relation", "tail"):
            value = getattr(self, field)
            if not value:
                raise DataError(f"triple {field} must be a non-empty string")
            if "\t" in value:
                raise DataError(f"triple {field} must not contain a TAB: {value!r}")


class KnowledgeGraph:
    """Triple set plus adjacency indexes for both edge directions."""

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set(triples)
        self._out: dict[str, set[tuple[str, str]]] = {}
        self._in: dict[str, set[tuple[str, str]]] = {}
        for t in self._triples:
            self._out.setdefault(t.head, set()).add((t.relation, t.tail))
            self._in.setdefault(t.tail, set()).add((t.relation, t.head))

    @classmethod
    def load(cls, path: str | Path) -> "KnowledgeGraph":
        """Load a TSV triple file; malformed lines raise with their line number."""
        path = Path(path)
        triples = []
        with path.open(encoding="utf-8", newline="") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\r\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise DataError(
                        f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}"
                    )
                try:
                    triples.append(Triple(*fields))
                except DataError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from None
        return cls(triples)

    def save(self, path: str | Path) -> None:
        """Write the graph back as sorted TSV; loading it again yields an equal graph."""
        lines = sorted(f"{t.head}\t{t.relation}\t{t.tail}\n" for t in self._triples)
        Path(path).write_text("".join(lines), encoding="utf-8")

    @property
    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    @property
    def entities(self) -> set[str]:
        return set(self._out) | set(self._in)

    def has_entity(self, entity: str) -> bool:
        return entity in self._out or entity in self._in

    def relations_of(self, entity: str) -> set[tuple[str, str]]:
        """All (relation, direction) pairs on edges incident to ``entity``."""
        found = {(r, OUTGOING) for r, _ in self._out.get(entity, ())}
        found |= {(r, INCOMING) for r, _ in self._in.get(entity, ())}
        return found

    def neighbors_of(self, entity: str, relation: str, direction: str) -> set[str]:
        """Entities reached from ``entity`` over ``relation`` in ``direction``."""
        if direction == OUTGOING:
            return {t for r, t in self._out.get(entity, ()) if r == relation}
        if direction == INCOMING:
            return {h for r, h in self._in.get(entity, ()) if r == relation}
        raise ValueError(f"unknown direction: {direction!r}")

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"KnowledgeGraph({len(self._triples)} triples, {len(self.entities)} entities)"
