"""HTML to text blocks using only the standard library parser.

A "block" is a run of text delimited by line breaks or block-level tags
(``<p>`` above all); whitespace inside a block is collapsed to single
spaces. The page text is the newline-join of all blocks, and every
downstream character offset (splitter chunks, evidence spans) refers to
that canonical string.
"""

from __future__ import annotations

from dataclasses import dataclass
from html.parser import HTMLParser

_BLOCK_TAGS = {
    "p", "div", "section", "article", "li", "ul", "ol", "dl", "dt", "dd",
    "h1", "h2", "h3", "h4", "h5", "h6", "table", "tr", "td", "th",
    "blockquote", "pre", "header", "footer", "main", "aside", "nav",
    "figure", "figcaption", "form", "hr",
}
_SKIP_TAGS = {"script", "style", "noscript", "template", "head", "svg"}


@dataclass(frozen=True)
class Block:
    offset: int  # char offset into the page text
    text: str


class _BlockCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.blocks: list[str] = []
        self._buffer: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag == "br" or tag in _BLOCK_TAGS:
            self._flush()

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._skip_depth:
            return
        pieces = data.split("\n")
        for i, piece in enumerate(pieces):
            if i > 0:
                self._flush()
            if piece:
                self._buffer.append(piece)

    def _flush(self):
        text = " ".join("".join(self._buffer).split())
        self._buffer.clear()
        if text:
            self.blocks.append(text)

    def close(self):
        super().close()
        self._flush()


def extract_blocks(html: str) -> list[Block]:
    """Text blocks of a page with their offsets into the page text."""
    parser = _BlockCollector()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        return []
    blocks: list[Block] = []
    offset = 0
    for text in parser.blocks:
        blocks.append(Block(offset=offset, text=text))
        offset += len(text) + 1  # the joining newline
    return blocks


def page_text(blocks: list[Block]) -> str:
    return "\n".join(b.text for b in blocks)
