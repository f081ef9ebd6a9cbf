"""Preprocessing pipeline: code stripping, sentence splitting, tokens, stems.

Everything here is a pure function of its input so that sentence identities
and term vectors are reproducible across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import List, Tuple

from nltk.stem import PorterStemmer

__all__ = [
    "Sentence",
    "STOP_WORDS",
    "strip_code_blocks",
    "split_sentences",
    "tokenize",
    "stem",
    "preprocess",
]

SentenceId = Tuple[str, int]

_FENCE = re.compile(r"^\s{0,3}```")
_INDENTED = re.compile(r"^(?: {4}|\t)")
_INLINE_CODE = re.compile(r"`([^`\n]*)`")
_LIST_OR_HEADING = re.compile(r"^\s*(?:#{1,6}\s|[-*+]\s|\d+[.)]\s)")
# terminator run followed by whitespace; the lookbehind rejects "A." style initials
_BOUNDARY = re.compile(r"(?<![^A-Za-z0-9][A-Z][.])(?<!^[A-Z][.])(?<=[.!?])\s+")
_TOKEN = re.compile(r"[a-z0-9]+")


def _load_words(name: str) -> frozenset:
    text = resources.files("devsumm.resources").joinpath(name).read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


STOP_WORDS = _load_words("stopwords.txt")

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


@dataclass(frozen=True)
class Sentence:
    """One candidate unit of a summary.

    ``sid`` is ``(artefact id, index within artefact)``. ``atype`` is the
    artefact type code of the parent, or ``None`` for free text such as a
    gold summary.
    """

    sid: SentenceId
    raw: str
    tokens: Tuple[str, ...]
    stems: Tuple[str, ...]
    atype: str | None = None

    @property
    def zero_content(self) -> bool:
        return not self.stems


def strip_code_blocks(text: str) -> str:
    """Remove fenced and indented code blocks and unwrap inline code spans.

    An unclosed fence swallows the rest of the text.
    """
    out: List[str] = []
    in_fence = False
    prev_blank_or_code = True
    for line in text.split("\n"):
        if _FENCE.match(line):
            in_fence = not in_fence
            continue
        if in_fence:
            continue
        if line.strip() and _INDENTED.match(line) and prev_blank_or_code:
            # indented code cannot interrupt a paragraph
            continue
        prev_blank_or_code = not line.strip()
        out.append(line)
    return _INLINE_CODE.sub(r"\1", "\n".join(out))


def _blocks(text: str) -> List[str]:
    """Group lines into blocks: list items and headings stand alone, blank
    lines end paragraphs, other consecutive lines are joined by a space."""
    blocks: List[str] = []
    current: List[str] = []
    for line in text.split("\n"):
        stripped = line.strip()
        if not stripped:
            if current:
                blocks.append(" ".join(current))
                current = []
        elif _LIST_OR_HEADING.match(line):
            if current:
                blocks.append(" ".join(current))
                current = []
            blocks.append(stripped)
        else:
            current.append(stripped)
    if current:
        blocks.append(" ".join(current))
    return blocks


def split_sentences(text: str) -> List[str]:
    sentences = []
    for block in _blocks(text):
        for frag in _BOUNDARY.split(block):
            frag = frag.strip()
            if frag:
                sentences.append(frag)
    return sentences


def tokenize(sentence: str) -> List[str]:
    return _TOKEN.findall(sentence.lower())


@lru_cache(maxsize=65536)
def stem(token: str) -> str:
    return _stemmer.stem(token)


def preprocess(text: str, artefact_id: str = "", atype: str | None = None) -> List[Sentence]:
    """Run the full pipeline and number the resulting sentences from 0.

    Sentences whose stems are all stop words are kept; they are flagged
    through :attr:`Sentence.zero_content`.
    """
    result = []
    for i, raw in enumerate(split_sentences(strip_code_blocks(text))):
        tokens = tuple(tokenize(raw))
        stems = tuple(stem(t) for t in tokens if t not in STOP_WORDS)
        result.append(Sentence((artefact_id, i), raw, tokens, stems, atype))
    return result
