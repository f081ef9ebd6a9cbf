"""Sentence representations: stem counts and the 26 lexical/readability features.

Feature order (index 0 holds F1)::

    F1  word count                 F14 long words (>= 7 chars)
    F2  chars incl. spaces         F15 longest sentence (chars)
    F3  chars excl. spaces         F16 longest word (chars)
    F4  total syllables            F17 max syllables in a word
    F5  sentence count             F18 reading time, minutes
    F6  unique words               F19 speaking time, minutes
    F7  avg word length (F3/F1)    F20 Dale-Chall
    F8  avg sentence length        F21 automated readability index
    F9  monosyllabic words         F22 Coleman-Liau
    F10 polysyllabic words (>= 3)  F23 Flesch reading ease
    F11 syllables per word         F24 Flesch-Kincaid grade
    F12 difficult words            F25 Gunning fog
    F13 short words (<= 3 chars)   F26 character entropy, bits
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Sequence

import numpy as np

from .textproc import _load_words, split_sentences

__all__ = [
    "N_FEATURES",
    "FEATURE_NAMES",
    "EASY_WORDS",
    "TextStats",
    "term_vector",
    "count_syllables",
    "extract_features",
    "features_from_stats",
]

N_FEATURES = 26
FEATURE_NAMES = tuple(f"F{i}" for i in range(1, N_FEATURES + 1))

READING_WPM = 238.0
SPEAKING_WPM = 183.0

EASY_WORDS = _load_words("easy_words.txt")

_WORD = re.compile(r"[A-Za-z0-9]+(?:'[A-Za-z0-9]+)*")
_VOWEL_RUN = re.compile(r"[aeiouy]+")
_VOWELS = frozenset("aeiouy")


def term_vector(stems: Sequence[str]) -> Dict[str, int]:
    return dict(Counter(stems))


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate.

    Counts runs of ``aeiouy``, drops a terminal silent ``e`` after a consonant
    unless the word ends in consonant + ``le``, and never returns less than 1.
    """
    w = "".join(c for c in word.lower() if "a" <= c <= "z")
    if not w:
        return 1
    n = len(_VOWEL_RUN.findall(w))
    if len(w) >= 2 and w[-1] == "e" and w[-2] not in _VOWELS:
        if not (w[-2] == "l" and len(w) >= 3 and w[-3] not in _VOWELS):
            n -= 1
    return max(1, n)


@lru_cache(maxsize=65536)
def _word_info(word: str):
    return count_syllables(word), word.lower() not in EASY_WORDS


def _entropy(char_counts: Mapping[str, int]) -> float:
    total = sum(char_counts.values())
    if total == 0:
        return 0.0
    h = 0.0
    for ch in sorted(char_counts):
        p = char_counts[ch] / total
        h -= p * math.log2(p)
    return h + 0.0


@dataclass(frozen=True)
class TextStats:
    """Additive summary of a text unit from which all 26 features follow."""

    words: int
    chars: int
    nonspace: int
    letters: int
    syllables: int
    mono: int
    poly: int
    difficult: int
    short: int
    long: int
    longest_word: int
    max_syllables: int
    sentences: int
    longest_sentence: int
    vocab: FrozenSet[str]
    char_counts: Mapping[str, int]

    @classmethod
    def of(cls, text: str) -> "TextStats":
        words = _WORD.findall(text)
        syl = mono = poly = diff = short = long_ = longest = max_syl = 0
        for w in words:
            s, d = _word_info(w)
            syl += s
            mono += s == 1
            poly += s >= 3
            diff += d
            short += len(w) <= 3
            long_ += len(w) >= 7
            longest = max(longest, len(w))
            max_syl = max(max_syl, s)
        sents = split_sentences(text)
        counts = Counter(text)
        spaces = sum(c for ch, c in counts.items() if ch.isspace())
        return cls(
            words=len(words),
            chars=len(text),
            nonspace=len(text) - spaces,
            letters=sum(c for ch, c in counts.items() if ch.isalpha()),
            syllables=syl,
            mono=mono,
            poly=poly,
            difficult=diff,
            short=short,
            long=long_,
            longest_word=longest,
            max_syllables=max_syl,
            sentences=len(sents),
            longest_sentence=max((len(s) for s in sents), default=0),
            vocab=frozenset(w.lower() for w in words),
            char_counts=dict(counts),
        )

    @classmethod
    def join(cls, parts: Sequence["TextStats"], texts: Sequence[str]) -> "TextStats":
        """Stats of ``" ".join(texts)`` given the stats of each text.

        Sentence boundaries are re-derived from the joined string because
        joining can merge fragments that lack a terminator.
        """
        if len(parts) == 1:
            return parts[0]
        joined = " ".join(texts)
        sents = split_sentences(joined)
        counts: Dict[str, int] = {}
        for p in parts:
            for ch, c in p.char_counts.items():
                counts[ch] = counts.get(ch, 0) + c
        gaps = len(parts) - 1
        if gaps:
            counts[" "] = counts.get(" ", 0) + gaps
        vocab: FrozenSet[str] = frozenset().union(*(p.vocab for p in parts))
        return cls(
            words=sum(p.words for p in parts),
            chars=sum(p.chars for p in parts) + gaps,
            nonspace=sum(p.nonspace for p in parts),
            letters=sum(p.letters for p in parts),
            syllables=sum(p.syllables for p in parts),
            mono=sum(p.mono for p in parts),
            poly=sum(p.poly for p in parts),
            difficult=sum(p.difficult for p in parts),
            short=sum(p.short for p in parts),
            long=sum(p.long for p in parts),
            longest_word=max((p.longest_word for p in parts), default=0),
            max_syllables=max((p.max_syllables for p in parts), default=0),
            sentences=len(sents),
            longest_sentence=max((len(s) for s in sents), default=0),
            vocab=vocab,
            char_counts=counts,
        )


def features_from_stats(st: TextStats) -> List[float]:
    if st.chars == 0:
        return [0.0] * N_FEATURES
    n = st.words
    entropy = _entropy(st.char_counts)
    if n == 0:
        # no words: counts stay, every per-word ratio and index is 0
        out = [0.0] * N_FEATURES
        out[1] = float(st.chars)
        out[2] = float(st.nonspace)
        out[4] = float(st.sentences)
        out[14] = float(st.longest_sentence)
        out[25] = entropy
        return out
    avg_word = st.nonspace / n
    avg_sent = n / st.sentences if st.sentences else 0.0
    syl_per_word = st.syllables / n
    pct_difficult = st.difficult / n
    dale_chall = 0.1579 * (100.0 * pct_difficult) + 0.0496 * avg_sent
    if pct_difficult > 0.05:
        dale_chall += 3.6365
    ari = 4.71 * avg_word + 0.5 * avg_sent - 21.43
    coleman = 0.0588 * (100.0 * st.letters / n) - 0.296 * (100.0 * st.sentences / n) - 15.8
    flesch = 206.835 - 1.015 * avg_sent - 84.6 * syl_per_word
    fk_grade = 0.39 * avg_sent + 11.8 * syl_per_word - 15.59
    fog = 0.4 * (avg_sent + 100.0 * st.poly / n)
    return [
        float(n),
        float(st.chars),
        float(st.nonspace),
        float(st.syllables),
        float(st.sentences),
        float(len(st.vocab)),
        avg_word,
        avg_sent,
        float(st.mono),
        float(st.poly),
        syl_per_word,
        float(st.difficult),
        float(st.short),
        float(st.long),
        float(st.longest_sentence),
        float(st.longest_word),
        float(st.max_syllables),
        n / READING_WPM,
        n / SPEAKING_WPM,
        dale_chall,
        ari,
        coleman,
        flesch,
        fk_grade,
        fog,
        entropy,
    ]


def extract_features(text: str) -> np.ndarray:
    """The 26-dimensional feature vector of a sentence or concatenated summary."""
    return np.array(features_from_stats(TextStats.of(text)), dtype=float)
