"""Artefact collections, time windows and per-scenario sentence pools."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from .textproc import Sentence, preprocess

log = logging.getLogger(__name__)

__all__ = [
    "ArtefactType",
    "TYPE_NAMES",
    "RELEVANT_TYPES",
    "CorpusError",
    "Artefact",
    "TimeWindow",
    "ScenarioSpec",
    "Corpus",
    "SentencePool",
    "GoldSummary",
    "parse_timestamp",
    "format_timestamp",
    "load_corpus",
    "dump_corpus",
    "load_gold",
    "dump_gold",
    "window_pool",
]


class ArtefactType(str, Enum):
    IT = "IT"
    IB = "IB"
    IBC = "IBC"
    PRT = "PRT"
    PRB = "PRB"
    PRBC = "PRBC"
    PRRv = "PRRv"
    PRRvC = "PRRvC"
    CM = "CM"
    CMC = "CMC"
    MT = "MT"
    MD = "MD"
    RMe = "RMe"
    Wiki = "Wiki"
    Rel = "Rel"

    @classmethod
    def parse(cls, code: str) -> "ArtefactType":
        try:
            return cls(code)
        except ValueError:
            raise ValueError(f"unknown artefact type code {code!r}") from None


TYPE_NAMES = {
    ArtefactType.IT: "Issue titles",
    ArtefactType.IB: "Issue bodies",
    ArtefactType.IBC: "Issue body comments",
    ArtefactType.PRT: "Pull requests titles",
    ArtefactType.PRB: "Pull requests bodies",
    ArtefactType.PRBC: "Pull requests body comments",
    ArtefactType.PRRv: "Pull requests reviews",
    ArtefactType.PRRvC: "Pull requests reviews' comments",
    ArtefactType.CM: "Commit messages",
    ArtefactType.CMC: "Commit comments",
    ArtefactType.MT: "Milestone titles",
    ArtefactType.MD: "Milestone description",
    ArtefactType.RMe: "Readme files",
    ArtefactType.Wiki: "Wiki files",
    ArtefactType.Rel: "Releases",
}

# the eight most used types, most common first
RELEVANT_TYPES = (
    ArtefactType.Wiki,
    ArtefactType.IT,
    ArtefactType.IB,
    ArtefactType.IBC,
    ArtefactType.CM,
    ArtefactType.PRB,
    ArtefactType.RMe,
    ArtefactType.PRRv,
)


class CorpusError(ValueError):
    """A record could not be loaded; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        where = f"{path or '<corpus>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


def parse_timestamp(value: str) -> datetime:
    """ISO-8601 to an aware UTC datetime; naive values are taken as UTC."""
    if not isinstance(value, str):
        raise ValueError(f"timestamp must be a string, got {type(value).__name__}")
    v = value.strip()
    if v.endswith(("Z", "z")):
        v = v[:-1] + "+00:00"
    dt = datetime.fromisoformat(v)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    fmt = "%Y-%m-%dT%H:%M:%S.%fZ" if dt.microsecond else "%Y-%m-%dT%H:%M:%SZ"
    return dt.astimezone(timezone.utc).strftime(fmt)


@dataclass(frozen=True)
class Artefact:
    id: str
    project: str
    atype: ArtefactType
    created_at: datetime
    updated_at: datetime
    text: str

    def __post_init__(self):
        if self.updated_at < self.created_at:
            raise ValueError(f"artefact {self.id}: updated_at precedes created_at")

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "project": self.project,
            "type": self.atype.value,
            "created_at": format_timestamp(self.created_at),
            "updated_at": format_timestamp(self.updated_at),
            "text": self.text,
        }


@dataclass(frozen=True)
class TimeWindow:
    """Half-open interval ``[start, end)``."""

    start: datetime
    end: datetime

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("window start must precede its end")

    def __contains__(self, t: datetime) -> bool:
        return self.start <= t < self.end

    def contains(self, other: "TimeWindow") -> bool:
        return self.start <= other.start and other.end <= self.end

    @classmethod
    def parse(cls, text: str) -> "TimeWindow":
        """``YYYY-MM-DD..YYYY-MM-DD`` (end exclusive), full timestamps allowed."""
        try:
            a, b = text.split("..")
        except ValueError:
            raise ValueError(f"window must look like START..END, got {text!r}") from None
        return cls(parse_timestamp(a), parse_timestamp(b))

    @classmethod
    def week(cls, first_day: Union[date, str]) -> "TimeWindow":
        if isinstance(first_day, str):
            first_day = date.fromisoformat(first_day)
        start = datetime(first_day.year, first_day.month, first_day.day, tzinfo=timezone.utc)
        return cls(start, start + timedelta(days=7))

    def __str__(self) -> str:
        return f"{format_timestamp(self.start)}..{format_timestamp(self.end)}"


@dataclass(frozen=True)
class ScenarioSpec:
    """Which artefact types feed a pool.

    ``kind`` is ``"all"``, ``"single"`` or ``"subset"``; ``types`` holds the
    admitted types.
    """

    kind: str
    types: FrozenSet[ArtefactType]

    def __post_init__(self):
        if not self.types:
            raise ValueError("a scenario needs at least one artefact type")

    @classmethod
    def all_types(cls) -> "ScenarioSpec":
        return cls("all", frozenset(ArtefactType))

    @classmethod
    def single(cls, t: Union[str, ArtefactType]) -> "ScenarioSpec":
        return cls("single", frozenset([ArtefactType.parse(str(getattr(t, "value", t)))]))

    @classmethod
    def subset(cls, types: Iterable[Union[str, ArtefactType]] = RELEVANT_TYPES) -> "ScenarioSpec":
        return cls("subset", frozenset(ArtefactType.parse(str(getattr(t, "value", t))) for t in types))

    @classmethod
    def parse(cls, text: str) -> "ScenarioSpec":
        """``all``, ``subset`` (the eight relevant types), ``single:IT`` or
        ``subset:IT,IB,CM``."""
        if text == "all":
            return cls.all_types()
        if text == "subset":
            return cls.subset()
        kind, _, rest = text.partition(":")
        codes = [c.strip() for c in rest.split(",") if c.strip()]
        if kind == "single" and len(codes) == 1:
            return cls.single(codes[0])
        if kind == "subset" and codes:
            return cls.subset(codes)
        raise ValueError(f"cannot parse scenario {text!r}")

    def __str__(self) -> str:
        if self.kind == "all":
            return "all"
        order = [t.value for t in ArtefactType if t in self.types]
        if self.kind == "subset" and self.types == frozenset(RELEVANT_TYPES):
            return "subset"
        return f"{self.kind}:{','.join(order)}"


@dataclass(frozen=True)
class GoldSummary:
    project: str
    window: TimeWindow
    summary: str


@dataclass(frozen=True)
class SentencePool:
    sentences: Tuple[Sentence, ...]
    source_window: TimeWindow
    scenario: ScenarioSpec
    project: Optional[str] = None

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    @property
    def sids(self) -> List[Tuple[str, int]]:
        return [s.sid for s in self.sentences]


class Corpus:
    """An immutable, id-indexed artefact collection.

    Sentences are produced once per artefact on first use and cached.
    """

    def __init__(self, artefacts: Iterable[Artefact]):
        by_id: Dict[str, Artefact] = {}
        for a in artefacts:
            if a.id in by_id:
                raise CorpusError(f"duplicate artefact id {a.id!r}")
            by_id[a.id] = a
        self._by_id = dict(sorted(by_id.items()))
        self._sentences: Dict[str, Tuple[Sentence, ...]] = {}

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[Artefact]:
        return iter(self._by_id.values())

    def __getitem__(self, artefact_id: str) -> Artefact:
        return self._by_id[artefact_id]

    def __contains__(self, artefact_id: str) -> bool:
        return artefact_id in self._by_id

    @property
    def projects(self) -> List[str]:
        return sorted({a.project for a in self})

    def sentences(self, artefact_id: str) -> Tuple[Sentence, ...]:
        cached = self._sentences.get(artefact_id)
        if cached is None:
            a = self._by_id[artefact_id]
            cached = tuple(preprocess(a.text, a.id, a.atype.value))
            self._sentences[artefact_id] = cached
        return cached

    def sentence(self, sid: Tuple[str, int]) -> Sentence:
        artefact_id, index = sid
        if artefact_id not in self._by_id:
            raise KeyError(f"no artefact {artefact_id!r}")
        sents = self.sentences(artefact_id)
        if not 0 <= index < len(sents):
            raise KeyError(f"artefact {artefact_id!r} has no sentence {index}")
        return sents[index]

    def type_counts(self) -> Dict[ArtefactType, int]:
        counts = {t: 0 for t in ArtefactType}
        for a in self:
            counts[a.atype] += 1
        return counts


_REQUIRED = ("id", "project", "type", "created_at", "updated_at", "text")


def _artefact_from_record(rec: dict) -> Artefact:
    missing = [k for k in _REQUIRED if k not in rec]
    if missing:
        raise ValueError(f"missing required field(s): {', '.join(missing)}")
    for k in ("id", "project", "text"):
        if not isinstance(rec[k], str):
            raise ValueError(f"field {k!r} must be a string")
    return Artefact(
        id=rec["id"],
        project=rec["project"],
        atype=ArtefactType.parse(rec["type"]),
        created_at=parse_timestamp(rec["created_at"]),
        updated_at=parse_timestamp(rec["updated_at"]),
        text=rec["text"],
    )


def _read_jsonl(path: Union[str, Path]) -> Iterator[Tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"malformed record: {e.msg}", lineno, str(path)) from None
            if not isinstance(rec, dict):
                raise CorpusError("record is not an object", lineno, str(path))
            yield lineno, rec


def load_corpus(path: Union[str, Path]) -> Corpus:
    artefacts: List[Artefact] = []
    seen: Dict[str, int] = {}
    for lineno, rec in _read_jsonl(path):
        try:
            a = _artefact_from_record(rec)
        except ValueError as e:
            raise CorpusError(str(e), lineno, str(path)) from None
        if a.id in seen:
            raise CorpusError(f"duplicate artefact id {a.id!r} (first on line {seen[a.id]})", lineno, str(path))
        seen[a.id] = lineno
        artefacts.append(a)
    log.debug("loaded %d artefacts from %s", len(artefacts), path)
    return Corpus(artefacts)


def dump_corpus(corpus: Iterable[Artefact], path: Union[str, Path]) -> None:
    """Write records sorted by id, one compact JSON object per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for a in sorted(corpus, key=lambda a: a.id):
            fh.write(json.dumps(a.to_record(), ensure_ascii=False) + "\n")


def load_gold(path: Union[str, Path]) -> List[GoldSummary]:
    out = []
    for lineno, rec in _read_jsonl(path):
        try:
            missing = [k for k in ("project", "window_start", "window_end", "summary") if k not in rec]
            if missing:
                raise ValueError(f"missing required field(s): {', '.join(missing)}")
            window = TimeWindow(parse_timestamp(rec["window_start"]), parse_timestamp(rec["window_end"]))
            out.append(GoldSummary(rec["project"], window, rec["summary"]))
        except ValueError as e:
            raise CorpusError(str(e), lineno, str(path)) from None
    return out


def dump_gold(golds: Iterable[GoldSummary], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for g in golds:
            rec = {
                "project": g.project,
                "window_start": format_timestamp(g.window.start),
                "window_end": format_timestamp(g.window.end),
                "summary": g.summary,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def window_pool(
    corpus: Corpus,
    window: TimeWindow,
    scenario: ScenarioSpec,
    project: Optional[str] = None,
) -> SentencePool:
    """Sentences of artefacts created or updated inside ``window``.

    Each artefact contributes at most once; the result is ordered by
    (artefact id, sentence index). An empty pool is returned, not raised.
    """
    sentences: List[Sentence] = []
    for a in corpus:
        if project is not None and a.project != project:
            continue
        if a.atype not in scenario.types:
            continue
        if a.created_at in window or a.updated_at in window:
            sentences.extend(corpus.sentences(a.id))
    return SentencePool(tuple(sentences), window, scenario, project)
