"""Deterministic synthetic corpora and gold summaries.

The real gold standard (student-written weekly summaries) is not public, so
tests, the acceptance suite and the CLI demos run on text produced here. The
generator mimics the shape of repository data: short titles, multi-sentence
bodies with the occasional code block, terse commit messages and long
wiki/readme pages, spread over several projects and weeks.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import List, Sequence, Tuple

import numpy as np

from .corpus import Artefact, ArtefactType, GoldSummary, TimeWindow
from .textproc import Sentence, preprocess

__all__ = ["Activity", "SyntheticData", "make_corpus", "random_instance", "issue_title_week"]

VERBS = [
    ("fix", "fixed"), ("add", "added"), ("update", "updated"), ("remove", "removed"),
    ("refactor", "refactored"), ("implement", "implemented"), ("improve", "improved"),
    ("document", "documented"), ("test", "tested"), ("merge", "merged"),
    ("review", "reviewed"), ("deploy", "deployed"), ("configure", "configured"),
    ("migrate", "migrated"), ("optimise", "optimised"), ("design", "designed"),
]

OBJECTS = [
    "login page", "user authentication", "database schema", "payment module",
    "search index", "REST endpoint", "unit tests", "build pipeline", "docker image",
    "dashboard chart", "email notifications", "cache layer", "project readme",
    "wiki page", "release notes", "upload form", "session timeout", "error messages",
    "navigation bar", "admin panel", "booking calendar", "profile settings",
    "password reset", "map view", "integration tests", "logging configuration",
    "API documentation", "frontend styles", "deployment script", "report generator",
]

QUALIFIERS = [
    "for the mobile client", "in the admin panel", "before the demo",
    "to support pagination", "after the client meeting", "on the staging server",
    "so that users can log in again", "for the next milestone", "with better validation",
    "using the new framework", "to reduce page load time", "as discussed with the tutor",
]

OPENERS = [
    "I think", "It seems", "As far as I can tell", "Maybe", "We agreed that",
    "The client asked why", "Looks like", "Note that",
]

PROBLEMS = [
    "crashes on submit", "is very slow", "shows the wrong date", "fails on Safari",
    "returns a server error", "does not refresh", "breaks the layout", "times out",
]

CODE_SNIPPETS = [
    "```\nnpm install\nnpm run build\n```",
    "```python\ndef handler(event):\n    return None\n```",
    "    SELECT * FROM users;\n    DROP TABLE tmp;",
]

SUMMARY_OPENERS = ["This week", "During the week", "Over the last days", "In this sprint"]


@dataclass(frozen=True)
class Activity:
    verb: int
    obj: int
    qual: int


@dataclass
class SyntheticData:
    artefacts: List[Artefact]
    golds: List[GoldSummary]


def _cap(s: str) -> str:
    return s[:1].upper() + s[1:]


def _pick(rng: np.random.Generator, seq: Sequence):
    return seq[int(rng.integers(len(seq)))]


def _activity(rng) -> Activity:
    return Activity(int(rng.integers(len(VERBS))), int(rng.integers(len(OBJECTS))), int(rng.integers(len(QUALIFIERS))))


def _statement(rng, act: Activity, tense: int = 1) -> str:
    verb = VERBS[act.verb][tense]
    obj = OBJECTS[act.obj]
    if rng.random() < 0.6:
        return f"{_cap(verb)} the {obj} {QUALIFIERS[act.qual]}."
    return f"{_cap(verb)} the {obj}."


def _comment(rng, act: Activity) -> str:
    obj = OBJECTS[act.obj]
    forms = [
        f"{_pick(rng, OPENERS)} the {obj} still needs work.",
        f"{_pick(rng, OPENERS)} we should {VERBS[act.verb][0]} the {obj} {QUALIFIERS[act.qual]}.",
        f"Thanks, the {obj} looks good now.",
        f"Can someone {VERBS[act.verb][0]} the {obj}?",
        f"I {VERBS[act.verb][1]} the {obj} yesterday.",
    ]
    return _pick(rng, forms)


def _text(rng, atype: ArtefactType, acts: List[Activity]) -> str:
    a = acts[0]
    obj = OBJECTS[a.obj]
    if atype in (ArtefactType.IT, ArtefactType.PRT, ArtefactType.MT):
        if atype is ArtefactType.IT and rng.random() < 0.5:
            return f"{_cap(obj)} {_pick(rng, PROBLEMS)}"
        return f"{_cap(VERBS[a.verb][0])} {obj} {QUALIFIERS[a.qual]}"
    if atype is ArtefactType.CM:
        return f"{_cap(VERBS[a.verb][0])} {obj}"
    if atype in (ArtefactType.IB, ArtefactType.PRB, ArtefactType.MD):
        parts = [_statement(rng, x, int(rng.integers(2))) for x in acts]
        if atype is ArtefactType.IB:
            parts.insert(0, f"The {obj} {_pick(rng, PROBLEMS)}.")
        if rng.random() < 0.25:
            parts.append("\n" + _pick(rng, CODE_SNIPPETS) + "\n")
        return " ".join(parts)
    if atype in (ArtefactType.IBC, ArtefactType.PRBC, ArtefactType.PRRvC, ArtefactType.CMC):
        return " ".join(_comment(rng, x) for x in acts)
    if atype is ArtefactType.PRRv:
        return _pick(rng, ["Looks good to me.", "Approved.", f"Please {VERBS[a.verb][0]} the {obj} first."])
    if atype is ArtefactType.Rel:
        lines = [f"Release {int(rng.integers(1, 4))}.{int(rng.integers(10))}.0"]
        lines += [f"- {_statement(rng, x)}" for x in acts]
        return "\n".join(lines)
    # Wiki, RMe: headed pages with prose and lists
    lines = [f"# {_cap(obj)}", ""]
    lines.append(" ".join(_statement(rng, x, 0) for x in acts))
    lines.append("")
    for x in acts[:3]:
        lines.append(f"- {_cap(OBJECTS[x.obj])} {QUALIFIERS[x.qual]}")
    if rng.random() < 0.3:
        lines += ["", _pick(rng, CODE_SNIPPETS)]
    return "\n".join(lines)


_SIZES = {
    ArtefactType.Wiki: (3, 6), ArtefactType.RMe: (3, 6), ArtefactType.IB: (1, 3),
    ArtefactType.PRB: (1, 3), ArtefactType.IBC: (1, 3), ArtefactType.Rel: (2, 4),
}

# per-week artefact counts, roughly in the proportions of a student project
_WEEKLY = {
    ArtefactType.IT: 4, ArtefactType.IB: 4, ArtefactType.IBC: 5, ArtefactType.PRT: 2,
    ArtefactType.PRB: 2, ArtefactType.PRBC: 2, ArtefactType.PRRv: 3, ArtefactType.PRRvC: 2,
    ArtefactType.CM: 8, ArtefactType.CMC: 1, ArtefactType.MT: 1, ArtefactType.MD: 1,
    ArtefactType.RMe: 1, ArtefactType.Wiki: 2, ArtefactType.Rel: 1,
}


def summary_text(rng, acts: Sequence[Activity]) -> str:
    """A student-style weekly summary mentioning the given activities."""
    sents = []
    for i, act in enumerate(acts):
        s = _statement(rng, act)
        if i == 0:
            s = f"{_pick(rng, SUMMARY_OPENERS)} we {s[0].lower()}{s[1:]}"
        elif rng.random() < 0.5:
            s = f"We also {s[0].lower()}{s[1:]}"
        sents.append(s)
    if rng.random() < 0.5:
        sents.append(f"Next week we plan to {VERBS[_activity(rng).verb][0]} the {_pick(rng, OBJECTS)}.")
    return " ".join(sents)


def make_corpus(
    seed: int = 0,
    projects: int = 2,
    weeks: int = 2,
    start: str = "2020-01-06",
    golds_per_week: int = 2,
) -> SyntheticData:
    """Artefacts of all 15 types for each project and week, plus gold summaries."""
    rng = np.random.default_rng(seed)
    t0 = datetime.fromisoformat(start).replace(tzinfo=timezone.utc)
    artefacts: List[Artefact] = []
    golds: List[GoldSummary] = []
    for p in range(projects):
        project = f"project-{p + 1:02d}"
        for w in range(weeks):
            window = TimeWindow(t0 + timedelta(days=7 * w), t0 + timedelta(days=7 * (w + 1)))
            week_acts = [_activity(rng) for _ in range(8)]
            counter = 0
            for atype, n in _WEEKLY.items():
                for _ in range(n):
                    lo, hi = _SIZES.get(atype, (1, 1))
                    k = int(rng.integers(lo, hi + 1))
                    acts = [week_acts[int(i)] if rng.random() < 0.7 else _activity(rng) for i in rng.integers(8, size=k)]
                    created = window.start + timedelta(seconds=int(rng.integers(7 * 86400)))
                    updated = created + timedelta(seconds=int(rng.integers(3 * 86400)))
                    counter += 1
                    artefacts.append(
                        Artefact(
                            id=f"{project}/w{w + 1:02d}/{atype.value}-{counter:03d}",
                            project=project,
                            atype=atype,
                            created_at=created,
                            updated_at=updated,
                            text=_text(rng, atype, acts),
                        )
                    )
            for _ in range(golds_per_week):
                chosen = [week_acts[int(i)] for i in rng.choice(8, size=int(rng.integers(3, 6)), replace=False)]
                golds.append(GoldSummary(project, window, summary_text(rng, chosen)))
    return SyntheticData(artefacts, golds)


_MIX = [
    ArtefactType.IT, ArtefactType.IB, ArtefactType.IBC, ArtefactType.CM, ArtefactType.PRT,
    ArtefactType.PRB, ArtefactType.Wiki, ArtefactType.RMe, ArtefactType.PRRv,
]


def random_instance(seed: int, n: int) -> Tuple[List[Sentence], str]:
    """A pool of exactly ``n`` sentences and a gold summary about the same week."""
    rng = np.random.default_rng(seed)
    week_acts = [_activity(rng) for _ in range(6)]
    pool: List[Sentence] = []
    k = 0
    while len(pool) < n:
        atype = _MIX[int(rng.integers(len(_MIX)))]
        acts = [week_acts[int(i)] if rng.random() < 0.6 else _activity(rng) for i in rng.integers(6, size=2)]
        for s in preprocess(_text(rng, atype, acts), f"a{k:04d}", atype.value):
            if len(pool) < n:
                pool.append(s)
        k += 1
    chosen = [week_acts[int(i)] for i in rng.choice(6, size=int(rng.integers(3, 6)), replace=False)]
    return pool, summary_text(rng, chosen)


def issue_title_week(seed: int = 0, n: int = 35, golds: int = 1) -> Tuple[List[Artefact], List[GoldSummary]]:
    """One project-week with exactly ``n`` issue titles (one sentence each)."""
    rng = np.random.default_rng(seed)
    window = TimeWindow.week("2020-01-06")
    week_acts = [_activity(rng) for _ in range(8)]
    artefacts = []
    for i in range(n):
        act = week_acts[int(rng.integers(8))] if rng.random() < 0.6 else _activity(rng)
        created = window.start + timedelta(seconds=int(rng.integers(7 * 86400)))
        artefacts.append(
            Artefact(f"it-{i:03d}", "project-01", ArtefactType.IT, created, created, _text(rng, ArtefactType.IT, [act]))
        )
    gold = [
        GoldSummary("project-01", window, summary_text(rng, [week_acts[int(j)] for j in rng.choice(8, size=4, replace=False)]))
        for _ in range(golds)
    ]
    return artefacts, gold
