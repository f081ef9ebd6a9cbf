"""Experiment machinery: run records, artefact contributions, relevant-type
selection and the algorithm benchmark."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import statistics
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .corpus import ArtefactType, Corpus, GoldSummary, ScenarioSpec, window_pool
from .optim import (
    ALGORITHMS,
    DEFAULT_MAX_LEN,
    EVALS,
    EnumerationCapExceeded,
    SearchBudget,
    Summary,
    run_algorithm,
)
from .similarity import MODES, Objective, TargetProfile
from .stats import mann_whitney_u
from .textproc import Sentence

log = logging.getLogger(__name__)

__all__ = [
    "RunRecord",
    "ContributionTable",
    "derive_seed",
    "write_runs",
    "read_runs",
    "contribution",
    "select_relevant",
    "valid_cases",
    "score_distributions",
    "pairwise_mwu",
    "benchmark",
]


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    mode: str
    scenario: str
    window: str
    project: str
    target: int
    seed: int
    sids: Tuple[Tuple[str, int], ...]
    score: float
    valid: bool
    evaluations: int
    elapsed_ms: Optional[float]

    @property
    def case(self) -> Tuple:
        return (self.target, self.project, self.window, self.scenario, self.mode)

    def to_json(self) -> str:
        d = asdict(self)
        d["sids"] = [list(s) for s in self.sids]
        return json.dumps(d)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        d = json.loads(line)
        d["sids"] = tuple((str(a), int(i)) for a, i in d["sids"])
        return cls(**d)

    @classmethod
    def from_summary(cls, s: Summary, *, mode, scenario, window, project, target, seed, timed=True):
        return cls(
            algorithm=s.algorithm,
            mode=mode,
            scenario=str(scenario),
            window=str(window),
            project=project,
            target=target,
            seed=seed,
            sids=tuple(s.sids),
            score=s.score.score,
            valid=s.valid,
            evaluations=s.evaluations,
            elapsed_ms=round(s.elapsed * 1000.0, 3) if timed else None,
        )


def write_runs(records: Iterable[RunRecord], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")


def read_runs(path: Union[str, Path]) -> List[RunRecord]:
    with open(path, encoding="utf-8") as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]


def derive_seed(master: int, *coords) -> int:
    """Stable 64-bit seed for one run, independent of execution order."""
    h = hashlib.blake2b(repr((int(master),) + tuple(str(c) for c in coords)).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


# ---------------------------------------------------------------- contributions


@dataclass(frozen=True)
class ContributionTable:
    counts: Mapping[ArtefactType, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def percent(self, t: ArtefactType) -> float:
        return 100.0 * self.counts.get(t, 0) / self.total if self.total else 0.0

    @property
    def percentages(self) -> Dict[ArtefactType, float]:
        return {t: self.percent(t) for t in ArtefactType}

    def rows(self) -> List[Tuple[str, int, float]]:
        return [(t.value, self.counts.get(t, 0), self.percent(t)) for t in ArtefactType]

    def write_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["type", "count", "percent"])
            for code, count, pct in self.rows():
                w.writerow([code, count, f"{pct:.4f}"])


def contribution(runs: Iterable[RunRecord], corpus: Corpus) -> ContributionTable:
    """Count selected sentences per artefact type over valid runs.

    A sentence id repeated inside one run counts once.
    """
    counts = {t: 0 for t in ArtefactType}
    for r in runs:
        if not r.valid:
            continue
        for sid in set(r.sids):
            try:
                corpus.sentence(sid)
            except KeyError as e:
                raise KeyError(f"run {r.algorithm}/{r.target}: unresolvable sentence {sid}: {e}") from None
            counts[corpus[sid[0]].atype] += 1
    return ContributionTable(counts)


def select_relevant(table: Union[ContributionTable, Mapping[ArtefactType, float]]) -> List[ArtefactType]:
    """Types contributing more than the median, most common first.

    With an odd number of types the type sitting exactly on the median is also
    kept when no other type shares its value; ties on the median are dropped.
    """
    values = table.percentages if isinstance(table, ContributionTable) else dict(table)
    med = statistics.median(values.values())
    chosen = [t for t, v in values.items() if v > med]
    at_median = [t for t, v in values.items() if v == med]
    if len(at_median) == 1 and len(values) % 2 == 1:
        chosen += at_median
    order = {t: i for i, t in enumerate(ArtefactType)}
    return sorted(chosen, key=lambda t: (-values[t], order[t]))


# ---------------------------------------------------------------- score analysis


def valid_cases(runs: Sequence[RunRecord]) -> List[RunRecord]:
    """Drop every case (target, scenario, mode) in which any run came out empty."""
    bad = {r.case for r in runs if not r.valid}
    return [r for r in runs if r.case not in bad]


def score_distributions(runs: Sequence[RunRecord]) -> Dict[Tuple[str, str, str], List[float]]:
    dist: Dict[Tuple[str, str, str], List[float]] = defaultdict(list)
    for r in valid_cases(runs):
        dist[(r.algorithm, r.mode, r.scenario)].append(r.score)
    return dict(dist)


def pairwise_mwu(runs: Sequence[RunRecord]) -> List[Tuple[str, str, str, str, float, float]]:
    """Rows ``(mode, scenario, algoA, algoB, U, p)`` for every algorithm pair."""
    dist = score_distributions(runs)
    groups: Dict[Tuple[str, str], Dict[str, List[float]]] = defaultdict(dict)
    for (algo, mode, scenario), scores in dist.items():
        groups[(mode, scenario)][algo] = scores
    rows = []
    for (mode, scenario) in sorted(groups):
        algos = groups[(mode, scenario)]
        names = [a for a in ALGORITHMS if a in algos]
        for a, b in combinations(names, 2):
            u, p = mann_whitney_u(algos[a], algos[b])
            rows.append((mode, scenario, a, b, u, p))
    return rows


# ---------------------------------------------------------------- benchmark


@dataclass(frozen=True)
class _Case:
    target: int
    project: str
    window: str
    scenario: str
    mode: str
    sentences: Tuple[Sentence, ...]
    gold_text: str
    algorithms: Tuple[str, ...]
    budget_kind: str
    budget_amount: float
    master_seed: int
    max_len: int


def _run_case(case: _Case) -> List[RunRecord]:
    target = TargetProfile.from_text(case.gold_text, case.mode)
    obj = Objective(case.sentences, target)
    records = []
    for algo in case.algorithms:
        seed = derive_seed(case.master_seed, case.target, case.project, case.window, case.scenario, case.mode, algo)
        budget = SearchBudget(case.budget_kind, case.budget_amount, seed)
        try:
            s = run_algorithm(algo, obj, case.max_len, budget)
        except EnumerationCapExceeded as e:
            log.warning("skipping %s on target %d (%s): %s", algo, case.target, case.scenario, e)
            continue
        records.append(
            RunRecord.from_summary(
                s,
                mode=case.mode,
                scenario=case.scenario,
                window=case.window,
                project=case.project,
                target=case.target,
                seed=seed,
                timed=case.budget_kind != EVALS,
            )
        )
    return records


def benchmark(
    corpus: Corpus,
    golds: Sequence[GoldSummary],
    algorithms: Sequence[str] = tuple(ALGORITHMS),
    modes: Sequence[str] = MODES,
    scenarios: Sequence[ScenarioSpec] = (ScenarioSpec.all_types(),),
    budget: SearchBudget = SearchBudget.seconds(10.0),
    *,
    max_len: int = DEFAULT_MAX_LEN,
    workers: int = 1,
    out_dir: Union[str, Path, None] = None,
) -> List[RunRecord]:
    """Run every (target, scenario, mode, algorithm) combination.

    ``budget.seed`` is the master seed; each run gets its own seed derived
    from it and the run coordinates, so results do not depend on ``workers``.
    Targets whose window holds no sentences of the project are skipped with a
    warning. Under an evaluation budget, timings are left out of the run
    records so that reruns are byte-identical.
    """
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise ValueError(f"unknown algorithm(s): {unknown}")
    cases: List[_Case] = []
    for ti, gold in enumerate(golds):
        for scenario in scenarios:
            pool = window_pool(corpus, gold.window, scenario, gold.project)
            if not len(pool):
                log.warning("target %d: no %s sentences for %s in %s; skipped", ti, scenario, gold.project, gold.window)
                continue
            for mode in modes:
                cases.append(
                    _Case(
                        target=ti,
                        project=gold.project,
                        window=str(gold.window),
                        scenario=str(scenario),
                        mode=mode,
                        sentences=pool.sentences,
                        gold_text=gold.summary,
                        algorithms=tuple(algorithms),
                        budget_kind=budget.kind,
                        budget_amount=budget.amount,
                        master_seed=budget.seed,
                        max_len=max_len,
                    )
                )
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_run_case, cases))
    else:
        chunks = [_run_case(c) for c in cases]
    records = [r for chunk in chunks for r in chunk]
    if out_dir is not None:
        write_outputs(records, corpus, out_dir)
    return records


def write_outputs(records: Sequence[RunRecord], corpus: Corpus, out_dir: Union[str, Path]) -> None:
    """runs.jsonl, distributions.csv, contributions.csv and mwu.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_runs(records, out / "runs.jsonl")
    with open(out / "distributions.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "mode", "scenario", "score"])
        for r in valid_cases(records):
            w.writerow([r.algorithm, r.mode, r.scenario, repr(r.score)])
    contribution(records, corpus).write_csv(out / "contributions.csv")
    write_mwu(pairwise_mwu(records), out / "mwu.csv")


def write_mwu(rows, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mode", "scenario", "algoA", "algoB", "U", "p"])
        for mode, scenario, a, b, u, p in rows:
            w.writerow([mode, scenario, a, b, repr(u), repr(p)])
