"""Summary construction: brute force, greedy, three RLS variants, random search.

All algorithms work on positions into a pool that is sorted by sentence id
and share one :class:`~devsumm.similarity.Objective`. Budgets are either a
number of fitness evaluations (deterministic under a seed) or wall-clock
seconds.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .similarity import INVALID, Fitness, Objective, TargetProfile
from .textproc import Sentence, SentenceId

__all__ = [
    "DEFAULT_MAX_LEN",
    "DEFAULT_ENUMERATION_CAP",
    "EVALS",
    "SECONDS",
    "SearchBudget",
    "Summary",
    "EnumerationCapExceeded",
    "subset_count",
    "brute_force",
    "greedy",
    "rls_unrestricted",
    "rls_restricted",
    "rls_unrestricted_subset",
    "random_search",
    "ALGORITHMS",
    "LENGTH_CAPPED",
    "run_algorithm",
]

DEFAULT_MAX_LEN = 5
DEFAULT_ENUMERATION_CAP = 10**7

EVALS = "evals"
SECONDS = "seconds"


@dataclass(frozen=True)
class SearchBudget:
    kind: str
    amount: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (EVALS, SECONDS):
            raise ValueError(f"budget kind must be {EVALS!r} or {SECONDS!r}")
        if self.amount < 0:
            raise ValueError("budget amount must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def evaluations(cls, n: int, seed: int = 0) -> "SearchBudget":
        return cls(EVALS, n, seed)

    @classmethod
    def seconds(cls, s: float, seed: int = 0) -> "SearchBudget":
        return cls(SECONDS, s, seed)


class _Meter:
    def __init__(self, obj: Objective, budget: SearchBudget):
        self.obj = obj
        self.budget = budget
        self.start_evals = obj.evaluations
        self.t0 = time.perf_counter()

    def exhausted(self) -> bool:
        if self.budget.kind == EVALS:
            return self.obj.evaluations - self.start_evals >= self.budget.amount
        return time.perf_counter() - self.t0 >= self.budget.amount


@dataclass(frozen=True)
class Summary:
    sids: Tuple[SentenceId, ...]
    score: Fitness
    algorithm: str
    evaluations: int
    elapsed: float
    indices: Tuple[int, ...] = ()

    @property
    def valid(self) -> bool:
        return self.score.valid

    def __len__(self) -> int:
        return len(self.sids)


class EnumerationCapExceeded(ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"brute force would evaluate {count:,} subsets (cap {cap:,})")
        self.count = count
        self.cap = cap


def subset_count(n: int, max_len: int) -> int:
    """Number of non-empty subsets of size at most ``max_len``."""
    return sum(math.comb(n, k) for k in range(1, min(n, max_len) + 1))


def _better(f: Fitness, best: Fitness) -> bool:
    return (f.score, f.valid) > (best.score, best.valid)


def _enumerate(obj: Objective, items: Sequence[int], max_len: int) -> Tuple[Tuple[int, ...], Fitness]:
    # sizes ascending, combinations lexicographic, strict improvement: ties keep
    # the smaller and lexicographically first subset
    best_idx: Tuple[int, ...] = ()
    best = INVALID
    for k in range(1, min(len(items), max_len) + 1):
        for combo in itertools.combinations(items, k):
            f = obj(combo)
            if _better(f, best):
                best_idx, best = combo, f
    return best_idx, best


def _brute_force(obj: Objective, max_len: int, budget=None, *, cap: int = DEFAULT_ENUMERATION_CAP, **_):
    count = subset_count(obj.n, max_len)
    if count > cap:
        raise EnumerationCapExceeded(count, cap)
    return _enumerate(obj, range(obj.n), max_len)


def _greedy(obj: Objective, max_len: int, budget=None, *, trace: Optional[list] = None, **_):
    current: List[int] = []
    cur = INVALID
    while len(current) < max_len:
        best_i: Optional[int] = None
        best = INVALID
        for i in range(obj.n):
            if i in current:
                continue
            f = obj(sorted(current + [i]))
            if best_i is None or f.score > best.score:
                best_i, best = i, f
        if best_i is None or not best.valid or best.score < cur.score:
            break
        current.append(best_i)
        cur = best
        if trace is not None:
            trace.append((tuple(current), cur.score))
    return tuple(sorted(current)), cur


def _rls(
    obj: Objective,
    max_len: Optional[int],
    budget: SearchBudget,
    *,
    trace: Optional[List[Tuple[int, ...]]] = None,
    **_,
):
    n = obj.n
    rng = np.random.default_rng(budget.seed)
    meter = _Meter(obj, budget)
    members: set = set()
    cur = INVALID
    while n and not meter.exhausted():
        i = int(rng.integers(n))
        if i not in members and max_len is not None and len(members) >= max_len:
            # would exceed the length cap: rejected without evaluation
            if trace is not None:
                trace.append(tuple(sorted(members)))
            continue
        members ^= {i}
        f = obj(sorted(members))
        if f.score >= cur.score:
            cur = f
        else:
            members ^= {i}
        if trace is not None:
            trace.append(tuple(sorted(members)))
    chosen = tuple(sorted(members))
    return chosen, (cur if chosen else INVALID)


def _rls_unrestricted(obj, max_len=None, budget=None, **kw):
    return _rls(obj, None, budget, **kw)


def _rls_restricted(obj, max_len, budget, **kw):
    return _rls(obj, max_len, budget, **kw)


def _rls_unrestricted_subset(obj, max_len, budget, *, cap: int = DEFAULT_ENUMERATION_CAP, **kw):
    incumbent, _ = _rls(obj, None, budget, **kw)
    count = subset_count(len(incumbent), max_len)
    if count > cap:
        raise EnumerationCapExceeded(count, cap)
    return _enumerate(obj, incumbent, max_len)


def _random_search(obj: Objective, max_len: int, budget: SearchBudget, **_):
    n = obj.n
    k = min(max_len, n)
    rng = np.random.default_rng(budget.seed)
    meter = _Meter(obj, budget)
    best_idx: Tuple[int, ...] = ()
    best = INVALID
    while k and not meter.exhausted():
        combo = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
        f = obj(combo)
        if _better(f, best):
            best_idx, best = combo, f
    return best_idx, best


ALGORITHMS: Dict[str, Callable] = {
    "brute_force": _brute_force,
    "greedy": _greedy,
    "rls_unrestricted": _rls_unrestricted,
    "rls_restricted": _rls_restricted,
    "rls_unrestricted_subset": _rls_unrestricted_subset,
    "random_search": _random_search,
}

# algorithms whose result never exceeds the target length
LENGTH_CAPPED = ("brute_force", "greedy", "rls_restricted", "rls_unrestricted_subset", "random_search")

_NEEDS_BUDGET = {"rls_unrestricted", "rls_restricted", "rls_unrestricted_subset", "random_search"}


def run_algorithm(
    name: str,
    obj: Objective,
    max_len: int = DEFAULT_MAX_LEN,
    budget: Optional[SearchBudget] = None,
    **kwargs,
) -> Summary:
    """Run a registered algorithm against a prepared objective."""
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None
    if max_len < 1:
        raise ValueError("target length must be at least 1")
    if name in _NEEDS_BUDGET and budget is None:
        raise ValueError(f"{name} needs a search budget")
    start = obj.evaluations
    t0 = time.perf_counter()
    indices, fit = fn(obj, max_len, budget, **kwargs)
    elapsed = time.perf_counter() - t0
    return Summary(
        sids=tuple(obj.pool[i].sid for i in indices),
        score=fit,
        algorithm=name,
        evaluations=obj.evaluations - start,
        elapsed=elapsed,
        indices=tuple(indices),
    )


def _objective(pool: Sequence[Sentence], target: Union[TargetProfile, str], mode: str) -> Objective:
    if isinstance(target, str):
        target = TargetProfile.from_text(target, mode)
    elif target.mode != mode:
        raise ValueError(f"target built for {target.mode!r}, asked for {mode!r}")
    return Objective(sorted(pool, key=lambda s: s.sid), target)


def brute_force(pool, target, mode, max_len=DEFAULT_MAX_LEN, *, cap=DEFAULT_ENUMERATION_CAP) -> Summary:
    """Exact best subset of size 1..max_len.

    Raises :class:`EnumerationCapExceeded` (carrying the subset count) when the
    enumeration would exceed ``cap``.
    """
    return run_algorithm("brute_force", _objective(pool, target, mode), max_len, cap=cap)


def greedy(pool, target, mode, max_len=DEFAULT_MAX_LEN, *, trace=None) -> Summary:
    """Add the best unused sentence per round while that does not lower fitness.

    Equal-fitness additions are accepted; ties between candidates go to the
    smallest sentence id.
    """
    return run_algorithm("greedy", _objective(pool, target, mode), max_len, trace=trace)


def rls_unrestricted(pool, target, mode, budget: SearchBudget, *, trace=None) -> Summary:
    return run_algorithm(
        "rls_unrestricted", _objective(pool, target, mode), DEFAULT_MAX_LEN, budget, trace=trace
    )


def rls_restricted(pool, target, mode, max_len, budget: SearchBudget, *, trace=None) -> Summary:
    return run_algorithm("rls_restricted", _objective(pool, target, mode), max_len, budget, trace=trace)


def rls_unrestricted_subset(pool, target, mode, max_len, budget: SearchBudget, *, cap=DEFAULT_ENUMERATION_CAP) -> Summary:
    """Unrestricted RLS on the whole budget, then brute force inside its result."""
    return run_algorithm("rls_unrestricted_subset", _objective(pool, target, mode), max_len, budget, cap=cap)


def random_search(pool, target, mode, max_len, budget: SearchBudget) -> Summary:
    return run_algorithm("random_search", _objective(pool, target, mode), max_len, budget)
