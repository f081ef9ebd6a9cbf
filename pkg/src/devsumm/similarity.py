"""Min-max normalisation and cosine similarity, the fitness of every optimiser.

Two routes compute the same number. :func:`fitness` builds dense vectors and
goes through :func:`normalize` and :func:`cosine`; :class:`Objective`
precomputes per-sentence data once per (pool, target) and evaluates index
subsets with plain Python arithmetic, which is what the search loops call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from .features import (
    N_FEATURES,
    TextStats,
    extract_features,
    features_from_stats,
    term_vector,
)
from .textproc import Sentence, preprocess

__all__ = [
    "WORD",
    "FEATURE",
    "MODES",
    "Fitness",
    "NormalizationBounds",
    "TargetProfile",
    "fit_bounds",
    "normalize",
    "cosine",
    "pool_bounds",
    "fitness",
    "Objective",
]

WORD = "word"
FEATURE = "feature"
MODES = (WORD, FEATURE)

Vector = Union[np.ndarray, Mapping[str, float]]


@dataclass(frozen=True)
class Fitness:
    score: float
    valid: bool

    def __post_init__(self):
        if not self.valid and self.score != 0.0:
            raise ValueError("an invalid fitness must have score 0")


INVALID = Fitness(0.0, False)


@dataclass(frozen=True)
class NormalizationBounds:
    """Per-dimension observed minima and maxima.

    ``terms`` names the dimensions when the bounds were fitted on term
    vectors; it is ``None`` for dense feature vectors.
    """

    lo: np.ndarray
    hi: np.ndarray
    terms: Tuple[str, ...] | None = None

    def __post_init__(self):
        if self.lo.shape != self.hi.shape:
            raise ValueError("lo and hi must have the same shape")
        if np.any(self.hi < self.lo):
            raise ValueError("max must not be below min")

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    def densify(self, v: Vector) -> np.ndarray:
        """Term vector as a dense array over ``terms``; arrays pass through."""
        if isinstance(v, Mapping):
            if self.terms is None:
                raise ValueError("bounds were not fitted on term vectors")
            unknown = set(v) - set(self.terms)
            if unknown:
                raise ValueError(f"terms outside the fitted vocabulary: {sorted(unknown)[:5]}")
            return np.array([float(v.get(t, 0)) for t in self.terms])
        return np.asarray(v, dtype=float)


def fit_bounds(vectors: Iterable[Vector]) -> NormalizationBounds:
    vectors = list(vectors)
    if not vectors:
        raise ValueError("fit_bounds needs at least one vector")
    if all(isinstance(v, Mapping) for v in vectors):
        highs: Dict[str, float] = {}
        for v in vectors:
            for t, c in v.items():
                if c > highs.get(t, 0):
                    highs[t] = c
                else:
                    highs.setdefault(t, 0)
        terms = tuple(sorted(highs))
        hi = np.array([float(highs[t]) for t in terms])
        return NormalizationBounds(np.zeros(len(terms)), hi, terms)
    arr = np.vstack([np.asarray(v, dtype=float) for v in vectors])
    return NormalizationBounds(arr.min(axis=0), arr.max(axis=0))


def normalize(v: Vector, b: NormalizationBounds) -> np.ndarray:
    """Rescale into [0, 1]; constant dimensions give 0, outliers are clamped."""
    x = b.densify(v)
    if x.shape != b.lo.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {b.dim}")
    span = b.hi - b.lo
    out = np.zeros_like(x)
    live = span > 0
    out[live] = (x[live] - b.lo[live]) / span[live]
    return np.clip(out, 0.0, 1.0)


def cosine(x, y) -> Fitness:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    nx2 = float(x @ x)
    ny2 = float(y @ y)
    if nx2 == 0.0 or ny2 == 0.0:
        return INVALID
    # sqrt of the product keeps cos(x, x) exactly 1
    score = float(x @ y) / math.sqrt(nx2 * ny2)
    return Fitness(min(1.0, max(-1.0, score)), True)


@dataclass(frozen=True)
class TargetProfile:
    """What the search aims at: a term-count vector or a feature vector."""

    mode: str
    vector: Vector
    text: str = ""

    @classmethod
    def from_text(cls, text: str, mode: str) -> "TargetProfile":
        if mode == WORD:
            stems = [s for sent in preprocess(text) for s in sent.stems]
            return cls(WORD, term_vector(stems), text)
        if mode == FEATURE:
            return cls(FEATURE, extract_features(text), text)
        raise ValueError(f"unknown mode {mode!r}")

    @classmethod
    def from_features(cls, values: Sequence[float]) -> "TargetProfile":
        arr = np.asarray(values, dtype=float)
        if arr.shape != (N_FEATURES,):
            raise ValueError(f"feature targets need {N_FEATURES} values")
        return cls(FEATURE, arr)


def _sentence_vector(s: Sentence, mode: str) -> Vector:
    return term_vector(s.stems) if mode == WORD else extract_features(s.raw)


def pool_bounds(pool: Sequence[Sentence], target: TargetProfile) -> NormalizationBounds:
    """Bounds over the pool sentences plus the target, never over candidates."""
    vecs = [_sentence_vector(s, target.mode) for s in pool]
    vecs.append(target.vector)
    return fit_bounds(vecs)


def _in_sid_order(selected: Iterable[Sentence]) -> List[Sentence]:
    uniq = {s.sid: s for s in selected}
    return [uniq[k] for k in sorted(uniq)]


def fitness(
    selected: Iterable[Sentence],
    target: TargetProfile,
    mode: str,
    bounds: NormalizationBounds,
) -> Fitness:
    """Reference fitness of a selection against a target (dense route)."""
    if mode != target.mode:
        raise ValueError(f"target built for {target.mode!r}, asked for {mode!r}")
    chosen = _in_sid_order(selected)
    if not chosen:
        return INVALID
    if mode == WORD:
        summed: Dict[str, int] = {}
        for s in chosen:
            for t in s.stems:
                summed[t] = summed.get(t, 0) + 1
        x = normalize(summed, bounds)
    else:
        x = normalize(extract_features(" ".join(s.raw for s in chosen)), bounds)
    return cosine(x, normalize(target.vector, bounds))


def _py_cosine(dot: float, nx2: float, ny2: float) -> Fitness:
    if nx2 == 0.0 or ny2 == 0.0:
        return INVALID
    return Fitness(min(1.0, dot / math.sqrt(nx2 * ny2)), True)


@dataclass
class Objective:
    """Fitness of index subsets of a fixed pool against a fixed target.

    Every call counts as one evaluation. Indices refer to positions in
    ``pool``; the pool is expected in sid order and callers pass indices
    sorted ascending, so concatenation order always follows sid order.
    """

    pool: Sequence[Sentence]
    target: TargetProfile
    evaluations: int = field(default=0, init=False)

    def __post_init__(self):
        self.mode = self.target.mode
        self.bounds = pool_bounds(self.pool, self.target)
        y = normalize(self.target.vector, self.bounds)
        self._y = [float(v) for v in y]
        self._ny2 = sum(v * v for v in self._y)
        if self.mode == WORD:
            index = {t: i for i, t in enumerate(self.bounds.terms)}
            self._hi = [float(v) for v in self.bounds.hi]
            self._terms = [
                sorted((index[t], c) for t, c in term_vector(s.stems).items()) for s in self.pool
            ]
        else:
            self._lo = [float(v) for v in self.bounds.lo]
            self._span = [float(h - l) for l, h in zip(self.bounds.lo, self.bounds.hi)]
            self._stats = [TextStats.of(s.raw) for s in self.pool]

    @property
    def n(self) -> int:
        return len(self.pool)

    def __call__(self, indices: Sequence[int]) -> Fitness:
        self.evaluations += 1
        if not indices:
            return INVALID
        if self.mode == WORD:
            return self._word(indices)
        return self._feature(indices)

    def _word(self, indices: Sequence[int]) -> Fitness:
        acc: Dict[int, int] = {}
        for i in indices:
            for t, c in self._terms[i]:
                acc[t] = acc.get(t, 0) + c
        hi, y = self._hi, self._y
        dot = nx2 = 0.0
        for t in sorted(acc):
            x = acc[t] / hi[t]
            if x > 1.0:
                x = 1.0
            nx2 += x * x
            dot += x * y[t]
        return _py_cosine(dot, nx2, self._ny2)

    def _feature(self, indices: Sequence[int]) -> Fitness:
        st = TextStats.join([self._stats[i] for i in indices], [self.pool[i].raw for i in indices])
        feats = features_from_stats(st)
        dot = nx2 = 0.0
        for v, lo, span, y in zip(feats, self._lo, self._span, self._y):
            if span > 0.0:
                x = (v - lo) / span
                x = 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)
            else:
                x = 0.0
            nx2 += x * x
            dot += x * y
        return _py_cosine(dot, nx2, self._ny2)
