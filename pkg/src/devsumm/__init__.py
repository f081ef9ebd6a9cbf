"""Human-like weekly summaries of heterogeneous software-development artefacts.

Sentences from issues, pull requests, commits, wiki pages and the like are
selected so that the resulting summary is as close as possible, in cosine
similarity, to a target summary represented either by stem counts or by a
26-dimensional readability feature vector.
"""

__version__ = "0.1.0"

from .corpus import (  # noqa: E402
    ArtefactType,
    Corpus,
    RELEVANT_TYPES,
    ScenarioSpec,
    TimeWindow,
    load_corpus,
    load_gold,
    window_pool,
)
from .features import extract_features, term_vector  # noqa: E402
from .optim import (  # noqa: E402
    SearchBudget,
    brute_force,
    greedy,
    random_search,
    rls_restricted,
    rls_unrestricted,
    rls_unrestricted_subset,
)
from .similarity import Objective, TargetProfile, cosine, fitness  # noqa: E402
from .stats import mann_whitney_u  # noqa: E402

__all__ = [
    "ArtefactType",
    "Corpus",
    "RELEVANT_TYPES",
    "ScenarioSpec",
    "TimeWindow",
    "load_corpus",
    "load_gold",
    "window_pool",
    "extract_features",
    "term_vector",
    "SearchBudget",
    "brute_force",
    "greedy",
    "random_search",
    "rls_restricted",
    "rls_unrestricted",
    "rls_unrestricted_subset",
    "Objective",
    "TargetProfile",
    "cosine",
    "fitness",
    "mann_whitney_u",
]
