import itertools

import numpy as np
import pytest
import scipy.stats

from devsumm.stats import EXACT_BELOW, mann_whitney_u, midranks


def u_by_pairs(a, b):
    return sum((x > y) + 0.5 * (x == y) for x in a for y in b)


def exact_oracle(a, b):
    """Two-sided p by relabelling every split of the pooled sample."""
    pooled = list(a) + list(b)
    n1 = len(a)
    centre = n1 * len(b) / 2
    observed = abs(u_by_pairs(a, b) - centre)
    extreme = total = 0
    for idx in itertools.combinations(range(len(pooled)), n1):
        chosen = set(idx)
        aa = [pooled[i] for i in idx]
        bb = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        total += 1
        extreme += abs(u_by_pairs(aa, bb) - centre) >= observed - 1e-9
    return min(1.0, extreme / total)


def test_midranks():
    assert midranks([3, 1, 3, 2]) == [3.5, 1, 3.5, 2]


def test_complete_overlap():
    u, p = mann_whitney_u([1, 2, 3], [1, 2, 3])
    assert u == 4.5 and p == 1.0


def test_textbook_triple():
    assert mann_whitney_u([1, 2, 3], [10, 20, 30]) == (0.0, 0.1)


def test_single_identical_values():
    assert mann_whitney_u([5], [5])[1] == 1.0
    assert mann_whitney_u([2, 2, 2, 2, 2, 2, 2, 2, 2], [2] * 12) == (54.0, 1.0)


def test_empty_sample_rejected():
    with pytest.raises(ValueError):
        mann_whitney_u([], [1.0])


def _samples(rng, n1, n2):
    # a small value alphabet forces ties often
    if rng.random() < 0.5:
        return list(rng.integers(0, 5, n1).astype(float)), list(rng.integers(0, 5, n2).astype(float))
    return list(rng.normal(size=n1)), list(rng.normal(0.7, 1, size=n2))


@pytest.mark.parametrize("n1", range(1, 8))
def test_exact_matches_enumeration_up_to_7x7(n1):
    rng = np.random.default_rng(n1)
    for n2 in range(1, 8):
        for _ in range(3):
            a, b = _samples(rng, n1, n2)
            u, p = mann_whitney_u(a, b)
            assert u == u_by_pairs(a, b)
            assert p == pytest.approx(exact_oracle(a, b), abs=1e-12)


def test_exact_with_one_large_side():
    rng = np.random.default_rng(2)
    a, b = list(rng.normal(size=3)), list(rng.normal(size=9))
    assert mann_whitney_u(a, b)[1] == pytest.approx(exact_oracle(a, b), abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_normal_approximation_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    n1, n2 = int(rng.integers(EXACT_BELOW, 40)), int(rng.integers(EXACT_BELOW, 40))
    a, b = _samples(rng, n1, n2)
    u, p = mann_whitney_u(a, b)
    ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
    assert u == ref.statistic
    assert p == pytest.approx(ref.pvalue, rel=1e-9, abs=1e-15)


@pytest.mark.parametrize("seed", range(30))
def test_symmetry(seed):
    rng = np.random.default_rng(seed)
    a, b = _samples(rng, int(rng.integers(1, 15)), int(rng.integers(1, 15)))
    u_ab, p_ab = mann_whitney_u(a, b)
    u_ba, p_ba = mann_whitney_u(b, a)
    assert p_ab == p_ba
    assert u_ab + u_ba == len(a) * len(b)
