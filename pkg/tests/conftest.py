import math

import numpy as np
import pytest


def ks_one_sample(sample, cdf) -> float:
    """Sup distance between the empirical CDF of `sample` and a given CDF."""
    xs = np.sort(np.asarray(sample, dtype=float))
    n = len(xs)
    f = np.array([cdf(x) for x in xs])
    lo = np.max(np.abs(f - np.arange(0, n) / n))
    hi = np.max(np.abs(f - np.arange(1, n + 1) / n))
    return float(max(lo, hi))


def ks_critical_one_sample(n: int, level: float = 0.001) -> float:
    # asymptotic Kolmogorov quantile: level = 2 sum (-1)^{k-1} exp(-2 k^2 c^2)
    c = math.sqrt(-0.5 * math.log(level / 2.0))
    return c / math.sqrt(n)


@pytest.fixture
def master_seed():
    return 0xC0FFEE
