"""Reproducible variate generation, the lattice weight field, and the special
functions (chi mean, regularized incomplete gamma, KS statistic) used by the
rest of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from .errors import UsageError

_MASK64 = (1 << 64) - 1


def _u64(value: int) -> np.uint64:
    return np.uint64(value & _MASK64)


@dataclass
class RngStream:
    """Counter-based uniform stream keyed by (master_seed, stream_id).

    Replaying a stream from the same counter reproduces outputs bit-exactly;
    distinct stream_ids give unrelated sequences, so trials can be assigned
    disjoint ids and run in any order.
    """

    master_seed: int
    stream_id: int = 0
    counter: int = 0
    _base: np.uint64 = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._base = np.uint64(_k.stream_base(_u64(self.master_seed), _u64(self.stream_id)))

    def next_u64(self) -> int:
        v = _k.raw_u64(self._base, _u64(self.counter))
        self.counter += 1
        return int(v)

    def uniform(self) -> float:
        v, k = _k.next_uniform(self._base, _u64(self.counter))
        self.counter = int(k)
        return v

    def normal(self) -> float:
        v, k = _k.next_normal(self._base, _u64(self.counter))
        self.counter = int(k)
        return v


@dataclass(frozen=True)
class WeightField:
    """Seed-keyed i.i.d. Exp(1) environment on the positive lattice.

    weight(x, y) is a pure function of (seed, x, y): every experiment sharing
    the seed sees the same coupled environment, in any query order.
    """

    seed: int

    def weight(self, x: int, y: int) -> float:
        return field_weight(self, x, y)


@dataclass(frozen=True)
class ChiLaw:
    r: float

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise UsageError(f"chi parameter must be positive, got {self.r}")


def sample_gamma(shape: float, rate: float, rng: RngStream) -> float:
    """One draw of Gam(shape, rate), density proportional to x^(shape-1) e^(-rate x)."""
    if not (shape > 0 and rate > 0):
        raise UsageError(f"gamma parameters must be positive, got shape={shape} rate={rate}")
    v, k = _k.next_gamma(rng._base, _u64(rng.counter), float(shape), float(rate))
    rng.counter = int(k)
    return v


def sample_chi_sq(law: ChiLaw, rng: RngStream) -> float:
    v, k = _k.next_chi_sq(rng._base, _u64(rng.counter), float(law.r))
    rng.counter = int(k)
    return v


def sample_chi(law: ChiLaw, rng: RngStream) -> float:
    v, k = _k.next_chi(rng._base, _u64(rng.counter), float(law.r))
    rng.counter = int(k)
    return v


def chi_mean(r: float) -> float:
    """E[chi_r] = sqrt(2) Gamma(r/2 + 1/2) / Gamma(r/2)."""
    if not r > 0:
        raise UsageError(f"chi parameter must be positive, got {r}")
    return math.exp(0.5 * math.log(2.0) + math.lgamma(0.5 * (r + 1.0)) - math.lgamma(0.5 * r))


def field_weight(field: WeightField, x: int, y: int) -> float:
    if x < 1 or y < 1:
        raise UsageError(f"field coordinates must be >= 1, got ({x}, {y})")
    return _k.field_weight_k(_u64(field.seed), int(x), int(y))


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x) = P(Gam(a,1) <= x); series for x < a+1, continued fraction above."""
    if not a > 0:
        raise UsageError(f"shape must be positive, got {a}")
    if x < 0:
        raise UsageError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    lg = math.lgamma(a)
    # log of the common prefactor x^a e^-x / Gamma(a)
    lpref = a * math.log(x) - x - lg
    if x < a + 1.0:
        # series: P = pref * sum_n x^n / (a (a+1)...(a+n))
        term = 1.0 / a
        total = term
        ap = a
        for _ in range(10000):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        return min(1.0, math.exp(lpref) * total)
    # modified Lentz continued fraction for Q(a, x); P = 1 - Q
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return max(0.0, 1.0 - math.exp(lpref) * h)


def ks_two_sample(a, b) -> float:
    """Sup-distance between the empirical CDFs of two sorted samples."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise UsageError("ks_two_sample requires nonempty samples")
    i = j = 0
    d = 0.0
    while i < na and j < nb:
        v = min(a[i], b[j])
        while i < na and a[i] == v:
            i += 1
        while j < nb and b[j] == v:
            j += 1
        d = max(d, abs(i / na - j / nb))
    return max(d, abs(1.0 - j / nb), abs(i / na - 1.0))


def gamma_batch(master_seed: int, stream_id: int, ndraws: int, shape: float, rate: float) -> np.ndarray:
    """ndraws of Gam(shape, rate) from one stream (fast path for the test suite)."""
    if not (shape > 0 and rate > 0):
        raise UsageError("gamma parameters must be positive")
    return _k.batch_gamma(_u64(master_seed), _u64(stream_id), int(ndraws), float(shape), float(rate))


def chi_sq_batch(master_seed: int, stream_id: int, ndraws: int, r: float) -> np.ndarray:
    return _k.batch_chi_sq(_u64(master_seed), _u64(stream_id), int(ndraws), float(r))


def chi_batch(master_seed: int, stream_id: int, ndraws: int, r: float) -> np.ndarray:
    return _k.batch_chi(_u64(master_seed), _u64(stream_id), int(ndraws), float(r))
