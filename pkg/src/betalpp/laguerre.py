"""The beta-Laguerre bidiagonal model, its tridiagonal linearization, largest
eigenvalue sampling, and the Gershgorin large-deviation product bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import NumericFailure, UsageError
from .randkit import RngStream, _u64, regularized_lower_gamma
from .tridiag import TridiagonalSym

_MAX_ITERS = 200


@dataclass(frozen=True)
class LaguerreParams:
    m: int
    n: int
    beta: float

    def __post_init__(self) -> None:
        if not (self.m >= self.n >= 1):
            raise UsageError(f"require m >= n >= 1, got m={self.m} n={self.n}")
        if not self.beta >= 1:
            raise UsageError(f"require beta >= 1, got {self.beta}")

    @property
    def edge(self) -> float:
        """(sqrt(m) + sqrt(n))^2, the deterministic top-edge scale."""
        return (math.sqrt(self.m) + math.sqrt(self.n)) ** 2


@dataclass(frozen=True)
class BidiagonalModel:
    a: np.ndarray  # diagonal entries a_1..a_n
    b: np.ndarray  # sub-diagonal entries b_1..b_{n-1}

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if len(self.b) != len(self.a) - 1:
            raise UsageError("b must have length n-1")
        if np.any(self.a <= 0) or np.any(self.b <= 0):
            raise UsageError("bidiagonal entries must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.a)

    def to_dense(self) -> np.ndarray:
        n = self.n
        mat = np.diag(self.a)
        for i in range(n - 1):
            mat[i + 1, i] = self.b[i]
        return mat


@dataclass(frozen=True)
class EntryChain:
    """Interleaved chain X_1..X_{2n-1} with X_{2k-1}=a_k, X_{2k}=b_k."""

    x: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if len(self.x) % 2 == 0:
            raise UsageError("chain length must be odd (2n-1)")

    @property
    def n(self) -> int:
        return (len(self.x) + 1) // 2


def interleave(bm: BidiagonalModel) -> EntryChain:
    n = bm.n
    x = np.empty(2 * n - 1)
    x[0::2] = bm.a
    x[1::2] = bm.b
    return EntryChain(x)


def chain_mean(p: LaguerreParams, k: int) -> float:
    """E[X_k] (1-based chain index) from the exact chi mean."""
    from .randkit import chi_mean

    if k % 2 == 1:
        j = (k + 1) // 2
        return chi_mean(p.beta * (p.m + 1 - j)) / math.sqrt(p.beta)
    j = k // 2
    return chi_mean(p.beta * (p.n - j)) / math.sqrt(p.beta)


def sample_bidiagonal(p: LaguerreParams, rng: RngStream) -> BidiagonalModel:
    x, k = _k.sample_chain(p.m, p.n, float(p.beta), rng._base, _u64(rng.counter))
    rng.counter = int(k)
    return BidiagonalModel(a=x[0::2], b=x[1::2])


def linearize(bm: BidiagonalModel) -> TridiagonalSym:
    """Zero-diagonal tridiagonal of dim 2n whose spectrum is {+-s_i}."""
    chain = interleave(bm)
    return TridiagonalSym(diag=np.zeros(2 * bm.n), off=chain.x)


def sample_lambda_max(p: LaguerreParams, rng: RngStream, tol: float | None = None) -> float:
    """One draw of the largest point of LE^beta_{m,n}, via the linearized chain."""
    x, k = _k.sample_chain(p.m, p.n, float(p.beta), rng._base, _u64(rng.counter))
    rng.counter = int(k)
    rel_tol = 1e-12 if tol is None else tol
    s, _, width, ok = _k.top_eig_zero_diag(x, rel_tol, _MAX_ITERS)
    if not ok:
        raise NumericFailure(f"eigensolver failed (bracket width {width:.3e})")
    return float(s * s)


def lambda_max_batch(
    p: LaguerreParams, master_seed: int, trials: int, stream_offset: int = 0
) -> np.ndarray:
    """trials draws of lambda_n on disjoint streams (stream ids offset..offset+trials-1)."""
    lam, ok = _k.batch_lambda_max(
        p.m, p.n, float(p.beta), _u64(master_seed), _u64(stream_offset), int(trials), 1e-12, _MAX_ITERS
    )
    if not ok.all():
        raise NumericFailure("eigensolver failed on some trials")
    return lam


def gershgorin_bound(chain: EntryChain) -> float:
    """max adjacent-pair sum of the chain with zero padding: bounds s_n above."""
    x = chain.x
    padded = np.concatenate(([0.0], x, [0.0]))
    return float(np.max(padded[:-1] + padded[1:]))


def ld_lower_bound_product(p: LaguerreParams, eps: float) -> float:
    """Certified log-lower-bound for log P(s_n <= 2 sqrt(n) (1-eps)):
    sum_k log P(X_k <= (1-eps) sqrt(n)), factors via the incomplete gamma."""
    if not 0 < eps < 1:
        raise UsageError(f"eps must lie in (0,1), got {eps}")
    c = (1.0 - eps) * math.sqrt(p.n)
    arg = 0.5 * p.beta * c * c
    total = 0.0
    for k in range(1, 2 * p.n):
        if k % 2 == 1:
            shape = 0.5 * p.beta * (p.m + 1 - (k + 1) // 2)
        else:
            shape = 0.5 * p.beta * (p.n - k // 2)
        # clamp against underflow of extreme factors; keeps the bound valid
        total += math.log(max(regularized_lower_gamma(shape, arg), 1e-320))
    return total
