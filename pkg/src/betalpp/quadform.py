"""Quadratic forms attached to the linearized chain: the shifted form Q, the
idealized form Q_b, matrix realizations of both, and the diagonal-dominance
check behind the comparison Q <= Q_b."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .laguerre import EntryChain, LaguerreParams, chain_mean
from .tridiag import TridiagonalSym


@dataclass(frozen=True)
class UnitVector:
    w: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float))
        if abs(float(np.dot(self.w, self.w)) - 1.0) > 1e-12:
            raise UsageError("vector is not normalized to 1e-12")


@dataclass(frozen=True)
class QbSpec:
    params: LaguerreParams
    b: float
    centered_entries: np.ndarray  # Z_1..Z_{2n-1} (e.g. X_k - E[X_k])

    def __post_init__(self) -> None:
        object.__setattr__(self, "centered_entries", np.asarray(self.centered_entries, dtype=float))
        if not 0 < self.b < 0.25:
            raise UsageError(f"b must lie in (0, 1/4), got {self.b}")
        if len(self.centered_entries) != 2 * self.params.n - 1:
            raise UsageError("centered_entries must have length 2n-1")


def centered_chain(chain: EntryChain, p: LaguerreParams) -> np.ndarray:
    """X_k - E[X_k] using the exact chi mean."""
    means = np.array([chain_mean(p, k) for k in range(1, 2 * p.n)])
    return chain.x - means


def evaluate_Q(chain: EntryChain, p: LaguerreParams, w: UnitVector) -> float:
    """2 sum X_k w_k w_{k+1} - (sqrt m + sqrt n) sum w_k^2."""
    v = w.w
    if len(v) != 2 * p.n:
        raise UsageError(f"vector length {len(v)} != 2n = {2 * p.n}")
    cross = 2.0 * float(np.dot(chain.x, v[:-1] * v[1:]))
    return cross - (math.sqrt(p.m) + math.sqrt(p.n)) * float(np.dot(v, v))


def build_Q_matrix(chain: EntryChain, p: LaguerreParams) -> TridiagonalSym:
    """Matrix of Q: diagonal -(sqrt m + sqrt n), off-diagonal the chain.
    Its top eigenvalue is s_n - (sqrt m + sqrt n)."""
    shift = math.sqrt(p.m) + math.sqrt(p.n)
    return TridiagonalSym(diag=np.full(2 * p.n, -shift), off=chain.x)


def evaluate_Qb(spec: QbSpec, w: UnitVector) -> float:
    """Direct evaluation of the idealized form with w_0 = w_{2n+1} = 0."""
    p = spec.params
    v = w.w
    if len(v) != 2 * p.n:
        raise UsageError(f"vector length {len(v)} != 2n = {2 * p.n}")
    n = p.n
    b = spec.b
    sm = math.sqrt(p.m)
    sn = math.sqrt(p.n)
    wp = np.concatenate(([0.0], v, [0.0]))  # wp[k] = w_k for k = 0..2n+1
    total = 2.0 * float(np.dot(spec.centered_entries, v[:-1] * v[1:]))
    # n-pairs (w_{2k} - w_{2k+1})^2 for k = 0..n
    idx = 2 * np.arange(n + 1)
    total -= b * sn * float(np.sum((wp[idx] - wp[idx + 1]) ** 2))
    # m-pairs (w_{2k-1} - w_{2k})^2 for k = 1..n
    idx = 2 * np.arange(1, n + 1) - 1
    total -= b * sm * float(np.sum((wp[idx] - wp[idx + 1]) ** 2))
    # index penalty
    ks = np.arange(1, 2 * n + 1)
    total -= (b / sn) * float(np.dot(ks, v * v))
    return total


def _qb_diag_off(p: LaguerreParams, b: float, entries: np.ndarray):
    """Tridiagonal realization of Q_b: expanding the pair squares puts every
    index in exactly one sqrt(m)-pair and one sqrt(n)-pair."""
    n = p.n
    sm = math.sqrt(p.m)
    sn = math.sqrt(p.n)
    ks = np.arange(1, 2 * n + 1)
    diag = -b * (sm + sn) - b * ks / sn
    off = entries.copy()
    off[0::2] += b * sm  # odd chain index: m-pair cross term
    off[1::2] += b * sn  # even chain index: n-pair cross term
    return diag, off


def build_Qb_matrix(spec: QbSpec) -> TridiagonalSym:
    diag, off = _qb_diag_off(spec.params, spec.b, spec.centered_entries)
    return TridiagonalSym(diag=diag, off=off)


def check_domination(chain: EntryChain, p: LaguerreParams, b: float):
    """Row-wise diagonal dominance of V = A_Qb - A_Q (with exact chi means).

    Returns (True, None) when every row satisfies V_kk >= |V_{k,k-1}| + |V_{k,k+1}|,
    else (False, first violating 1-based row index). Dominance implies Q <= Q_b.
    """
    if not 0 < b < 0.25:
        raise UsageError(f"b must lie in (0, 1/4), got {b}")
    if chain.n != p.n:
        raise UsageError("chain size does not match params")
    n = p.n
    sm = math.sqrt(p.m)
    sn = math.sqrt(p.n)
    ks = np.arange(1, 2 * n + 1)
    vdiag = (1.0 - b) * (sm + sn) - b * ks / sn
    means = np.array([chain_mean(p, k) for k in range(1, 2 * n)])
    voff = -means
    voff[0::2] += b * sm
    voff[1::2] += b * sn
    voff_abs = np.abs(voff)
    row_sum = np.zeros(2 * n)
    row_sum[:-1] += voff_abs
    row_sum[1:] += voff_abs
    bad = np.nonzero(vdiag < row_sum)[0]
    if len(bad):
        return False, int(bad[0]) + 1
    return True, None
