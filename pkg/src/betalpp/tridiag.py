"""Symmetric tridiagonal matrices: Sturm counting, bisection for the top
eigenvalue, and a dense Jacobi-rotation solver used as a verification oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import NumericFailure, UsageError

_ORACLE_CAP = 64
_MAX_ITERS = 200


@dataclass(frozen=True)
class TridiagonalSym:
    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "diag", np.asarray(self.diag, dtype=float))
        object.__setattr__(self, "off", np.asarray(self.off, dtype=float))
        if self.diag.ndim != 1 or self.off.ndim != 1:
            raise UsageError("diag and off must be 1-d arrays")
        if len(self.off) != max(len(self.diag) - 1, 0):
            raise UsageError(
                f"off-diagonal length {len(self.off)} does not match dim {len(self.diag)}"
            )
        if len(self.diag) == 0:
            raise UsageError("matrix must have positive dimension")

    @property
    def dim(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        n = self.dim
        for i in range(n - 1):
            a[i, i + 1] = a[i + 1, i] = self.off[i]
        return a


@dataclass(frozen=True)
class EigenResult:
    value: float
    iterations: int
    bracket_width: float


def gershgorin_radius(m: TridiagonalSym) -> float:
    return float(_k.gershgorin_radius_k(m.diag, m.off))


def sturm_count(m: TridiagonalSym, x: float) -> int:
    """Number of eigenvalues strictly below x."""
    return int(_k.sturm_count_k(m.diag, m.off, float(x)))


def largest_eigenvalue(m: TridiagonalSym, tol: float | None = None) -> EigenResult:
    """Top eigenvalue by bisection on the Sturm count, bracketed by Gershgorin."""
    radius = gershgorin_radius(m)
    if tol is None:
        tol = 1e-12 * radius if radius > 0 else 1e-12
    if not tol > 0:
        raise UsageError(f"tolerance must be positive, got {tol}")
    value, iters, width, ok = _k.bisect_top_k(m.diag, m.off, float(tol), _MAX_ITERS)
    if not ok:
        raise NumericFailure(
            f"bisection did not converge in {_MAX_ITERS} iterations "
            f"(bracket width {width:.3e}, tol {tol:.3e})",
            bracket=(value - 0.5 * width, value + 0.5 * width),
        )
    return EigenResult(value=float(value), iterations=int(iters), bracket_width=float(width))


def dense_spectrum(m: TridiagonalSym) -> np.ndarray:
    """All eigenvalues, ascending, via cyclic Jacobi rotations. Oracle scale only."""
    n = m.dim
    if n > _ORACLE_CAP:
        raise UsageError(f"dense oracle capped at dim {_ORACLE_CAP}, got {n}")
    a = m.to_dense()
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n)
    target = 1e-12 * scale
    for _ in range(100):
        off_norm = np.sqrt(2.0 * sum(a[p, q] ** 2 for p in range(n) for q in range(p + 1, n)))
        if off_norm <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    else:
        raise NumericFailure("Jacobi sweeps did not reach off-diagonal target")
    return np.sort(np.diag(a))
