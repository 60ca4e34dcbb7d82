"""Last passage percolation dynamic programs over the deterministic weight
field: point-to-point, coupled sequences, point-to-line (with and without the
final-vertex weight), and line-to-point passage times."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import UsageError
from .randkit import WeightField, _u64


@dataclass(frozen=True)
class LatticePoint:
    x: int
    y: int

    def __post_init__(self) -> None:
        if self.x < 1 or self.y < 1:
            raise UsageError(f"lattice coordinates must be >= 1, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class PassageRecord:
    n: int
    t_n: float
    z_n: float  # (t_n - 4n) / n^(1/3)


def passage_point(field: WeightField, u: LatticePoint, v: LatticePoint) -> float:
    """T_{u,v}: max over up/right paths of the path weight, both endpoints included."""
    if not (u.x <= v.x and u.y <= v.y):
        raise UsageError(f"require u <= v coordinatewise, got u=({u.x},{u.y}) v=({v.x},{v.y})")
    return float(_k.passage_point_k(_u64(field.seed), u.x, u.y, v.x, v.y))


def passage_sequence(field: WeightField, nmax: int) -> list[PassageRecord]:
    """Coupled T_n for n = 1..nmax from a single anti-diagonal sweep."""
    if nmax < 1:
        raise UsageError(f"nmax must be >= 1, got {nmax}")
    t = _k.passage_sequence_k(_u64(field.seed), int(nmax))
    ns = np.arange(1, nmax + 1)
    z = (t - 4.0 * ns) / np.cbrt(ns)
    return [PassageRecord(int(n), float(tn), float(zn)) for n, tn, zn in zip(ns, t, z)]


def point_to_line(field: WeightField, n: int) -> float:
    """T*_n: best passage from (1,1) to the anti-diagonal x+y=2n, endpoint included."""
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    incl, _ = _k.point_to_line_k(_u64(field.seed), int(n))
    return float(incl)


def point_to_line_excluded(field: WeightField, n: int) -> float:
    """Ttilde*_n: as point_to_line but with the final-vertex weight excluded."""
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    _, excl = _k.point_to_line_k(_u64(field.seed), int(n))
    return float(excl)


def line_to_point(field: WeightField, j_lo: int, j_hi: int) -> float:
    """Best passage from any vertex of the line x+y=2*j_lo to (j_hi-1, j_hi-1).

    By transpose symmetry of the recursion this is distributed as
    point_to_line of size j_hi - j_lo on a fresh field.
    """
    if not 1 <= j_lo < j_hi:
        raise UsageError(f"require 1 <= j_lo < j_hi, got j_lo={j_lo} j_hi={j_hi}")
    return float(_k.line_to_point_k(_u64(field.seed), int(j_lo), int(j_hi)))


def point_to_line_batch(master_seed: int, n: int, trials: int, stream_offset: int = 0) -> np.ndarray:
    """T*_n over independent seed-derived fields, one per stream id."""
    return _k.batch_point_to_line(_u64(master_seed), _u64(stream_offset), int(trials), int(n))


def passage_point_batch(master_seed: int, n: int, trials: int, stream_offset: int = 0) -> np.ndarray:
    """T_n over independent seed-derived fields."""
    return _k.batch_passage_point(_u64(master_seed), _u64(stream_offset), int(trials), int(n))


def line_to_point_batch(
    master_seed: int, j_lo: int, j_hi: int, trials: int, stream_offset: int = 0
) -> np.ndarray:
    return _k.batch_line_to_point(_u64(master_seed), _u64(stream_offset), int(trials), int(j_lo), int(j_hi))
