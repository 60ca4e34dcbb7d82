import itertools
import math

import numpy as np
import pytest

from betalpp.errors import UsageError
from betalpp.lpp import (
    LatticePoint,
    line_to_point,
    line_to_point_batch,
    passage_point,
    passage_point_batch,
    passage_sequence,
    point_to_line,
    point_to_line_batch,
    point_to_line_excluded,
)
from betalpp.randkit import WeightField, ks_two_sample


def _paths(u, v):
    """All oriented up/right paths from u to v as vertex lists."""
    dx, dy = v[0] - u[0], v[1] - u[1]
    for steps in itertools.combinations(range(dx + dy), dx):
        p = [u]
        x, y = u
        for i in range(dx + dy):
            if i in steps:
                x += 1
            else:
                y += 1
            p.append((x, y))
        yield p


def _brute_point(field, u, v):
    return max(sum(field.weight(*q) for q in p) for p in _paths(u, v))


def test_two_by_two_hand_recursion():
    # only two paths exist: T_2 = w(1,1) + max(w(1,2), w(2,1)) + w(2,2)
    f = WeightField(seed=30)
    want = f.weight(1, 1) + max(f.weight(1, 2), f.weight(2, 1)) + f.weight(2, 2)
    assert passage_point(f, LatticePoint(1, 1), LatticePoint(2, 2)) == pytest.approx(want, rel=1e-15)


def test_passage_point_matches_enumeration():
    f = WeightField(seed=31)
    for n in (1, 2, 3, 4, 5, 6):
        got = passage_point(f, LatticePoint(1, 1), LatticePoint(n, n))
        assert got == pytest.approx(_brute_point(f, (1, 1), (n, n)), rel=1e-12)
    # off-diagonal rectangle
    got = passage_point(f, LatticePoint(2, 3), LatticePoint(6, 5))
    assert got == pytest.approx(_brute_point(f, (2, 3), (6, 5)), rel=1e-12)


def test_passage_point_requires_ordering():
    f = WeightField(seed=32)
    with pytest.raises(UsageError):
        passage_point(f, LatticePoint(3, 3), LatticePoint(2, 5))
    with pytest.raises(UsageError):
        LatticePoint(0, 1)


def test_single_vertex_path():
    f = WeightField(seed=33)
    u = LatticePoint(4, 7)
    assert passage_point(f, u, u) == pytest.approx(f.weight(4, 7))


def test_point_to_line_matches_enumeration():
    f = WeightField(seed=34)
    for n in (2, 3, 4):
        ends = [(x, 2 * n - x) for x in range(max(1, 2 * n - 20), 2 * n)]
        incl = max(_brute_point(f, (1, 1), e) for e in ends if e[1] >= 1)
        assert point_to_line(f, n) == pytest.approx(incl, rel=1e-12)
        excl = max(
            max(
                sum(f.weight(*q) for q in p[:-1])
                for p in _paths((1, 1), e)
            )
            for e in ends
            if e[1] >= 1
        )
        assert point_to_line_excluded(f, n) == pytest.approx(excl, rel=1e-12)


def test_point_to_line_hand_values():
    # n=2: the line x+y=4 is reached by exactly four paths; spell them out
    f = WeightField(seed=39)
    w = f.weight
    full = [
        w(1, 1) + w(1, 2) + w(1, 3),
        w(1, 1) + w(1, 2) + w(2, 2),
        w(1, 1) + w(2, 1) + w(2, 2),
        w(1, 1) + w(2, 1) + w(3, 1),
    ]
    assert point_to_line(f, 2) == pytest.approx(max(full), rel=1e-15)
    prefixes = [w(1, 1) + w(1, 2), w(1, 1) + w(2, 1)]
    assert point_to_line_excluded(f, 2) == pytest.approx(max(prefixes), rel=1e-15)


def test_line_to_point_matches_enumeration():
    # start vertices on the line may have nonpositive coordinates, so the
    # oracle reads raw hashed weights instead of the quadrant-guarded field
    from betalpp import _kernels as _k
    from betalpp.randkit import _u64

    f = WeightField(seed=35)

    class Raw:
        def weight(self, x, y):
            return float(_k.field_weight_k(_u64(f.seed), x, y))

    raw = Raw()
    for j_lo, j_hi in ((2, 5), (1, 5), (3, 5)):
        t = j_hi - 1
        starts = [(x, 2 * j_lo - x) for x in range(2 * j_lo - t, t + 1)]
        brute = max(_brute_point(raw, s, (t, t)) for s in starts)
        assert line_to_point(f, j_lo, j_hi) == pytest.approx(brute, rel=1e-12)


def test_line_to_point_validation():
    f = WeightField(seed=36)
    with pytest.raises(UsageError):
        line_to_point(f, 3, 3)
    with pytest.raises(UsageError):
        line_to_point(f, 0, 3)


def test_sequence_couples_with_point():
    f = WeightField(seed=37)
    recs = passage_sequence(f, 12)
    assert len(recs) == 12
    for n in (1, 3, 7, 12):
        direct = passage_point(f, LatticePoint(1, 1), LatticePoint(n, n))
        assert recs[n - 1].t_n == pytest.approx(direct, rel=1e-12)
        assert recs[n - 1].z_n == pytest.approx((direct - 4.0 * n) / n ** (1.0 / 3.0))
    # monotone coupling: T_n increasing in n on one field
    ts = [r.t_n for r in recs]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_deterministic_splitting_inequality():
    # sup_v T_{v,(n,n)} <= T_n <= sup_v T_{1,v}(excluded) + sup_v T_{v,(n,n)},
    # splitting at the line x+y=2r: weights are nonnegative
    f = WeightField(seed=38)
    n, r = 6, 3
    t_n = passage_point(f, LatticePoint(1, 1), LatticePoint(n - 1, n - 1))
    left = point_to_line_excluded(f, r)
    right = line_to_point(f, r, n)
    assert right <= t_n + 1e-9
    assert t_n <= left + right + 1e-9


def test_line_to_point_distribution_matches_span():
    # by reflection the line-to-point law over span j_hi - j_lo matches the
    # point-to-line law of the same span (on independent fields)
    span = 8
    a = line_to_point_batch(41, 4, 4 + span, 4000)
    b = point_to_line_batch(42, span, 4000)
    crit = 1.95 * math.sqrt((len(a) + len(b)) / (len(a) * len(b)))
    assert ks_two_sample(np.sort(a), np.sort(b)) < crit


def test_batches_match_scalar_ops():
    vals = point_to_line_batch(43, 5, 6)
    f3 = point_to_line(WeightField(seed=_stream_seed(43, 3)), 5)
    assert vals[3] == pytest.approx(f3, rel=1e-12)
    vals = passage_point_batch(44, 5, 6)
    f2 = passage_point(WeightField(seed=_stream_seed(44, 2)), LatticePoint(1, 1), LatticePoint(5, 5))
    assert vals[2] == pytest.approx(f2, rel=1e-12)


def _stream_seed(master, sid):
    from betalpp import _kernels as _k
    from betalpp.randkit import _u64

    return int(_k.stream_base(_u64(master), _u64(sid)))
