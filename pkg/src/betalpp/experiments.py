"""High-level studies: distributional-identity verification, tail-exponent
fits, the coupled law-of-iterated-logarithm trace, and the dyadic-region scan."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import UsageError
from .laguerre import LaguerreParams, lambda_max_batch
from .lpp import PassageRecord, passage_point_batch, point_to_line_batch
from .randkit import _u64, ks_two_sample
from .tilt import tail_probability

KS_LEVEL_CONST = 1.95  # asymptotic two-sample critical constant at level 0.001

# salt separating the two sides of an identity check (independent sample sets)
_SIDE_B_SALT = 0x9D2C5680


@dataclass(frozen=True)
class KsReport:
    ks_stat: float
    n_a: int
    n_b: int
    critical_001: float
    passed: bool


@dataclass(frozen=True)
class ExponentFit:
    grid: list  # (predictor point, log_p_hat, std_err) per grid entry
    slope: float | None  # least-squares slope on the stated predictor; None if refused
    per_point_ratio: list


@dataclass(frozen=True)
class LilTrace:
    records: list
    scaled_min: np.ndarray  # running min of z_n / (log log n)^(1/3), n >= start_n
    scaled_max: np.ndarray  # running max of z_n / (log log n)^(2/3)
    start_n: int


REFERENCE_LINES = {
    "liminf_conjectured": -(192.0 ** (1.0 / 3.0)),
    "liminf_point_to_line": -(96.0 ** (1.0 / 3.0)),
    "limsup": 3.0 ** (2.0 / 3.0),
}


@dataclass(frozen=True)
class DyadicScan:
    k: int
    eta: float
    threshold_const: float
    scales: list  # n_j for j = 0..k
    a_events: dict  # j -> bool for j in [ceil(k/2), k]
    tau: int | None
    b_tau: bool | None
    sandwich_lhs: float
    sandwich_rhs: float
    sandwich_ok: bool


def _ks_report(a: np.ndarray, b: np.ndarray) -> KsReport:
    stat = ks_two_sample(np.sort(a), np.sort(b))

    na, nb = len(a), len(b)
    crit = KS_LEVEL_CONST * math.sqrt((na + nb) / (na * nb))
    return KsReport(ks_stat=float(stat), n_a=na, n_b=nb, critical_001=crit, passed=stat < crit)


def verify_loe_identity(n: int, trials: int, seed: int) -> KsReport:
    """KS check of T*_n against half the largest point of LE^1_{2n, 2n-1}."""
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    if trials < 1000:
        raise UsageError(f"trials must be >= 1000, got {trials}")
    a = point_to_line_batch(seed, n, trials)
    p = LaguerreParams(m=2 * n, n=2 * n - 1, beta=1.0)
    b = 0.5 * lambda_max_batch(p, seed ^ _SIDE_B_SALT, trials)
    return _ks_report(a, b)


def verify_lue_identity(n: int, trials: int, seed: int) -> KsReport:
    """KS check of T_n against the largest point of LE^2_{n,n}."""
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    if trials < 1000:
        raise UsageError(f"trials must be >= 1000, got {trials}")
    a = passage_point_batch(seed, n, trials)
    p = LaguerreParams(m=n, n=n, beta=2.0)
    b = lambda_max_batch(p, seed ^ _SIDE_B_SALT, trials)
    return _ks_report(a, b)


def _fit_through_origin(u: np.ndarray, y: np.ndarray) -> float:
    return float(np.dot(u, y) / np.dot(u, u))


def fit_point_to_line_tail(
    n: int,
    x_grid,
    trials: int,
    method: str = "importance",
    seed: int = 0,
    b: float = 0.2,
) -> ExponentFit:
    """-log P(T*_n <= 4n - x n^(1/3)) over an x grid, routed through the
    LE^1_{2n,2n-1} identity with eps = x n^(-2/3) / 4; cubic fit against x^3."""
    x_grid = list(x_grid)
    for x in x_grid:
        if not 1.0 < x < n ** (2.0 / 3.0):
            raise UsageError(f"x must lie in (1, n^(2/3)), got {x}")
    p = LaguerreParams(m=2 * n, n=2 * n - 1, beta=1.0)
    grid = []
    ratios = []
    offset = 0
    for x in x_grid:
        eps = 0.25 * x * n ** (-2.0 / 3.0)
        est = tail_probability(p, eps, b=b, trials=trials, seed=seed, method=method, stream_offset=offset)
        offset += trials
        grid.append((float(x), est.log_p_hat, est.std_err))
        if est.log_p_hat is not None:
            ratios.append(-est.log_p_hat / (x ** 3 / 96.0))
        else:
            ratios.append(float("nan"))
    usable = [(x, lp) for (x, lp, _) in grid if lp is not None]
    if len(usable) < 2:
        return ExponentFit(grid=grid, slope=None, per_point_ratio=ratios)
    xs = np.array([x ** 3 for x, _ in usable])
    ys = np.array([-lp for _, lp in usable])
    return ExponentFit(grid=grid, slope=_fit_through_origin(xs, ys), per_point_ratio=ratios)


def fit_laguerre_lower_tail(
    p: LaguerreParams,
    eps_grid,
    trials: int,
    seed: int = 0,
    b: float = 0.2,
    method: str = "importance",
) -> ExponentFit:
    """-log p_hat against beta n^2 eps^3 (square case); slope is the fitted c.

    Grid points whose standard error dominates the estimate are flagged with a
    NaN ratio and excluded from the fit.
    """
    eps_grid = list(eps_grid)
    grid = []
    ratios = []
    offset = 0
    for eps in eps_grid:
        est = tail_probability(p, eps, b=b, trials=trials, seed=seed, method=method, stream_offset=offset)
        offset += trials
        pred = p.beta * p.n ** 2 * eps ** 3
        grid.append((float(pred), est.log_p_hat, est.std_err))
        noisy = est.p_hat <= 0 or est.std_err >= est.p_hat
        ratios.append(float("nan") if noisy else -est.log_p_hat / pred)
    usable = [(u, lp) for (u, lp, _), r in zip(grid, ratios) if not math.isnan(r)]
    if len(usable) < 2:
        return ExponentFit(grid=grid, slope=None, per_point_ratio=ratios)
    us = np.array([u for u, _ in usable])
    ys = np.array([-lp for _, lp in usable])
    return ExponentFit(grid=grid, slope=_fit_through_origin(us, ys), per_point_ratio=ratios)


def run_lil(seed: int, nmax: int, start_n: int = 16) -> LilTrace:
    """Coupled trace of Z_n with running scaled extremes; no asymptotic claim."""
    if not nmax >= start_n >= 16:
        raise UsageError(f"require nmax >= start_n >= 16, got nmax={nmax} start_n={start_n}")
    t = _k.passage_sequence_k(_u64(seed), int(nmax))
    ns = np.arange(1, nmax + 1)
    z = (t - 4.0 * ns) / np.cbrt(ns)
    tail_ns = ns[start_n - 1 :]
    ll = np.log(np.log(tail_ns))
    scaled_min = np.minimum.accumulate(z[start_n - 1 :] / ll ** (1.0 / 3.0))
    scaled_max = np.maximum.accumulate(z[start_n - 1 :] / ll ** (2.0 / 3.0))
    records = [PassageRecord(int(n), float(tn), float(zn)) for n, tn, zn in zip(ns, t, z)]
    return LilTrace(records=records, scaled_min=scaled_min, scaled_max=scaled_max, start_n=start_n)


def dyadic_scan(seed: int, k: int, eta: float = 1.0, threshold_const: float = 1.0) -> DyadicScan:
    """Scan disjoint regions between successive scale lines of one field.

    For j from k down to ceil(k/2), A_j tests whether the line-to-point weight
    from the line x+y=2 n_{j-1} to (n_j - 1, n_j - 1) falls below
    4 n_{j-1} - const * n_{j-1}^(1/3) (log log n_{j-1})^(1/3). tau is the
    largest such j; B_tau tests the excluded point-to-line weight at n_{tau-1}.
    The deterministic path-splitting inequality
    T_{n_j - 1} <= Ttilde*_{n_{j-1}} + T*_{(j)} is verified exactly on the scan.
    """
    if k < 4:
        raise UsageError(f"k must be >= 4, got {k}")
    if eta <= 0:
        raise UsageError(f"eta must be positive, got {eta}")
    if threshold_const <= 0:
        raise UsageError(f"threshold_const must be positive, got {threshold_const}")
    scales = [int(math.ceil((1.0 + eta) ** j)) for j in range(k + 1)]
    fseed = _u64(seed)
    j_min = (k + 1) // 2
    a_events = {}
    ltp = {}
    tau = None
    for j in range(j_min, k + 1):
        n_prev, n_cur = scales[j - 1], scales[j]
        # region must be nondegenerate and the loglog scaling defined
        if n_prev < 3 or n_prev >= n_cur:
            a_events[j] = False
            continue
        t_star_j = float(_k.line_to_point_k(fseed, n_prev, n_cur))
        ltp[j] = t_star_j
        bar = 4.0 * n_prev - threshold_const * n_prev ** (1.0 / 3.0) * math.log(math.log(n_prev)) ** (
            1.0 / 3.0
        )
        a_events[j] = t_star_j <= bar
        if a_events[j] and (tau is None or j > tau):
            tau = j
    b_tau = None
    j_check = tau if tau is not None else k
    n_prev, n_cur = scales[j_check - 1], scales[j_check]
    _, excl = _k.point_to_line_k(fseed, n_prev)
    if tau is not None:
        b_tau = excl < 4.0 * n_prev
    lhs = float(_k.passage_point_k(fseed, 1, 1, n_cur - 1, n_cur - 1))
    t_star = ltp.get(j_check)
    if t_star is None:
        t_star = float(_k.line_to_point_k(fseed, n_prev, n_cur))
    rhs = float(excl) + t_star
    return DyadicScan(
        k=k,
        eta=eta,
        threshold_const=threshold_const,
        scales=scales,
        a_events=a_events,
        tau=tau,
        b_tau=b_tau,
        sandwich_lhs=lhs,
        sandwich_rhs=rhs,
        sandwich_ok=lhs <= rhs + 1e-9,
    )
