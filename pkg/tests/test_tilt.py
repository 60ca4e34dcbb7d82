import math

import numpy as np
import pytest

from betalpp.errors import UsageError
from betalpp.laguerre import EntryChain, LaguerreParams
from betalpp.randkit import RngStream
from betalpp.tilt import (
    TiltConfig,
    choose_K,
    diagnostics_AB,
    log_weight_of_chain,
    lower_bound_branches,
    mean_weight,
    sample_tilted,
    tail_probability,
    theoretical_lower_bound,
    tilted_chain_batch,
)


def test_choose_k_narrow():
    p = LaguerreParams(m=10000, n=10000, beta=1.0)
    cfg = choose_K(p, 0.01, 0.2)
    assert cfg.case_tag == "narrow"
    assert cfg.K == 125  # ceil(0.01 * 10^4 / 0.8)


def test_choose_k_wide():
    p = LaguerreParams(m=10000, n=100, beta=1.0)
    cfg = choose_K(p, 0.1, 0.2)  # threshold 2b sqrt(n/m) = 0.04 < 0.1
    assert cfg.case_tag == "wide"
    assert cfg.K == 100


def test_choose_k_clamped():
    p = LaguerreParams(m=4, n=4, beta=1.0)
    cfg = choose_K(p, 0.9, 0.2)
    assert cfg.K == 4  # formula gives ceil(4.5) = 5, clamped to n
    assert cfg.case_tag == "wide"  # 0.9 > 2*0.2


def test_choose_k_validation():
    p = LaguerreParams(m=4, n=4, beta=1.0)
    with pytest.raises(UsageError):
        choose_K(p, 0.0, 0.2)
    with pytest.raises(UsageError):
        choose_K(p, 1.0, 0.2)
    with pytest.raises(UsageError):
        choose_K(p, 0.1, 0.3)


def test_log_weight_hand_value():
    # m=n=1, beta=2, K=1, eps=1/2, realized Y^2 = 1:
    # theta = 1, constant = log(1/2), so log_weight = 1 + log 0.5
    p = LaguerreParams(m=1, n=1, beta=2.0)
    cfg = TiltConfig(params=p, eps=0.5, b=0.2, K=1, case_tag="narrow")
    lw = log_weight_of_chain(cfg, EntryChain(x=np.array([1.0])))
    assert lw == pytest.approx(1.0 + math.log(0.5), rel=1e-12)
    assert math.exp(lw) == pytest.approx(1.3591, abs=5e-4)


def test_log_weight_vanishes_as_eps_to_zero():
    p = LaguerreParams(m=5, n=3, beta=1.0)
    chain = EntryChain(x=np.ones(5))
    for eps in (1e-3, 1e-6, 1e-9):
        cfg = TiltConfig(params=p, eps=eps, b=0.2, K=3, case_tag="wide")
        assert abs(log_weight_of_chain(cfg, chain)) < 10 * eps * (p.m + p.n) * p.n


def test_log_weight_matches_density_ratio():
    # recompute the weight as sum of log-density differences of the two gamma
    # laws of Y^2: Gam(r/2, beta/2) versus Gam(r/2, beta/(2(1-eps)))
    p = LaguerreParams(m=7, n=4, beta=2.5)
    cfg = choose_K(p, 0.2, 0.2)
    rng = RngStream(2020)
    for _ in range(20):
        s = sample_tilted(cfg, rng)
        direct = 0.0
        for k in range(1, cfg.K + 1):
            t = s.chain.x[2 * k - 2] ** 2
            a = p.beta * (p.m + 1 - k) / 2.0
            rate_f = p.beta / 2.0
            rate_g = p.beta / (2.0 * (1.0 - cfg.eps))
            log_f = a * math.log(rate_f) - rate_f * t
            log_g = a * math.log(rate_g) - rate_g * t
            direct += log_f - log_g  # shared t^{a-1}/Gamma(a) cancels
        assert s.log_weight == pytest.approx(direct, rel=1e-10)


def test_mean_weight_is_one():
    p = LaguerreParams(m=20, n=20, beta=1.0)
    mw, se = mean_weight(p, 0.2, 0.2, trials=100000, seed=2121)
    assert abs(mw - 1.0) <= 4.0 * se


def test_tilted_marginal_scaling():
    # tilted odd entries satisfy E[Y^2] = (1-eps) E[X^2] = (1-eps)(m+1-k)/1
    p = LaguerreParams(m=12, n=6, beta=1.0)
    cfg = choose_K(p, 0.3, 0.2)
    assert cfg.case_tag == "wide" and cfg.K == p.n
    chains, _ = tilted_chain_batch(cfg, 2222, 20000)
    ysq = np.mean(chains[:, 0::2] ** 2, axis=0)
    for k in range(1, p.n + 1):
        want = (1.0 - cfg.eps) * (p.m + 1 - k)
        assert ysq[k - 1] == pytest.approx(want, rel=0.05)


def test_n_equals_one_closed_form_both_methods():
    # lambda_1 = a^2 ~ Gam(1,1) at beta=2, so P(lambda <= 4(1-eps)) = 1 - e^{-4(1-eps)}
    p = LaguerreParams(m=1, n=1, beta=2.0)
    eps = 0.5
    exact = 1.0 - math.exp(-4.0 * (1.0 - eps))
    for method in ("naive", "importance"):
        est = tail_probability(p, eps, trials=100000, seed=2323, method=method)
        assert abs(est.p_hat - exact) <= 4.0 * est.std_err
        assert est.method == method
        assert est.log_p_hat == pytest.approx(math.log(est.p_hat))


def test_cross_method_agreement():
    p = LaguerreParams(m=16, n=16, beta=1.0)
    eps = 0.1
    a = tail_probability(p, eps, trials=60000, seed=2424, method="naive")
    b = tail_probability(p, eps, trials=60000, seed=2424, method="importance")
    assert abs(a.p_hat - b.p_hat) <= 4.0 * math.sqrt(a.std_err**2 + b.std_err**2)


def test_monotone_in_eps():
    p = LaguerreParams(m=12, n=12, beta=1.0)
    prev = None
    for eps in (0.05, 0.1, 0.18):
        est = tail_probability(p, eps, trials=40000, seed=2525, method="importance")
        if prev is not None:
            assert est.p_hat <= prev.p_hat + 4.0 * math.sqrt(est.std_err**2 + prev.std_err**2)
        prev = est


def test_zero_hits_reports_none_log():
    p = LaguerreParams(m=30, n=30, beta=2.0)
    est = tail_probability(p, 0.6, trials=200, seed=2626, method="naive")
    assert est.p_hat == 0.0
    assert est.log_p_hat is None


def test_tail_validation():
    p = LaguerreParams(m=4, n=4, beta=1.0)
    with pytest.raises(UsageError):
        tail_probability(p, 0.1, trials=0)
    with pytest.raises(UsageError):
        tail_probability(p, 1.2, trials=10)


def test_theoretical_lower_bound_square_case():
    p = LaguerreParams(m=100, n=100, beta=1.0)
    assert theoretical_lower_bound(p, 0.1, c=1.0 / 3.0, C0=1.0) == pytest.approx(-10.0 / 3.0)


def test_lower_bound_branches_reported_near_boundary():
    p = LaguerreParams(m=400, n=100, beta=1.0)
    wide, narrow = lower_bound_branches(p, 0.2, c=1.0 / 3.0, C0=1.0)
    assert wide == pytest.approx(-(1.0 / 3.0) * (0.2 * math.sqrt(400 * 100)) ** 2)
    assert narrow < 0.0


def test_estimate_respects_theoretical_bound():
    # the bound is a lower bound for log p once eps is large enough for the
    # cubic shape to dominate the fluctuation scale; use a generous constant
    p = LaguerreParams(m=50, n=50, beta=1.0)
    for eps in (0.2, 0.3):
        est = tail_probability(p, eps, trials=50000, seed=2727, method="importance")
        lb = theoretical_lower_bound(p, eps, c=2.0 / 3.0, C0=1.0)
        assert est.log_p_hat is not None and est.log_p_hat >= lb


def test_diagnostics_ab_b_frequency():
    p = LaguerreParams(m=60, n=60, beta=1.0)
    cfg = choose_K(p, 0.1, 0.2)
    rng = RngStream(2828)
    samples = [sample_tilted(cfg, rng) for _ in range(2000)]
    freq_a, freq_b = diagnostics_AB(cfg, samples)
    assert 0.0 <= freq_a <= 1.0
    assert freq_b >= 0.4  # reported target; comfortably met at this size
