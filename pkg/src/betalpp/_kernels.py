"""Numba kernels: counter-based RNG, variate generation, Sturm/bisection, LPP DP.

Everything here is deterministic given explicit (seed, stream, counter)
arguments, so trial-parallel loops are independent of scheduling order.
All 64-bit arithmetic is done on np.uint64 to keep results bit-identical
across platforms.
"""

import math

import numpy as np
from numba import njit, prange

U64 = np.uint64

GOLD = U64(0x9E3779B97F4A7C15)
MIX1 = U64(0xBF58476D1CE4E5B9)
MIX2 = U64(0x94D049BB133111EB)
STREAM_SALT = U64(0x5851F42D4C957F2D)
TWO53_INV = 1.0 / 9007199254740992.0  # 2^-53
TWO_PI = 6.283185307179586476925287
NEG = -1.0e308


# ---------------------------------------------------------------------------
# counter-based uniform source (SplitMix64-style avalanche finalizer)
# ---------------------------------------------------------------------------

@njit(cache=True)
def finalize64(z):
    z = (z ^ (z >> U64(30))) * MIX1
    z = (z ^ (z >> U64(27))) * MIX2
    return z ^ (z >> U64(31))


@njit(cache=True)
def stream_base(master_seed, stream_id):
    return finalize64(master_seed ^ finalize64(stream_id * GOLD ^ STREAM_SALT))


@njit(cache=True)
def raw_u64(base, counter):
    return finalize64(base + (counter + U64(1)) * GOLD)


@njit(cache=True)
def u01(base, counter):
    # top 53 bits opened into (0,1); the half-step keeps 0 and 1 unreachable
    h = raw_u64(base, counter) >> U64(11)
    return (np.float64(h) + 0.5) * TWO53_INV


@njit(cache=True)
def next_uniform(base, k):
    return u01(base, k), k + U64(1)


@njit(cache=True)
def next_normal(base, k):
    u1, k = next_uniform(base, k)
    u2, k = next_uniform(base, k)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2), k


# ---------------------------------------------------------------------------
# variates
# ---------------------------------------------------------------------------

@njit(cache=True)
def next_gamma_std(base, k, alpha):
    """Gam(alpha, 1) via the Marsaglia-Tsang squeeze; u^(1/alpha) boost below 1."""
    boost = 1.0
    a = alpha
    if a < 1.0:
        u, k = next_uniform(base, k)
        boost = u ** (1.0 / a)
        a += 1.0
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x, k = next_normal(base, k)
        t = 1.0 + c * x
        if t <= 0.0:
            continue
        v = t * t * t
        u, k = next_uniform(base, k)
        xx = x * x
        if u < 1.0 - 0.0331 * xx * xx:
            return boost * d * v, k
        if math.log(u) < 0.5 * xx + d * (1.0 - v + math.log(v)):
            return boost * d * v, k


@njit(cache=True)
def next_gamma(base, k, shape, rate):
    g, k = next_gamma_std(base, k, shape)
    return g / rate, k


@njit(cache=True)
def next_chi_sq(base, k, r):
    g, k = next_gamma_std(base, k, 0.5 * r)
    return 2.0 * g, k


@njit(cache=True)
def next_chi(base, k, r):
    c2, k = next_chi_sq(base, k, r)
    return math.sqrt(c2), k


@njit(cache=True)
def sample_chain(m, n, beta, base, k):
    """Entry chain X_1..X_{2n-1}: X_{2j-1}=a_j, X_{2j}=b_j of the bidiagonal model."""
    x = np.empty(2 * n - 1)
    for i in range(n):
        c2, k = next_chi_sq(base, k, beta * (m - i))
        x[2 * i] = math.sqrt(c2 / beta)
    for i in range(n - 1):
        c2, k = next_chi_sq(base, k, beta * (n - 1 - i))
        x[2 * i + 1] = math.sqrt(c2 / beta)
    return x, k


@njit(cache=True)
def batch_gamma(master, stream_id, ndraws, shape, rate):
    base = stream_base(master, stream_id)
    k = U64(0)
    out = np.empty(ndraws)
    for i in range(ndraws):
        out[i], k = next_gamma(base, k, shape, rate)
    return out


@njit(cache=True)
def batch_chi_sq(master, stream_id, ndraws, r):
    base = stream_base(master, stream_id)
    k = U64(0)
    out = np.empty(ndraws)
    for i in range(ndraws):
        out[i], k = next_chi_sq(base, k, r)
    return out


@njit(cache=True)
def batch_chi(master, stream_id, ndraws, r):
    base = stream_base(master, stream_id)
    k = U64(0)
    out = np.empty(ndraws)
    for i in range(ndraws):
        out[i], k = next_chi(base, k, r)
    return out


# ---------------------------------------------------------------------------
# symmetric tridiagonal: Sturm counts and bisection for the top eigenvalue
# ---------------------------------------------------------------------------

@njit(cache=True)
def sturm_count_k(diag, off, x):
    n = diag.shape[0]
    cnt = 0
    q = 1.0
    for i in range(n):
        if i == 0:
            q = diag[0] - x
        else:
            q = diag[i] - x - off[i - 1] * off[i - 1] / q
        if abs(q) < 1e-300:
            q = -1e-300 if q < 0.0 else 1e-300
        if q < 0.0:
            cnt += 1
    return cnt


@njit(cache=True)
def gershgorin_radius_k(diag, off):
    n = diag.shape[0]
    r = 0.0
    for i in range(n):
        s = abs(diag[i])
        if i > 0:
            s += abs(off[i - 1])
        if i < n - 1:
            s += abs(off[i])
        if s > r:
            r = s
    return r


@njit(cache=True)
def bisect_top_k(diag, off, tol, maxit):
    """Top eigenvalue by Sturm bisection. Returns (value, iters, width, ok)."""
    n = diag.shape[0]
    lo = 1e308
    hi = -1e308
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(off[i - 1])
        if i < n - 1:
            r += abs(off[i])
        if diag[i] - r < lo:
            lo = diag[i] - r
        if diag[i] + r > hi:
            hi = diag[i] + r
    it = 0
    while hi - lo > tol and it < maxit:
        mid = 0.5 * (lo + hi)
        if sturm_count_k(diag, off, mid) == n:
            hi = mid
        else:
            lo = mid
        it += 1
    return 0.5 * (lo + hi), it, hi - lo, hi - lo <= tol


@njit(cache=True)
def top_eig_zero_diag(off, rel_tol, maxit):
    n = off.shape[0] + 1
    diag = np.zeros(n)
    radius = gershgorin_radius_k(diag, off)
    tol = rel_tol * radius if radius > 0.0 else rel_tol
    return bisect_top_k(diag, off, tol, maxit)


# ---------------------------------------------------------------------------
# trial batches over the Laguerre chain (disjoint stream ids per trial)
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def batch_lambda_max(m, n, beta, master, stream_offset, trials, rel_tol, maxit):
    lam = np.empty(trials)
    ok = np.ones(trials, dtype=np.uint8)
    for i in prange(trials):
        base = stream_base(master, stream_offset + U64(i))
        x, _ = sample_chain(m, n, beta, base, U64(0))
        s, _, _, good = top_eig_zero_diag(x, rel_tol, maxit)
        lam[i] = s * s
        if not good:
            ok[i] = 0
    return lam, ok


@njit(cache=True, parallel=True)
def batch_tail_naive(m, n, beta, thresh, master, stream_offset, trials):
    """Indicator of sturm_count(T, thresh) == 2n per trial (all singular values below)."""
    hit = np.empty(trials, dtype=np.uint8)
    dim = 2 * n
    for i in prange(trials):
        base = stream_base(master, stream_offset + U64(i))
        x, _ = sample_chain(m, n, beta, base, U64(0))
        diag = np.zeros(dim)
        hit[i] = 1 if sturm_count_k(diag, x, thresh) == dim else 0
    return hit


@njit(cache=True, parallel=True)
def batch_tail_tilted(m, n, beta, eps, K, thresh, master, stream_offset, trials):
    """Tilted trials: first K odd entries scaled by sqrt(1-eps); exact log RN weight."""
    hit = np.empty(trials, dtype=np.uint8)
    logw = np.empty(trials)
    dim = 2 * n
    scale = math.sqrt(1.0 - eps)
    theta = beta * eps / (2.0 * (1.0 - eps))
    # sum_{k=1..K} (m+1-k)
    ssum = K * (m + 1) - K * (K + 1) // 2
    const = 0.5 * beta * math.log(1.0 - eps) * ssum
    for i in prange(trials):
        base = stream_base(master, stream_offset + U64(i))
        x, _ = sample_chain(m, n, beta, base, U64(0))
        tsum = 0.0
        for j in range(K):
            y = x[2 * j] * scale
            x[2 * j] = y
            tsum += y * y
        logw[i] = theta * tsum + const
        diag = np.zeros(dim)
        hit[i] = 1 if sturm_count_k(diag, x, thresh) == dim else 0
    return hit, logw


@njit(cache=True, parallel=True)
def batch_tilted_chains(m, n, beta, eps, K, master, stream_offset, trials):
    chains = np.empty((trials, 2 * n - 1))
    logw = np.empty(trials)
    scale = math.sqrt(1.0 - eps)
    theta = beta * eps / (2.0 * (1.0 - eps))
    ssum = K * (m + 1) - K * (K + 1) // 2
    const = 0.5 * beta * math.log(1.0 - eps) * ssum
    for i in prange(trials):
        base = stream_base(master, stream_offset + U64(i))
        x, _ = sample_chain(m, n, beta, base, U64(0))
        tsum = 0.0
        for j in range(K):
            y = x[2 * j] * scale
            x[2 * j] = y
            tsum += y * y
        logw[i] = theta * tsum + const
        chains[i, :] = x
    return chains, logw


@njit(cache=True, parallel=True)
def batch_gershgorin(m, n, beta, master, stream_offset, trials, rel_tol, maxit):
    bound = np.empty(trials)
    s_top = np.empty(trials)
    for i in prange(trials):
        base = stream_base(master, stream_offset + U64(i))
        x, _ = sample_chain(m, n, beta, base, U64(0))
        g = 0.0
        npts = x.shape[0]
        for j in range(npts + 1):
            s = 0.0
            if j > 0:
                s += x[j - 1]
            if j < npts:
                s += x[j]
            if s > g:
                g = s
        bound[i] = g
        s, _, _, _ = top_eig_zero_diag(x, rel_tol, maxit)
        s_top[i] = s
    return bound, s_top


# ---------------------------------------------------------------------------
# lattice weight field and LPP dynamic programs
# ---------------------------------------------------------------------------

@njit(cache=True)
def field_u64(seed, x, y):
    ux = U64(x)
    uy = U64(y)
    return finalize64(seed ^ (ux * GOLD ^ ((uy << U64(32)) | (uy >> U64(32)))))


@njit(cache=True)
def field_weight_k(seed, x, y):
    h = field_u64(seed, x, y) >> U64(11)
    return -math.log((np.float64(h) + 0.5) * TWO53_INV)


@njit(cache=True)
def passage_point_k(seed, ux, uy, vx, vy):
    width = vx - ux + 1
    height = vy - uy + 1
    d = np.empty(width)
    for j in range(height):
        for i in range(width):
            up = d[i] if j > 0 else NEG
            lf = d[i - 1] if i > 0 else NEG
            b = up if up > lf else lf
            if b < -1e307:
                b = 0.0
            d[i] = field_weight_k(seed, ux + i, uy + j) + b
    return d[width - 1]


@njit(cache=True)
def passage_sequence_k(seed, nmax):
    """Coupled T_n for n=1..nmax from one field, row-frontier DP."""
    t = np.empty(nmax)
    d = np.empty(nmax)
    for j in range(nmax):
        for i in range(nmax):
            up = d[i] if j > 0 else NEG
            lf = d[i - 1] if i > 0 else NEG
            b = up if up > lf else lf
            if b < -1e307:
                b = 0.0
            d[i] = field_weight_k(seed, i + 1, j + 1) + b
        t[j] = d[j]
    return t


@njit(cache=True)
def point_to_line_k(seed, n):
    """(T*_n, Ttilde*_n): best path from (1,1) to the line x+y=2n, with and
    without the final-vertex weight."""
    size = 2 * n - 1
    d = np.empty(size)
    best_incl = NEG
    best_excl = NEG
    for j in range(size):          # y = j+1
        width = size - j           # x = 1..2n-1-j
        for i in range(width):
            up = d[i] if j > 0 else NEG
            lf = d[i - 1] if i > 0 else NEG
            b = up if up > lf else lf
            if b < -1e307:
                b = 0.0
            d[i] = field_weight_k(seed, i + 1, j + 1) + b
        end = width - 1            # x + y = 2n at x = 2n - y
        w_end = field_weight_k(seed, end + 1, j + 1)
        if d[end] > best_incl:
            best_incl = d[end]
        if d[end] - w_end > best_excl:
            best_excl = d[end] - w_end
    return best_incl, best_excl


@njit(cache=True)
def line_to_point_k(seed, j_lo, j_hi):
    """Best path from any vertex on the full line x+y=2*j_lo (coordinates may
    be nonpositive) to (j_hi-1, j_hi-1), both endpoint weights included."""
    t = j_hi - 1
    x_min = 2 * j_lo - t           # leftmost line vertex that can reach (t,t)
    d = np.full(t - x_min + 1, NEG)  # frontier indexed by x - x_min
    for y in range(x_min, t + 1):
        for x in range(2 * j_lo - y, t + 1):
            i = x - x_min
            w = field_weight_k(seed, x, y)
            if x + y == 2 * j_lo:
                d[i] = w
            else:
                up = d[i]
                lf = d[i - 1] if i > 0 else NEG
                b = up if up > lf else lf
                d[i] = w + b
    return d[t - x_min]


@njit(cache=True, parallel=True)
def batch_point_to_line(master, stream_offset, trials, n):
    out = np.empty(trials)
    for i in prange(trials):
        seed = stream_base(master, stream_offset + U64(i))
        incl, _ = point_to_line_k(seed, n)
        out[i] = incl
    return out


@njit(cache=True, parallel=True)
def batch_passage_point(master, stream_offset, trials, n):
    out = np.empty(trials)
    for i in prange(trials):
        seed = stream_base(master, stream_offset + U64(i))
        out[i] = passage_point_k(seed, 1, 1, n, n)
    return out


@njit(cache=True, parallel=True)
def batch_line_to_point(master, stream_offset, trials, j_lo, j_hi):
    out = np.empty(trials)
    for i in prange(trials):
        seed = stream_base(master, stream_offset + U64(i))
        out[i] = line_to_point_k(seed, j_lo, j_hi)
    return out
