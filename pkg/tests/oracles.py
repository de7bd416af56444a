"""Independent reference computations used to freeze expected values.

Nothing here imports the code paths it checks: gamma products go through
mpmath at 40 digits, operator norms through full sign enumeration of every
argument.
"""

import itertools
import math

import mpmath
import numpy as np

mpmath.mp.dps = 40


def mp_bh_upper(m, field):
    """BH product bound straight from its three displayed closed forms."""
    if field == "complex":
        return mpmath.fprod(mpmath.gamma(2 - mpmath.mpf(1) / j) ** (mpmath.mpf(j) / (2 - 2 * j)) for j in range(2, m + 1))
    if m <= 13:
        return mpmath.fprod(mpmath.mpf(2) ** (mpmath.mpf(1) / (2 * j - 2)) for j in range(2, m + 1))
    head = mpmath.mpf(2) ** (mpmath.mpf(446381) / 55440 - mpmath.mpf(m) / 2)
    tail = mpmath.fprod(
        (mpmath.gamma(mpmath.mpf(3) / 2 - mpmath.mpf(1) / j) / mpmath.sqrt(mpmath.pi)) ** (mpmath.mpf(j) / (2 - 2 * j))
        for j in range(14, m + 1)
    )
    return head * tail


def brute_force_linf_norm(a):
    """max |T(x^1, ..., x^m)| over all sign vectors of every argument."""
    m = a.ndim
    n = a.shape[0]
    signs = list(itertools.product((-1.0, 1.0), repeat=n))
    best = 0.0
    for xs in itertools.product(signs, repeat=m):
        v = a
        for x in reversed(xs):
            v = v @ np.asarray(x)
        best = max(best, abs(float(v)))
    return best


def nested_norm_loops(a, q):
    """Mixed norm with explicit Python loops (innermost index uses q[-1])."""
    if a.ndim == 1:
        r = q[-1]
        if math.isinf(r):
            return max(abs(x) for x in a)
        return sum(abs(x) ** r for x in a) ** (1.0 / r)
    inner = [nested_norm_loops(a[i], q[1:]) for i in range(a.shape[0])]
    r = q[0]
    if math.isinf(r):
        return max(inner)
    return sum(x**r for x in inner) ** (1.0 / r)


def sample_admissible(rng, m, p, tries=1000):
    """Random border-case admissible exponent with max q < 2.

    Reciprocals are spread around the critical value by a zero-sum
    perturbation scaled to keep every q inside [p/(p-m), 2).
    """
    if math.isinf(p):
        target = (m + 1) / 2.0
        lo_q = 1.0
    else:
        target = (m * p + p - 2.0 * m) / (2.0 * p)
        lo_q = p / (p - m)
    c = target / m
    r_hi = 1.0 / lo_q  # largest reciprocal
    r_lo = 0.5 + 1e-6  # keeps max q strictly below 2
    for _ in range(tries):
        d = rng.normal(size=m)
        d -= d.mean()
        up = d.max()
        down = -d.min()
        if up <= 0 or down <= 0:
            continue
        tmax = min((r_hi - c) / up, (c - r_lo) / down)
        t = rng.uniform(0.0, 1.0) * tmax
        recips = c + t * d
        # put the rounding residue on one slot so the reciprocal sum is tight
        recips[-1] = target - math.fsum(recips[:-1])
        q = 1.0 / recips
        if np.all(q >= lo_q) and np.all(q < 2.0):
            return [float(x) for x in q]
    raise RuntimeError("could not sample an admissible exponent")


def sample_bh_below_threshold(rng, m, thr):
    """Admissible BH exponent with every q_i in [1, thr)."""
    target = (m + 1) / 2.0
    c = target / m
    r_lo = 1.0 / thr + 1e-12
    for _ in range(1000):
        d = rng.normal(size=m)
        d -= d.mean()
        if d.max() <= 0:
            continue
        tmax = min((1.0 - c) / d.max(), (c - r_lo) / -d.min())
        recips = c + rng.uniform(0.0, 1.0) * tmax * d
        recips[-1] = target - math.fsum(recips[:-1])
        q = 1.0 / recips
        if np.all(q >= 1.0) and np.all(q < thr):
            return [float(x) for x in q]
    raise RuntimeError("could not sample")
