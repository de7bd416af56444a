"""Certified lower bounds on the constants from explicit forms.

A coefficient tensor gives a lower bound mixed_norm / operator_norm on the
optimal constant.  For real forms on l_inf the norm is computed exactly by
sign enumeration; otherwise the ratio uses a Hölder upper bound on the norm,
so it stays a valid lower bound.
"""

import numpy as np

import bhlab as B
from bhlab.verifier import random_tensor

for m in (2, 3, 4):
    t = B.hadamard_block_form(m)
    crit = 2 * m / (m + 1)
    r = B.certify_ratio(t, [crit] * m, "inf")
    print(f"Hadamard block form m={m}: n={t.n}, exact norm {r.denominator.value:g},"
          f" ratio {r.value:.10f}, 2^(1-1/m) = {2 ** (1 - 1 / m):.10f}")

rng = np.random.default_rng(1)
t = random_tensor(3, 3, rng)
exact = B.sup_norm_exact_real_linf(t).value
for p in ("inf", 8.0, 20.0):
    lo = B.sup_norm_ascent(t, p, seed=0).value
    hi = B.sup_norm_upper_holder(t, p).value
    extra = f", exact {exact:.6f}" if p == "inf" else ""
    print(f"random m=3 form at p={p}: ascent {lo:.6f} <= norm <= Hölder {hi:.6f}{extra}")

# Hill climbing rediscovers the extremal 2x2 form.
res = B.search_extremal(2, 2, "inf", ["4/3", "4/3"], iters=3000, seed=7)
print(f"\nsearch m=2 n=2: ratio {res.ratio:.10f}, bound {res.bound:.10f}, restarts {res.restarts}")
print(res.tensor.entries)
