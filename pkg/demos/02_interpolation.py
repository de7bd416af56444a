"""Writing a multi-exponent as a convex combination of vertex exponents.

For an admissible q and a parameter s in (max q_i, 2], every q is a convex
combination (in reciprocals) of the m vertices (s, ..., lambda, ..., s).
The weights theta_j are explicit; this script prints them, checks the
reconstruction and shows which case of the generalized bound applies.
"""

import math

import bhlab as B

q = [1.45, 1.5, 1 / (2 - 1 / 1.45 - 1 / 1.5)]
print("q =", [round(x, 6) for x in q], " sum 1/q =", round(sum(1 / x for x in q), 12))

for s in (1.7, 1.85, 2.0):
    d = B.interpolation_weights(q, "inf", s=s)
    print(f"\ns = {s}: lambda = {d.lam:.6f}")
    for v, t in zip(d.vertices, d.thetas):
        print("  vertex", tuple(round(x, 4) for x in v), f"theta = {t:.6f}")
    print(f"  sum theta = {math.fsum(d.thetas):.15f}, max residual = {abs(d.residuals()).max():.1e}")

# Finite p climbs the lambda ladder; consecutive rungs are conjugate to p.
m, p, s = 3, 40.0, 1.9
ladder = B.lambda_ladder(m, p, s)
print(f"\nladder for m={m}, p={p}, s={s}:", [round(float(x), 6) for x in ladder])
print("conjugacy lambda_j/p + lambda_j/lambda_{j+1}:", [round(float(a / p + a / b), 15) for a, b in zip(ladder, ladder[1:])])

# The generalized BH bound: case (i) below the max-q threshold, case (ii) above.
for qq in (q, [1.0, 2.0, 2.0]):
    r = B.gen_bh_upper(qq, "complex")
    print(f"\ngen_bh_upper{tuple(round(x, 4) for x in qq)} = {r.value:.6f}, case {r.extras['case']},"
          f" max q {r.extras['max_q']:.4f} vs threshold {r.extras['threshold']:.4f}")
    if r.extras["case"] == "i":
        prior = B.gen_bh_upper_prior(sorted(qq))
        print(f"  earlier bound for comparison: {prior.value:.6f}")
