"""How large are the BH and HL constants?

Walks through the known upper bounds for the multilinear BH constant,
compares them with the sublinear envelopes, then shows how the HL bound
improves once p passes the cubic threshold 2m^3 - 4m^2 + 2m.

Run with ``python3 demos/01_constants.py``.
"""

import numpy as np

import bhlab as B

print("BH upper bounds (product of inverse Khinchine constants)")
print(f"{'m':>6} {'real':>12} {'complex':>12} {'real lower':>12}")
for m in (2, 3, 5, 10, 13, 14, 50, 100, 1000):
    print(
        f"{m:>6} {B.bh_upper(m, 'real').value:12.6f} {B.bh_upper(m, 'complex').value:12.6f}"
        f" {B.bh_lower_real(m).value:12.6f}"
    )

# The seam at m = 13/14: the real Khinchine constant switches formula once
# (2j-2)/j passes q0, so the real product changes shape there.
q0 = B.solve_q0()
print(f"\nKhinchine crossover q0 = {q0:.10f}; (2j-2)/j first exceeds it at j = 14: {26 / 14:.4f}")

# Envelopes: the bounds grow slower than any positive power would suggest.
ms = np.unique(np.geomspace(2, 10_000, 12).astype(int))
print(f"\n{'m':>6} {'complex/envelope':>18} {'real/envelope':>15}")
for m in ms:
    c = B.bh_upper(m, "complex").value / B.bh_envelope(m, "complex").value
    r = B.bh_upper(m, "real").value / B.bh_envelope(m, "real").value
    print(f"{m:>6} {c:18.6f} {r:15.6f}")

# HL: three upper bounds; the p-free one only applies above the threshold.
m = 3
thr = B.hl_threshold(m)
print(f"\nHL bounds for m = {m} (threshold {thr})")
for p in (6, 12, 24, 25, 100, 10_000):
    best = B.hl_upper_best(m, p, "real")
    print(f"  p = {p:>6}: best {best.value:.6f} via {best.extras['winner']},"
          f" lower {B.hl_lower_real(m, p).value:.6f}")
