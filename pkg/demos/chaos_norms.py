"""The two chaos norms behind the quadratic-form moment bounds: certified
lower-bound numerics sandwiched by a brute-force grid and analytic upper bounds.

Run:  python demos/chaos_norms.py
"""

import numpy as np

from subweibull import specnorms as sn

rng = np.random.default_rng(3)
a = rng.standard_normal((3, 3))
print("matrix:")
print(np.round(a, 3))
nb = sn.norm_bundle(0.5 * (a + a.T))
print(f"\nsymmetrized bundle: hs={nb.hs:.3f} op={nb.op:.3f} row_max={nb.row_max:.3f}\n")

print(f"{'p':>3s} {'alpha':>6s} {'coupled':>10s} {'upper':>10s} {'decoupled':>10s} {'upper':>10s}")
for p in (2.0, 4.0, 8.0):
    for alpha in (1.5, 2.0):
        c = sn.al12_norm_coupled(a, p, alpha)
        cu = sn.al12_coupled_upper(a, p)
        d = sn.al12_norm_decoupled(a, p, alpha)
        du = sn.al12_decoupled_upper(a, p, alpha)
        print(f"{p:3.0f} {alpha:6.1f} {c:10.4f} {cu:10.4f} {d:10.4f} {du:10.4f}")

print("\nAt alpha = 2 both budget sets collapse to Euclidean balls, so exact values exist:")
p = 4.0
print(f"  coupled  = 2 sqrt(p) ||A||_HS = {2 * np.sqrt(p) * np.linalg.norm(a):.6f} "
      f"vs optimizer {sn.al12_norm_coupled(a, p, 2.0):.6f}")
print(f"  decoupled = p ||A||_op       = {p * np.linalg.svd(a, compute_uv=False)[0]:.6f} "
      f"vs optimizer {sn.al12_norm_decoupled(a, p, 2.0):.6f}")

print("\nRaw-coordinate optimization agrees with the radial reparameterization:")
for p, alpha in ((2.0, 1.5), (8.0, 2.0)):
    coupled = sn.al12_norm_coupled(a, p, alpha)
    raw = sn.al12_norm_coupled_raw(a, p, alpha, restarts=3)
    print(f"  p={p}, alpha={alpha}: reduced {coupled:.6f}   raw {raw:.6f}")
