"""Quadratic-form concentration: empirical tails of X^T A X against the
two-regime bound, and calibration of its absolute constant.

Run:  python demos/hanson_wright.py
"""

import numpy as np

from subweibull import bounds, calibrate, cli, montecarlo as mc, specnorms
from subweibull.distributions import DistributionSpec

ALPHA = 1.0
N_COORDS = 80
N_DRAWS = 10**5
SEED = 2024

spec = DistributionSpec.weibull(ALPHA)
K = 2.0 ** (1.0 / ALPHA)  # exact Orlicz norm of the coordinate law

a = cli.generate_matrix("goe", N_COORDS, seed=SEED)
nb = specnorms.norm_bundle(a)
print(f"GOE matrix n={N_COORDS}:  ||A||_HS = {nb.hs:.2f}   ||A||_op = {nb.op:.2f}")

stat = mc.StatisticSpec.quadratic_form(a, np.full(N_COORDS, spec.variance()))
grid = np.geomspace(0.1 * K**2 * nb.hs, 20 * K**2 * nb.hs, 24)
est = mc.empirical_tail(spec, stat, grid, N_DRAWS, seed=SEED, workers=4)

family = bounds.knobbed_family("hanson-wright", K=K, hs=nb.hs, op=nb.op, alpha=ALPHA)
result = calibrate.min_dominating_constant(est, family, (1e-3, 100.0))
print(f"minimal dominating constant C = {result.value:.3f} ({result.status})\n")

curve = family.build(result.knob)
vals, _ = curve.evaluate_grid(grid)
print(f"{'t':>12s} {'p_hat':>12s} {'ci_high':>12s} {'bound':>12s}")
for t, p, hi, v in zip(grid, est.p_hat, est.ci_high, vals):
    print(f"{t:12.2f} {p:12.2e} {hi:12.2e} {v:12.2e}")

print("\nMoment-form bound C K^2 (p^(1/2) hs + p^(2/alpha) op) at the calibrated C:")
for p in (2, 4, 8):
    print(f"  p={p}:  {bounds.hw_moment_bound(p, K, nb.hs, nb.op, ALPHA, result.value):.1f}")
