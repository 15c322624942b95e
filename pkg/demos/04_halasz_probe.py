"""
A finite look at the Halasz condition
=====================================

For q = 1, K = 2 the probe P(sigma, t) = (sigma - 1) |exp(-log zeta(sigma + it))|
should go to 0 as sigma decreases to 1.  Nothing here proves a limit; it
only shows the trend at the largest cutoff we can afford.
"""
from beurling import classical_primes, enumerate_semigroup
from beurling.analytic import density_control, halasz_probe, zeta_tail_completed

X = 10**6
system = classical_primes(X)
table = enumerate_semigroup(system, X)

rows = halasz_probe(system, 1, 2, [0.0, 0.5, 1.0], [1.5, 1.3, 1.2, 1.1, 1.05], table=table)
print("sigma     t      X       P          I         cross")
for r in rows:
    print("%.2f  %.1f  %.0e  %.3e  %.4f  %.3e" % (r.sigma, r.t, r.X, r.P_value, r.dini_I, r.cross_check))

###############################################################################
# The q = 0 control: (sigma - 1) zeta(sigma) -> density = 1.  The raw
# truncated sum at sigma = 1.01 is far off because the missing tail
# dominates; filling the tail with the line N(u) ~ N(X)/X u fixes it.

for sigma in (1.5, 1.1, 1.01):
    raw = density_control(system, sigma, X, table)
    comp = (sigma - 1) * zeta_tail_completed(system, sigma, X, table)
    print("sigma=%.2f  raw %.4f  tail-completed %.4f" % (sigma, raw, comp))
