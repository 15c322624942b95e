"""
Euler products against prime-power sums
=======================================

F_q(s) = prod 1/(1 - z p^-s) and its logarithm sum z^k p^-ks / k.  Both
are truncated at primes <= X, so they must agree to rounding.
"""
import numpy as np

from beurling import classical_primes, enumerate_semigroup
from beurling.analytic import euler_product_Fq, log_Fq_hat, zeta_truncated

X = 10**4
system = classical_primes(X)
table = enumerate_semigroup(system, X)

z = zeta_truncated(system, 2, X, table)
print("zeta_X(2) = %.10f, tail bound %.2g, pi^2/6 = %.10f" % (z.value.real, z.tail_bound, np.pi**2 / 6))

###############################################################################
# Random points in the half plane, both variants.

rng = np.random.default_rng(0)
for _ in range(5):
    s = complex(rng.uniform(1.2, 3), rng.uniform(-10, 10))
    for variant in ("total", "distinct"):
        e = euler_product_Fq(system, s, 1, 3, variant, X).value
        l = log_Fq_hat(system, s, 1, 3, variant, X, full_powers=True).value
        print("s=%.3f%+.3fi %-8s |E - exp(L)|/|E| = %.1e" % (s.real, s.imag, variant, abs(e - np.exp(l)) / abs(e)))

###############################################################################
# The Euler product for q = 0 and the Dirichlet sum differ by the
# integers > X with all prime factors <= X, and by the integers <= X with
# a prime factor > X (none here).

for s in (1.5, 2.0, 3.0):
    e = euler_product_Fq(system, s, 0, 2, "total", X).value.real
    d = zeta_truncated(system, s, X, table).value.real
    print("s=%.1f  Euler %.8f  sum %.8f  diff %.2e" % (s, e, d, e - d))
