"""
Counting integers by the parity of their prime factors
=======================================================

Split the integers up to x by Omega(n) mod K and look at how fast each
class approaches its fair share x/K.  Then do the same for a system where
the prime 2 has been thrown away.
"""
from beurling import (ClassCountQuery, S_count, classical_primes, convergence_scan,
                      enumerate_semigroup, modify_system)

x = 10**6
system = classical_primes(x)
table = enumerate_semigroup(system, x)
print(table)

###############################################################################
# K = 2 is the Liouville split: close to 1/2 each already at 1e4.

for c in range(2):
    res = convergence_scan(table, ClassCountQuery(2, c), [10**4, 10**5, 10**6])
    print("K=2 c=%d" % c, ["%.5f" % v for v in res.values])

###############################################################################
# Larger K converges much more slowly; the spread across classes shrinks
# only like a power of log x.

for K in (3, 4, 5):
    vals = [K * S_count(table, ClassCountQuery(K, c), x) / x for c in range(K)]
    print("K=%d" % K, " ".join("%.3f" % v for v in vals))

###############################################################################
# Same thing for distinct prime factors.

for K in (2, 3):
    vals = [K * S_count(table, ClassCountQuery(K, c, "distinct"), x) / x for c in range(K)]
    print("distinct K=%d" % K, " ".join("%.3f" % v for v in vals))

###############################################################################
# Removing 2 halves the density.  The scan divides by a = 1/2.

odd = modify_system(classical_primes(10**5), removed=[2])
otable = enumerate_semigroup(odd, 10**5)
print("density", odd.known_density, "N(x)/x =", len(otable) / 10**5)
for c in range(2):
    print("odd K=2 c=%d" % c, convergence_scan(otable, ClassCountQuery(2, c), [10**5]).values)
