"""
Integers from primes by exponentiation
======================================

The counting measure of the integers is the multiplicative exponential of
the prime-power measure dPi.  Twisting the prime powers by roots of unity
gives the measure sum f_q(n) delta_n instead.
"""
from fractions import Fraction

from beurling import classical_primes, enumerate_semigroup, explicit_system
from beurling.measures import (convolve, dPi_measure, exp_star, integer_measure, max_discrepancy,
                               verify_Fq_reconstruction, weight_distinct, weight_hq)

# A one-prime system is small enough to read.
two = explicit_system([2])
dpi = dPi_measure(two, 10)
print("dPi:", dpi.as_dict())
print("exp*(dPi):", exp_star(dpi, 10).as_dict())

###############################################################################
# Liouville weights: h_1 with K = 2 gives (-1)^k on p^k.

x = 1000
system = classical_primes(x)
table = enumerate_semigroup(system, x)
built = exp_star(dPi_measure(system, x, weight_hq(1, 2)), x)
target = integer_measure(table, 1, 2)
print("Liouville, max atom error:", max_discrepancy(built, target))

###############################################################################
# For distinct prime factors the weight on p^k is 1 - (1 - z)^k.

built = exp_star(dPi_measure(system, x, weight_distinct(1, 3)), x)
print("distinct K=3, max atom error:", max_discrepancy(built, integer_measure(table, 1, 3, "distinct")))

###############################################################################
# Rational primes work the same way; positions stay exact.

r = explicit_system([Fraction(3, 2), 2])
for K in (2, 3):
    for q in range(K):
        rep = verify_Fq_reconstruction(r, q, K, "total", 50)
        print(rep.name, q, K, "%.2g" % rep.max_discrepancy)

a = dPi_measure(r, 10)
print("dPi * dPi on [1, 10]:", {str(k): round(v.real, 4) for k, v in convolve(a, a, 10)})
