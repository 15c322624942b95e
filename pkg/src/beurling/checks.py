"""Randomized identity and inequality checks.

Each function returns a :class:`~beurling.measures.VerificationReport`; none
raises on failure.  All randomness comes from the ``rng`` argument.
"""
from __future__ import annotations

import math

import numpy as np

from .analytic import pointwise_atom_terms, prime_power_atoms, trig_lhs
from .counting import ClassCountQuery, S_count, orthogonality_reconstruct
from .measures import (
    VerificationReport,
    verify_Fq_reconstruction,
    weight_distinct,
    weight_g1,
    weight_g2,
    weight_g3,
)
from .semigroup import SemigroupTable


def _random_x(table: SemigroupTable, rng, x_hi):
    hi = min(float(table.x_max), float(x_hi))
    # log-uniform so that small x are exercised too
    return math.exp(rng.uniform(0.0, math.log(hi)))


def check_partition(table: SemigroupTable, rng, n_cases=200, K_max=12, x_hi=10**5, mode="total"):
    bad = 0
    for _ in range(n_cases):
        K = int(rng.integers(2, K_max + 1))
        x = _random_x(table, rng, x_hi)
        total = sum(S_count(table, ClassCountQuery(K, c, mode), x) for c in range(K))
        bad += total != table.N_count(x)
    return VerificationReport(f"partition_identity[{mode}]", 0.0, float(bad), bad == 0,
                              {"cases": n_cases})


def check_orthogonality(table: SemigroupTable, rng, n_cases=200, K_max=12, x_hi=10**5, mode="total"):
    worst = 0.0
    for _ in range(n_cases):
        K = int(rng.integers(2, K_max + 1))
        c = int(rng.integers(0, K))
        x = _random_x(table, rng, x_hi)
        q = ClassCountQuery(K, c, mode)
        err = abs(orthogonality_reconstruct(table, q, x) - S_count(table, q, x))
        worst = max(worst, err / max(table.N_count(x), 1))
    return VerificationReport(f"orthogonality_identity[{mode}]", 1e-9, worst, worst <= 1e-9,
                              {"cases": n_cases, "scaled_by": "N(x)"})


def check_exp_star(system, x_max, Ks=(2, 3, 4), tol=1e-9, table=None):
    worst, runs = 0.0, 0
    for K in Ks:
        for q in range(K):
            reps = [verify_Fq_reconstruction(system, q, K, "total", x_max, table=table),
                    verify_Fq_reconstruction(system, q, K, "distinct", x_max, table=table),
                    verify_Fq_reconstruction(system, q, K, "distinct", x_max, route="split", table=table)]
            for r in reps:
                worst = max(worst, r.max_discrepancy)
                runs += 1
    return VerificationReport("exp_star_reconstruction", tol, worst, worst <= tol,
                              {"x_max": float(x_max), "Ks": list(Ks), "runs": runs})


def check_g_decomposition(K_max=12, k_max=40, primes=(2, 3, 5, 7)):
    """``g1 + g2 + g3`` equals the distinct weight, exactly and in floating point,
    and ``|g2| <= 2**k`` (``<= 1`` at ``p <= 2``)."""
    exact_ok = True
    float_err = 0.0
    env_excess = 0.0
    for K in range(2, K_max + 1):
        for q in range(K):
            g1, g2, g3, wd = weight_g1(q, K), weight_g2(q, K), weight_g3(q, K), weight_distinct(q, K)
            for p in primes:
                for k in range(1, k_max + 1):
                    lhs = [a + b + c for a, b, c in zip(g1.coeffs(p, k), g2.coeffs(p, k), g3.coeffs(p, k))]
                    exact_ok &= tuple(lhs) == wd.coeffs(p, k)
                    scale = 2.0**k
                    float_err = max(float_err, abs(g1(p, k) + g2(p, k) + g3(p, k) - wd(p, k)) / scale)
                    bound = 2.0**k if p > 2 else 1.0
                    env_excess = max(env_excess, abs(g2(p, k)) / bound - 1.0)
    ok = exact_ok and float_err <= 1e-12 and env_excess <= 1e-12
    return VerificationReport("g_decomposition", 1e-12, float_err, ok,
                              {"exact_identity": exact_ok, "envelope_excess": env_excess})


def check_trig_fuzz(rng, n=10**5, K_range=(2, 10)):
    x = rng.uniform(-math.pi, math.pi, n)
    K = rng.integers(K_range[0], K_range[1] + 1, n)
    vals = trig_lhs(x, K, K * K)
    lo = float(np.min(vals))
    return VerificationReport("trig_inequality", 1e-12, max(0.0, -lo), lo >= -1e-12,
                              {"samples": n, "min_value": lo})


def check_atom_fuzz(system, rng, n=10**5, X=10**6, t_max=50.0):
    """Per-atom integrand of the dPi-form inequality at random atoms and parameters."""
    atoms = prime_power_atoms(system, min(float(system.limit), X))
    idx = rng.integers(0, len(atoms.k), n)
    K = rng.integers(2, 11, n)
    q = (rng.random(n) * K).astype(np.int64)
    sigma = rng.uniform(1.0, 3.0, n) + 1e-9
    t = rng.uniform(-t_max, t_max, n)
    vals = pointwise_atom_terms(atoms.logu[idx], atoms.k[idx], sigma, t, q, K, K * K)
    lo = float(np.min(vals))
    return VerificationReport("atom_inequality", 1e-12, max(0.0, -lo), lo >= -1e-12,
                              {"samples": n, "min_value": lo})
