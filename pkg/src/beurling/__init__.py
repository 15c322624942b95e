"""Computational laboratory for discrete Beurling generalized number systems.

Build a prime system, enumerate its generalized integers, count them by the
residue class of their number of prime factors, and evaluate the measures,
Dirichlet series and inequalities behind the equidistribution of those
classes.
"""
from .analytic import (
    HalaszProbeRow,
    TransformValue,
    density_control,
    dini_integral,
    euler_product_Fq,
    exponentiated_inequality,
    halasz_probe,
    log_Fq_hat,
    pointwise_inequality_check,
    trig_lhs,
    x_schedule,
    zeta_tail_completed,
    zeta_truncated,
)
from .counting import (
    ClassCountQuery,
    F_q,
    S_count,
    ScanResult,
    chebyshev_ratio,
    convergence_scan,
    density_estimate,
    f_q_value,
    log_density,
    orthogonality_reconstruct,
)
from .errors import BeurlingError, EmptySystemError, OutOfRangeError, ResourceError, ValidationError
from .measures import (
    DiscreteMeasure,
    PrimePowerWeight,
    convolve,
    dPi_measure,
    delta,
    exp_star,
    g2_l1_partial,
    mellin,
    verify_Fq_reconstruction,
    weight_distinct,
    weight_g1,
    weight_g2,
    weight_g3,
    weight_hq,
)
from .prime_systems import (
    PrimeSystem,
    classical_primes,
    explicit_system,
    load_system,
    modify_system,
    pi_count,
)
from .semigroup import GenInteger, N_count, Pi_riemann, SemigroupTable, enumerate_semigroup

__version__ = "0.1.0"
