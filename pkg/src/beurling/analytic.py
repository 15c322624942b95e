"""Truncated Dirichlet series, Euler products and the Halász-condition probes.

Everything here is a finite truncation: results carry the cutoff ``X`` they
were computed with and, where one is available, a tail estimate.  Angles
``t * ln(p**k)`` are formed and reduced mod ``2*pi`` in extended precision.
"""
from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._rational import INF, as_bound, as_fraction
from .counting import MODES, root_of_unity
from .errors import ValidationError
from .prime_systems import PrimeSystem
from .semigroup import SemigroupTable, enumerate_semigroup

__all__ = [
    "TransformValue",
    "HalaszProbeRow",
    "prime_power_atoms",
    "zeta_truncated",
    "log_Fq_hat",
    "euler_product_Fq",
    "trig_lhs",
    "reduce_angle",
    "dini_integral",
    "pointwise_atom_terms",
    "pointwise_inequality_check",
    "exponentiated_inequality",
    "x_schedule",
    "density_control",
    "zeta_tail_completed",
    "halasz_probe",
    "write_probe_csv",
]

TWO_PI_L = np.longdouble(2) * np.arccos(np.longdouble(-1))
K_CUT = 1e-18


@dataclass
class TransformValue:
    value: complex
    truncation_X: float
    tail_bound: Optional[float]  # None means unknown
    s: complex
    q: Optional[int] = None
    K: Optional[int] = None

    @property
    def sigma(self) -> float:
        return self.s.real


@dataclass
class HalaszProbeRow:
    sigma: float
    t: float
    q: int
    K: int
    X: float
    P_value: float
    dini_I: float
    tail_bound: Optional[float]
    cross_check: float = field(default=float("nan"))  # (sigma-1)*zeta_X(sigma)*exp(-I)


def _need_sigma(s):
    s = complex(s)
    if not s.real > 1:
        raise ValidationError(f"need Re(s) > 1, got {s}")
    return s


# ---------------------------------------------------------------------------
# prime-power atoms as arrays


@dataclass
class _Atoms:
    p: np.ndarray        # float value of the prime
    k: np.ndarray        # exponent
    logu: np.ndarray     # ln(p**k), longdouble


def prime_power_atoms(system: PrimeSystem, X, full_powers: bool = False,
                      sigma: float = None, growth: float = 1.0) -> _Atoms:
    """All ``(p, k)`` with ``p**k <= X`` (exact comparison).

    With ``full_powers`` every prime ``<= X`` instead keeps all exponents until
    ``growth**k * p**(-k*sigma) < 1e-18``; used when comparing with closed-form
    Euler factors.
    """
    X = system.check_range(X, "X")
    primes = system.primes
    n1 = len(primes) if X is INF else bisect.bisect_right(primes, X)
    logp = system.log_primes[:n1]
    pf = system.prime_floats[:n1]
    ps, ks, lus = [pf], [np.ones(n1, dtype=np.int64)], [logp]
    if full_powers:
        if sigma is None:
            raise ValidationError("full_powers needs sigma")
        # growth**k * p**(-k sigma) < K_CUT  <=>  k > ln(1/K_CUT) / (sigma ln p - ln growth)
        rate = sigma * logp.astype(float) - math.log(growth)
        if n1 and rate.min() <= 0:
            raise ValidationError("k-series does not converge for these parameters")
        kmax = np.floor(math.log(1 / K_CUT) / rate).astype(np.int64) + 1 if n1 else np.zeros(0, np.int64)
        k = 2
        while n1 and k <= kmax.max():
            sel = np.flatnonzero(kmax >= k)
            ps.append(pf[sel])
            ks.append(np.full(len(sel), k, dtype=np.int64))
            lus.append(logp[sel] * k)
            k += 1
    elif X is not INF:
        k = 2
        while n1 and primes[0] ** k <= X:
            nk = bisect.bisect_right(primes, X, hi=n1, key=lambda p, k=k: p**k)
            ps.append(pf[:nk])
            ks.append(np.full(nk, k, dtype=np.int64))
            lus.append(logp[:nk] * k)
            k += 1
    else:
        raise ValidationError("an infinite cutoff needs full_powers")
    return _Atoms(np.concatenate(ps), np.concatenate(ks), np.concatenate(lus))


def _powers(logu: np.ndarray, s: complex) -> np.ndarray:
    """``u**(-s)`` with the phase ``t ln u`` reduced in extended precision."""
    mag = np.exp(-s.real * logu.astype(float))
    phase = reduce_angle(np.longdouble(s.imag) * logu).astype(float)
    return mag * np.exp(-1j * phase)


def reduce_angle(a) -> np.ndarray:
    """Reduce angles to ``[-pi, pi)`` in extended precision."""
    a = np.asarray(a, dtype=np.longdouble)
    r = np.mod(a + TWO_PI_L / 2, TWO_PI_L) - TWO_PI_L / 2
    return r


def _variant_weights(atoms: _Atoms, q: int, K: int, variant: str) -> np.ndarray:
    if K < 1 or not 0 <= q < K:
        raise ValidationError(f"need 0 <= q < K, got q={q}, K={K}")
    if variant == "total":
        roots = np.array([root_of_unity(r, K) for r in range(K)])
        return roots[(q * atoms.k) % K] if q else np.ones(len(atoms.k), dtype=complex)
    if variant == "distinct":
        z = root_of_unity(q, K)
        return 1 - (1 - z) ** atoms.k.astype(float)
    raise ValidationError(f"variant must be one of {MODES}, got {variant!r}")


# ---------------------------------------------------------------------------
# transforms


def _table_logs(table: SemigroupTable) -> np.ndarray:
    cached = getattr(table, "_logs", None)
    if cached is None:
        if all(d == 1 for d in table.dens):
            cached = np.log(np.asarray(table.values, dtype=np.longdouble))
        else:
            cached = np.array([math.log(n) - math.log(d) for n, d in zip(table.nums, table.dens)],
                              dtype=np.longdouble)
        table._logs = cached
    return cached


def _table_for(system, X, table):
    X = system.check_range(X, "X")
    if X is INF:
        raise ValidationError("zeta_truncated needs a finite cutoff")
    if X < 1:
        raise ValidationError("cutoff must be >= 1")
    if table is None or table.x_max < X or table.system is not system:
        table = enumerate_semigroup(system, X)
    return X, table


def _density_constant(table: SemigroupTable, X) -> float:
    """``max N(u)/u`` over table points ``u`` in ``[X/2, X]``."""
    n = table.index_le(X)
    lo = table.index_le(as_fraction(X) / 2)
    v = table.values[:n]
    if lo >= n:
        return n / float(X)
    pts = v[lo:n]
    counts = np.searchsorted(v, pts, side="right")
    return float(max(np.max(counts / pts), n / float(X)))


def zeta_truncated(system: PrimeSystem, s, X, table: SemigroupTable = None) -> TransformValue:
    """``sum_{n <= X} n**(-s)`` over the generalized integers.

    The tail estimate ``C * X**(1-sigma) * (1 + |s|/(sigma-1))`` takes ``C``
    as the largest observed ``N(u)/u`` on ``[X/2, X]``.
    """
    s = _need_sigma(s)
    X, table = _table_for(system, X, table)
    n = table.index_le(X)
    val = complex(np.sum(_powers(_table_logs(table)[:n], s)))
    C = _density_constant(table, X)
    sigma = s.real
    tail = C * float(X) ** (1 - sigma) * (1 + abs(s) / (sigma - 1))
    return TransformValue(val, float(X), tail, s)


def log_Fq_hat(system: PrimeSystem, s, q: int, K: int, variant: str = "total", X=None,
               full_powers: bool = False) -> TransformValue:
    """``sum w(p, k) p**(-k s) / k`` over prime powers.

    By default the sum runs over ``p**k <= X``, matching
    ``mellin(dPi_measure(system, X, w), s)``.  With ``full_powers`` it runs over
    primes ``p <= X`` and all ``k`` until the terms drop below ``1e-18``.
    """
    s = _need_sigma(s)
    X = system.limit if X is None else X
    growth = max(1.0, abs(1 - root_of_unity(q, K))) if variant == "distinct" else 1.0
    atoms = prime_power_atoms(system, X, full_powers, s.real, growth)
    w = _variant_weights(atoms, q, K, variant)
    val = complex(np.sum(w * _powers(atoms.logu, s) / atoms.k))
    return TransformValue(val, float(as_bound(X)), None, s, q, K)


def euler_product_Fq(system: PrimeSystem, s, q: int, K: int, variant: str = "total",
                     X=None) -> TransformValue:
    """Finite Euler product over primes ``p <= X``.

    total: ``prod 1 / (1 - z p**-s)``; distinct: ``prod (1 + z p**-s / (1 - p**-s))``,
    with ``z = exp(2*pi*i*q/K)``.
    """
    s = _need_sigma(s)
    X = system.check_range(system.limit if X is None else X, "X")
    n1 = len(system.primes) if X is INF else bisect.bisect_right(system.primes, X)
    ps = _powers(system.log_primes[:n1], s)
    z = root_of_unity(q, K)
    if variant == "total":
        factors = 1 / (1 - z * ps)
    elif variant == "distinct":
        factors = 1 + z * ps / (1 - ps)
    else:
        raise ValidationError(f"variant must be one of {MODES}, got {variant!r}")
    return TransformValue(complex(np.prod(factors)), float(X), None, s, q, K)


# ---------------------------------------------------------------------------
# the trigonometric inequality and its integrated forms


def trig_lhs(x, K: int, M: float):
    """``M - 1 - M cos(x) + cos(K x)``.

    Evaluated as ``2 M sin(x/2)**2 - 2 sin(K x/2)**2``, which avoids the
    cancellation near ``x = 0`` where the function vanishes to fourth order.
    """
    x = np.asarray(x, dtype=float)
    out = 2 * M * np.sin(x / 2) ** 2 - 2 * np.sin(K * x / 2) ** 2
    return float(out) if out.ndim == 0 else out


def _shifted_angles(logu, t, q, K):
    # t ln u - 2 pi q / K, reduced; broadcasts over all arguments
    t = np.asarray(t, dtype=np.longdouble)
    q = np.asarray(q, dtype=np.longdouble)
    return reduce_angle(t * logu - TWO_PI_L * q / np.asarray(K, dtype=np.longdouble))


def dini_integral(system: PrimeSystem, q: int, K: int, t: float, sigma: float, X) -> float:
    """``sum u**(-sigma) (1 - cos(t ln u - 2 pi q/K)) / k`` over prime powers ``u = p**k <= X``."""
    if not sigma > 1:
        raise ValidationError(f"need sigma > 1, got {sigma}")
    atoms = prime_power_atoms(system, X)
    y = _shifted_angles(atoms.logu, t, q, K).astype(float)
    mass = np.exp(-sigma * atoms.logu.astype(float)) / atoms.k
    return float(np.sum(mass * 2 * np.sin(y / 2) ** 2))


def pointwise_atom_terms(logu, k, sigma, t, q, K, M) -> np.ndarray:
    """Per-atom integrand ``u**(-sigma) (M-1-M cos(t ln u - theta) + cos(K t ln u)) / k``.

    ``K * theta`` is a multiple of ``2 pi``, so ``cos(K t ln u)`` equals
    ``cos(K (t ln u - theta))`` and both cosines are taken of one reduced angle.
    All arguments broadcast.
    """
    logu = np.asarray(logu, dtype=np.longdouble)
    y = _shifted_angles(logu, t, q, K).astype(float)
    sigma = np.asarray(sigma, dtype=float)
    return np.exp(-sigma * logu.astype(float)) * trig_lhs(y, np.asarray(K), np.asarray(M)) / np.asarray(k)


def pointwise_inequality_check(system: PrimeSystem, sigma: float, t: float, q: int, K: int,
                               M: float, X) -> float:
    """Sum of :func:`pointwise_atom_terms` over prime powers ``<= X``; nonnegative."""
    if M < K * K:
        raise ValidationError(f"need M >= K**2 = {K * K}, got M={M}")
    if not sigma > 1:
        raise ValidationError(f"need sigma > 1, got {sigma}")
    atoms = prime_power_atoms(system, X)
    return float(np.sum(pointwise_atom_terms(atoms.logu, atoms.k, sigma, t, q, K, M)))


def exponentiated_inequality(system: PrimeSystem, sigma: float, t: float, q: int, K: int,
                             M: float, X) -> float:
    """``zeta(sigma)**(M-1) * exp(-M Re(z log zeta(sigma+it))) * |zeta(sigma+iKt)|``.

    All three factors come from the same truncated prime-power sum, so the
    value is at least 1 up to rounding.
    """
    if M < K * K:
        raise ValidationError(f"need M >= K**2 = {K * K}, got M={M}")
    z = root_of_unity(q, K)
    a = log_Fq_hat(system, sigma, 0, 1, "total", X).value.real
    b = log_Fq_hat(system, complex(sigma, t), 0, 1, "total", X).value
    c = log_Fq_hat(system, complex(sigma, K * t), 0, 1, "total", X).value.real
    return math.exp((M - 1) * a - M * (z * b).real + c)


# ---------------------------------------------------------------------------
# Halász probes


def x_schedule(system: PrimeSystem, sigma: float, x_cap=10**6, table: SemigroupTable = None,
               rel: float = 1e-3) -> float:
    """Smallest power of ten whose zeta tail estimate is below ``rel * |zeta_X|``.

    Capped at ``x_cap`` and at the system limit.
    """
    cap = as_bound(x_cap)
    if system.limit is not INF:
        cap = min(cap, system.limit)
    if table is None or table.x_max < cap or table.system is not system:
        table = enumerate_semigroup(system, cap)
    X = 10
    while X < cap:
        zt = zeta_truncated(system, sigma, X, table)
        if zt.tail_bound < rel * abs(zt.value):
            return float(X)
        X *= 10
    return float(cap)


def density_control(system: PrimeSystem, sigma: float, X, table: SemigroupTable = None) -> float:
    """``(sigma - 1) * zeta_X(sigma)``: the q = 0 control row."""
    return (sigma - 1) * zeta_truncated(system, sigma, X, table).value.real


def zeta_tail_completed(system: PrimeSystem, sigma: float, X, table: SemigroupTable = None) -> float:
    """``zeta_X(sigma) + a_X * X**(1-sigma) / (sigma-1)`` with ``a_X = N(X)/X``.

    Replaces ``N(u)`` beyond ``X`` by the straight line through ``(X, N(X))``;
    only the truncated sum and the count at ``X`` enter.
    """
    if not sigma > 1:
        raise ValidationError(f"need sigma > 1, got {sigma}")
    X, table = _table_for(system, X, table)
    a = table.index_le(X) / float(X)
    return zeta_truncated(system, sigma, X, table).value.real + a * float(X) ** (1 - sigma) / (sigma - 1)


def halasz_probe(system: PrimeSystem, q: int, K: int, t_grid: Sequence[float],
                 sigmas: Sequence[float], X_schedule=None, x_cap=10**6,
                 table: SemigroupTable = None) -> list:
    """Rows ``P(sigma, t) = (sigma-1) |exp(z log zeta_X(sigma+it))|`` and the Dini sum.

    ``X_schedule`` maps ``sigma`` to a cutoff (callable or dict); by default
    :func:`x_schedule` is used with ``x_cap``.
    """
    if K < 2 or not 0 < q < K:
        raise ValidationError(f"the probe needs 0 < q < K, got q={q}, K={K}")
    for sg in sigmas:
        if not sg > 1:
            raise ValidationError(f"need sigma > 1, got {sg}")
    if X_schedule is None:
        cap = as_bound(x_cap)
        if system.limit is not INF:
            cap = min(cap, system.limit)
        if table is None or table.x_max < cap or table.system is not system:
            table = enumerate_semigroup(system, cap)
        cutoffs = {sg: x_schedule(system, sg, cap, table) for sg in sigmas}
    elif callable(X_schedule):
        cutoffs = {sg: X_schedule(sg) for sg in sigmas}
    else:
        cutoffs = dict(X_schedule)
    z = root_of_unity(q, K)
    rows = []
    for sg in sigmas:
        X = cutoffs[sg]
        tail = None
        if table is not None and table.x_max >= as_bound(X):
            tail = zeta_truncated(system, sg, X, table).tail_bound
        log_zeta_real = log_Fq_hat(system, sg, 0, 1, "total", X).value.real
        for t in t_grid:
            lz = log_Fq_hat(system, complex(sg, t), 0, 1, "total", X).value
            P = (sg - 1) * math.exp((z * lz).real)
            I = dini_integral(system, q, K, t, sg, X)
            cross = (sg - 1) * math.exp(log_zeta_real - I)
            rows.append(HalaszProbeRow(float(sg), float(t), q, K, float(X), P, I, tail, cross))
    return rows


def write_probe_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sigma", "t", "q", "K", "X", "P_value", "dini_I", "tail_bound"])
        for r in rows:
            w.writerow([repr(r.sigma), repr(r.t), r.q, r.K, repr(r.X), repr(r.P_value),
                        repr(r.dini_I), "unknown" if r.tail_bound is None else repr(r.tail_bound)])
