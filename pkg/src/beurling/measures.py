"""Discrete measures on [1, x_max] under multiplicative convolution.

Atom positions are exact :class:`~fractions.Fraction` values so that equal
products merge exactly; weights are complex floats.  The central object is
``exp_star(dPi_measure(system, x, w))``, which for the right prime-power
weight ``w`` reproduces the ``f_q``-weighted counting measure of the
generalized integers.
"""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from ._rational import INF, as_bound, as_fraction, log_fraction
from .counting import MODES, root_of_unity
from .errors import ValidationError
from .prime_systems import PrimeSystem
from .semigroup import SemigroupTable, enumerate_semigroup

__all__ = [
    "ZERO_WEIGHT",
    "DiscreteMeasure",
    "delta",
    "PrimePowerWeight",
    "weight_one",
    "weight_hq",
    "weight_distinct",
    "weight_g1",
    "weight_g2",
    "weight_g3",
    "weight_for_mode",
    "dPi_measure",
    "convolve",
    "exp_star",
    "mellin",
    "integer_measure",
    "max_discrepancy",
    "VerificationReport",
    "verify_Fq_reconstruction",
    "g2_l1_partial",
]

ZERO_WEIGHT = 1e-15


class DiscreteMeasure:
    """Finitely many atoms ``(position, weight)`` restricted to ``[1, x_max]``.

    Build with :meth:`from_atoms`, which merges equal positions, drops atoms
    beyond ``x_max`` and prunes weights below ``ZERO_WEIGHT`` in modulus.
    """

    __slots__ = ("positions", "weights", "x_max", "_logpos")

    def __init__(self, positions: tuple, weights: np.ndarray, x_max):
        self.positions = positions
        self.weights = weights
        self.x_max = x_max
        self._logpos = None

    @classmethod
    def from_atoms(cls, atoms, x_max=INF) -> "DiscreteMeasure":
        x_max = as_bound(x_max)
        acc = defaultdict(complex)
        items = atoms.items() if isinstance(atoms, dict) else atoms
        for pos, w in items:
            pos = as_fraction(pos)
            if pos < 1:
                raise ValidationError(f"atom position {pos} is below 1")
            if pos <= x_max:
                acc[pos] += complex(w)
        return cls._from_acc(acc, x_max)

    @classmethod
    def _from_acc(cls, acc: dict, x_max) -> "DiscreteMeasure":
        keys = sorted(k for k, w in acc.items() if abs(w) >= ZERO_WEIGHT)
        weights = np.array([acc[k] for k in keys], dtype=complex)
        return cls(tuple(Fraction(k) for k in keys), weights, x_max)

    def __len__(self):
        return len(self.positions)

    def __iter__(self):
        return iter(zip(self.positions, self.weights.tolist()))

    def __repr__(self):
        return f"DiscreteMeasure(n_atoms={len(self)}, x_max={self.x_max})"

    def as_dict(self) -> dict:
        return dict(zip(self.positions, self.weights.tolist()))

    @property
    def log_positions(self) -> np.ndarray:
        if self._logpos is None:
            self._logpos = np.array([log_fraction(p) for p in self.positions], dtype=float)
        return self._logpos

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        acc = defaultdict(complex, self.as_dict())
        for p, w in other:
            acc[p] += w
        return DiscreteMeasure._from_acc(acc, min(self.x_max, other.x_max))

    def scale(self, c) -> "DiscreteMeasure":
        return DiscreteMeasure._from_acc(dict(zip(self.positions, (self.weights * c).tolist())), self.x_max)

    def restrict(self, x_max) -> "DiscreteMeasure":
        x_max = as_bound(x_max)
        return DiscreteMeasure.from_atoms(self.as_dict(), min(x_max, self.x_max))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["pos_num", "pos_den", "weight_re", "weight_im"])
            for p, wt in self:
                w.writerow([p.numerator, p.denominator, repr(wt.real), repr(wt.imag)])


def delta(position=1, weight=1.0, x_max=INF) -> DiscreteMeasure:
    return DiscreteMeasure.from_atoms([(position, weight)], x_max)


# ---------------------------------------------------------------------------
# prime-power weights


@dataclass(frozen=True)
class PrimePowerWeight:
    """A function of a prime ``p`` and exponent ``k >= 1``.

    ``coeffs(p, k)``, when present, gives the weight exactly as an integer
    vector ``c`` with weight ``sum_r c[r] * exp(2*pi*i*r/K)``.
    """

    fn: Callable
    tag: str
    envelope: Callable = field(default=lambda p, k: math.inf)
    coeffs: Optional[Callable] = None
    K: Optional[int] = None

    def __call__(self, p, k) -> complex:
        return complex(self.fn(p, k))

    def __add__(self, other: "PrimePowerWeight") -> "PrimePowerWeight":
        exact = None
        if self.coeffs is not None and other.coeffs is not None and self.K == other.K:
            exact = lambda p, k: tuple(a + b for a, b in zip(self.coeffs(p, k), other.coeffs(p, k)))
        return PrimePowerWeight(
            lambda p, k: self.fn(p, k) + other.fn(p, k),
            f"({self.tag}+{other.tag})",
            lambda p, k: self.envelope(p, k) + other.envelope(p, k),
            exact,
            self.K if self.K == other.K else None,
        )


def _unit(r, K):
    v = [0] * K
    v[r % K] += 1
    return v


def _one_minus_z_pow(q, K, k):
    """Coefficients of ``(1 - z**q)**k`` in the basis ``z**r``."""
    v = [0] * K
    for j in range(k + 1):
        v[(q * j) % K] += math.comb(k, j) * (-1) ** j
    return v


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def weight_one() -> PrimePowerWeight:
    return PrimePowerWeight(lambda p, k: 1.0, "1", lambda p, k: 1.0)


def weight_hq(q: int, K: int) -> PrimePowerWeight:
    """``h_q(p**k) = exp(2*pi*i*k*q/K)``."""
    _check(q, K)
    return PrimePowerWeight(
        lambda p, k: root_of_unity(q * k, K),
        f"h[{q}/{K}]",
        lambda p, k: 1.0,
        lambda p, k: tuple(_unit(q * k, K)),
        K,
    )


def weight_distinct(q: int, K: int) -> PrimePowerWeight:
    """``1 - (1 - z)**k`` with ``z = exp(2*pi*i*q/K)``: the log-coefficients
    when only distinct prime factors are counted."""
    _check(q, K)
    z = root_of_unity(q, K)
    return PrimePowerWeight(
        lambda p, k: 1 - (1 - z) ** k,
        f"distinct[{q}/{K}]",
        lambda p, k: 1.0 + 2.0**k,
        lambda p, k: tuple(_sub(_unit(0, K), _one_minus_z_pow(q, K, k))),
        K,
    )


def weight_g1(q: int, K: int) -> PrimePowerWeight:
    _check(q, K)
    z = root_of_unity(q, K)
    return PrimePowerWeight(lambda p, k: z, f"g1[{q}/{K}]", lambda p, k: 1.0,
                            lambda p, k: tuple(_unit(q, K)), K)


def weight_g2(q: int, K: int) -> PrimePowerWeight:
    """``1 - z - (1 - z)**k`` for ``p > 2`` and ``-z`` for ``p <= 2``."""
    _check(q, K)
    z = root_of_unity(q, K)

    def fn(p, k):
        return 1 - z - (1 - z) ** k if p > 2 else -z

    def exact(p, k):
        if p > 2:
            return tuple(_sub(_sub(_unit(0, K), _unit(q, K)), _one_minus_z_pow(q, K, k)))
        return tuple(-c for c in _unit(q, K))

    return PrimePowerWeight(fn, f"g2[{q}/{K}]", lambda p, k: 2.0**k if p > 2 else 1.0, exact, K)


def weight_g3(q: int, K: int) -> PrimePowerWeight:
    """The distinct-factor weight on primes ``p <= 2``, zero elsewhere."""
    _check(q, K)
    z = root_of_unity(q, K)

    def fn(p, k):
        return 1 - (1 - z) ** k if p <= 2 else 0j

    def exact(p, k):
        if p <= 2:
            return tuple(_sub(_unit(0, K), _one_minus_z_pow(q, K, k)))
        return tuple([0] * K)

    return PrimePowerWeight(fn, f"g3[{q}/{K}]", lambda p, k: 1.0 + 2.0**k if p <= 2 else 0.0, exact, K)


def weight_for_mode(q: int, K: int, mode: str) -> PrimePowerWeight:
    if mode == "total":
        return weight_hq(q, K)
    if mode == "distinct":
        return weight_distinct(q, K)
    raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")


def _check(q, K):
    if K < 1 or not 0 <= q < K:
        raise ValidationError(f"need 0 <= q < K, got q={q}, K={K}")


# ---------------------------------------------------------------------------
# measure algebra


def dPi_measure(system: PrimeSystem, x_max, w: PrimePowerWeight = None) -> DiscreteMeasure:
    """Atoms ``w(p, k) / k`` at every prime power ``p**k <= x_max``."""
    x_max = system.check_range(x_max, "x_max")
    w = w or weight_one()
    acc = defaultdict(complex)
    for p in system.primes:
        if p > x_max:
            break
        pk, k = p, 1
        while pk <= x_max:
            acc[pk] += w(p, k) / k
            pk *= p
            k += 1
    return DiscreteMeasure._from_acc(acc, x_max)


def convolve(mu: DiscreteMeasure, nu: DiscreteMeasure, x_max=None) -> DiscreteMeasure:
    """Multiplicative convolution restricted to ``[1, x_max]``."""
    x = min(mu.x_max, nu.x_max) if x_max is None else as_bound(x_max)
    acc = defaultdict(complex)
    if len(mu) == 0 or len(nu) == 0:
        return DiscreteMeasure._from_acc(acc, x)
    bpos = nu.positions
    bw = nu.weights.tolist()
    b0 = bpos[0]
    for a, wa in zip(mu.positions, mu.weights.tolist()):
        if a * b0 > x:
            break
        for b, wb in zip(bpos, bw):
            ab = a * b
            if ab > x:
                break
            acc[ab] += wa * wb
    return DiscreteMeasure._from_acc(acc, x)


def exp_star(mu: DiscreteMeasure, x_max=None) -> DiscreteMeasure:
    """``delta_1 + mu + mu*mu/2! + ...`` truncated to ``[1, x_max]``.

    Terminates because every atom sits above 1, so ``mu**j`` leaves the range
    once ``j > ln(x_max) / ln(min position)``.
    """
    x = mu.x_max if x_max is None else min(as_bound(x_max), mu.x_max)
    if len(mu) and mu.positions[0] == 1:
        raise ValidationError("exp_star needs all atoms above 1; the series would not terminate")
    if x is INF and len(mu):
        raise ValidationError("exp_star needs a finite x_max")
    acc = defaultdict(complex)
    acc[Fraction(1)] += 1.0
    power = delta(1, 1.0, x)
    j = 1
    while True:
        power = convolve(power, mu, x)
        if len(power) == 0:
            break
        power = DiscreteMeasure(power.positions, power.weights / j, x)
        for p, w in power:
            acc[p] += w
        j += 1
    return DiscreteMeasure._from_acc(acc, x)


def mellin(mu: DiscreteMeasure, s) -> complex:
    """``sum w * position**(-s)``."""
    if len(mu) == 0:
        return 0j
    s = complex(s)
    return complex(np.sum(mu.weights * np.exp(-s * mu.log_positions)))


def integer_measure(table: SemigroupTable, q: int, K: int, mode: str = "total") -> DiscreteMeasure:
    """``dF_q``: at each distinct value ``v``, the sum of ``f_q(n)`` over ``value(n) = v``."""
    levels = table.omega_total if mode == "total" else table.omega_distinct
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    roots = [root_of_unity(q * r, K) for r in range(K)]
    acc = defaultdict(complex)
    for i, l in enumerate((levels % K).tolist()):
        acc[Fraction(table.nums[i], table.dens[i])] += roots[l]
    return DiscreteMeasure._from_acc(acc, table.x_max)


def max_discrepancy(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    a, b = mu.as_dict(), nu.as_dict()
    return max((abs(a.get(p, 0j) - b.get(p, 0j)) for p in set(a) | set(b)), default=0.0)


@dataclass
class VerificationReport:
    name: str
    tolerance: float
    max_discrepancy: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "check": self.name,
            "tolerance": self.tolerance,
            "observed_max": self.max_discrepancy,
            "passed": self.passed,
            "details": self.details,
        }


def verify_Fq_reconstruction(system: PrimeSystem, q: int, K: int, mode: str = "total",
                             x_max=10**4, route: str = "direct", tol: float = 1e-9,
                             table: SemigroupTable = None) -> VerificationReport:
    """Compare ``exp*`` of the weighted prime-power measure with ``dF_q``.

    ``route="split"`` (distinct mode only) builds the measure as
    ``exp*((g1+g2) dPi) * exp*(g3 dPi)`` instead of one exponential.
    """
    x = system.check_range(x_max, "x_max")
    if table is None or table.x_max < x:
        table = enumerate_semigroup(system, x)
    target = integer_measure(table, q, K, mode).restrict(x)
    if route == "direct":
        built = exp_star(dPi_measure(system, x, weight_for_mode(q, K, mode)), x)
    elif route == "split":
        if mode != "distinct":
            raise ValidationError("the split route applies to distinct mode only")
        first = exp_star(dPi_measure(system, x, weight_g1(q, K) + weight_g2(q, K)), x)
        second = exp_star(dPi_measure(system, x, weight_g3(q, K)), x)
        built = convolve(first, second, x)
    else:
        raise ValidationError(f"unknown route {route!r}")
    err = max_discrepancy(built, target)
    return VerificationReport(
        f"exp_star_reconstruction[{mode},{route}]",
        tol,
        err,
        err <= tol,
        {"q": q, "K": K, "x_max": float(x), "n_atoms": len(target)},
    )


def g2_l1_partial(system: PrimeSystem, q: int, K: int, X) -> float:
    """``sum_{p**k <= X} |g2(p, k)| / (k * p**k)``."""
    X = system.check_range(X, "X")
    g2 = weight_g2(q, K)
    terms = []
    for p in system.primes:
        if p > X:
            break
        pk, k = p, 1
        while pk <= X:
            terms.append(abs(g2(p, k)) / (k * float(pk)))
            pk *= p
            k += 1
    return math.fsum(terms)
