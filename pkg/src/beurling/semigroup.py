"""Enumeration of the generalized integers of a prime system.

Every exponent vector ``(e_1, e_2, ...)`` with ``prod p_j**e_j <= x_max`` is
one table entry, even when two vectors give the same real value.
"""
from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from ._rational import INF, as_bound, as_fraction
from .errors import OutOfRangeError, ResourceError, ValidationError
from .prime_systems import PrimeSystem, pi_count

__all__ = [
    "GenInteger",
    "SemigroupTable",
    "enumerate_semigroup",
    "N_count",
    "Pi_riemann",
    "DEFAULT_MEM_CAP",
]

DEFAULT_MEM_CAP = 2 * 10**8
PILOT_FACTOR = 64


@dataclass(frozen=True)
class GenInteger:
    value: Fraction
    omega_total: int
    omega_distinct: int


class SemigroupTable:
    """Sorted enumeration of the generalized integers ``<= x_max``.

    Columns are stored as arrays: ``values`` (float), ``omega_total`` and
    ``omega_distinct`` (int), plus exact numerators/denominators.  Use
    ``table[i]`` for a :class:`GenInteger` and :meth:`exponent_vector` for the
    factorization of entry ``i``.
    """

    def __init__(self, system, x_max, nums, dens, values, omega_total, omega_distinct,
                 order, parent, prime_index, exponent):
        self.system = system
        self.x_max = x_max
        self.nums = nums
        self.dens = dens
        self.values = values
        self.omega_total = omega_total
        self.omega_distinct = omega_distinct
        # parent links are in generation order; ``order`` maps table slot -> generation id
        self._order = order
        self._parent = parent
        self._prime_index = prime_index
        self._exponent = exponent

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i) -> GenInteger:
        return GenInteger(self.value(i), int(self.omega_total[i]), int(self.omega_distinct[i]))

    def __iter__(self) -> Iterator[GenInteger]:
        for i in range(len(self)):
            yield self[i]

    def value(self, i) -> Fraction:
        return Fraction(self.nums[i], self.dens[i])

    def exponent_vector(self, i) -> dict:
        """Sparse exponent vector ``{prime_index: exponent}`` of entry ``i``."""
        return _vector(int(self._order[i]), self._parent, self._prime_index, self._exponent)

    def index_le(self, x) -> int:
        """Number of entries with value ``<= x`` (exact comparison)."""
        x = as_bound(x)
        if x is INF:
            return len(self)
        xf = float(x)
        i = int(np.searchsorted(self.values, xf, side="right"))
        # floats are monotone in the exact values; fix the boundary exactly
        while i > 0 and Fraction(self.nums[i - 1], self.dens[i - 1]) > x:
            i -= 1
        while i < len(self) and Fraction(self.nums[i], self.dens[i]) <= x:
            i += 1
        return i

    def check_range(self, x):
        x = as_bound(x)
        if x > self.x_max:
            raise OutOfRangeError(f"x={float(x):g} exceeds the table bound x_max={float(self.x_max):g}")
        return x

    def N_count(self, x) -> int:
        x = self.check_range(x)
        if x < 1:
            raise OutOfRangeError(f"x={float(x):g} is below 1")
        return self.index_le(x)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["value_num", "value_den", "value_float", "omega_total", "omega_distinct"])
            for i in range(len(self)):
                w.writerow([self.nums[i], self.dens[i], repr(float(self.values[i])),
                            int(self.omega_total[i]), int(self.omega_distinct[i])])

    def __repr__(self):
        return f"SemigroupTable(n={len(self)}, x_max={float(self.x_max):g}, system={self.system!r})"


def _vector(gid, parent, prime_index, exponent) -> dict:
    vec = {}
    while gid > 0:
        vec[int(prime_index[gid])] = int(exponent[gid])
        gid = int(parent[gid])
    return vec


def _dfs(system: PrimeSystem, x: Fraction, store: bool, cap: int, exc=ResourceError):
    """Walk every exponent vector with product ``<= x``.

    From a node built on primes with index < ``start``, extend by ``p_i**e`` for
    ``i >= start``; primes are nondecreasing so the scan over ``i`` stops at the
    first prime that overshoots.  Returns the count, or the raw columns if
    ``store``.
    """
    pn = [p.numerator for p in system.primes]
    pd = [p.denominator for p in system.primes]
    n = len(pn)
    integral = all(d == 1 for d in pd)

    nums, dens, tot, dist, parent, pidx, expo = [1], [1], [0], [0], [-1], [-1], [0]
    count = 1
    if integral:
        bound = math.floor(x)
        stack = [(0, 1, 0, 0, 0)]
        while stack:
            start, v0, om_t, om_d, me = stack.pop()
            for i in range(start, n):
                p = pn[i]
                v = v0 * p
                if v > bound:
                    break
                e = 1
                while v <= bound:
                    if store:
                        nums.append(v)
                        tot.append(om_t + e)
                        dist.append(om_d + 1)
                        parent.append(me)
                        pidx.append(i)
                        expo.append(e)
                    stack.append((i + 1, v, om_t + e, om_d + 1, count))
                    count += 1
                    v *= p
                    e += 1
                if count > cap:
                    raise exc(f"enumeration exceeded the memory cap of {cap} elements")
        dens = None
    else:
        xn, xd = x.numerator, x.denominator
        stack = [(0, 1, 1, 0, 0, 0)]
        while stack:
            start, n0, d0, om_t, om_d, me = stack.pop()
            for i in range(start, n):
                a, b = pn[i], pd[i]
                vn, vd = n0 * a, d0 * b
                if vn * xd > xn * vd:
                    break
                e = 1
                while vn * xd <= xn * vd:
                    if store:
                        g = math.gcd(vn, vd)
                        nums.append(vn // g)
                        dens.append(vd // g)
                        tot.append(om_t + e)
                        dist.append(om_d + 1)
                        parent.append(me)
                        pidx.append(i)
                        expo.append(e)
                    stack.append((i + 1, vn, vd, om_t + e, om_d + 1, count))
                    count += 1
                    vn *= a
                    vd *= b
                    e += 1
                if count > cap:
                    raise exc(f"enumeration exceeded the memory cap of {cap} elements")
    if not store:
        return count
    return nums, dens, tot, dist, parent, pidx, expo


class _Abort(Exception):
    pass


def _count_upto(system, y, limit):
    try:
        return _dfs(system, y, store=False, cap=limit, exc=_Abort)
    except _Abort:
        return None


def pilot_estimate(system: PrimeSystem, x_max, budget: int = 10**6) -> int:
    """Cheap estimate of ``N(x_max)`` from two pilot counts.

    Counts exactly at ``y`` and ``y/64`` for the largest ``y = x_max/64**j``
    whose count fits in ``budget``, then extrapolates with the observed local
    growth exponent (clipped to [0, 1]).  Returns the exact count when
    ``N(x_max)`` itself fits in the budget.
    """
    x = as_fraction(x_max)
    exact = _count_upto(system, x, budget)
    if exact is not None:
        return exact
    y = x / PILOT_FACTOR
    while True:
        n2 = _count_upto(system, y, budget)
        if n2 is not None:
            break
        y /= PILOT_FACTOR
    n1 = _count_upto(system, y / PILOT_FACTOR, budget) if y / PILOT_FACTOR >= 1 else 1
    alpha = min(1.0, max(0.0, math.log(n2 / max(n1, 1)) / math.log(PILOT_FACTOR)))
    return int(math.ceil(n2 * float(x / y) ** alpha))


def enumerate_semigroup(system: PrimeSystem, x_max, mem_cap: int = DEFAULT_MEM_CAP) -> SemigroupTable:
    """All generalized integers ``<= x_max``, sorted by value.

    Ties in value are ordered by exponent vector, lexicographically.
    """
    x = as_fraction(x_max)
    if x < 1:
        raise ValidationError(f"x_max={float(x):g} must be >= 1")
    system.check_range(x, "x_max")
    est = pilot_estimate(system, x)
    if est > mem_cap:
        raise ResourceError(
            f"estimated {est} elements below x_max={float(x):g} exceed the memory cap {mem_cap}"
        )
    nums, dens, tot, dist, parent, pidx, expo = _dfs(system, x, store=True, cap=mem_cap)
    if dens is None:
        values = np.array(nums, dtype=float)
    else:
        values = np.array([a / b for a, b in zip(nums, dens)], dtype=float)
    parent = np.array(parent, dtype=np.int64)
    pidx = np.array(pidx, dtype=np.int64)
    expo = np.array(expo, dtype=np.int32)

    order = np.argsort(values, kind="stable")
    sv = values[order]
    if len(sv) > 1:
        close = np.flatnonzero(np.diff(sv) <= 4e-16 * sv[1:])
        if len(close):
            order = _resolve_ties(order, close, nums, dens, parent, pidx, expo)
    values = values[order]
    tot = np.array(tot, dtype=np.int32)[order]
    dist = np.array(dist, dtype=np.int32)[order]
    nums = [nums[g] for g in order.tolist()]
    dens = [1] * len(nums) if dens is None else [dens[g] for g in order.tolist()]
    return SemigroupTable(system, x, nums, dens, values, tot, dist, order, parent, pidx, expo)


def _resolve_ties(order, close, nums, dens, parent, pidx, expo):
    """Exactly re-sort runs of float-indistinguishable values."""
    order = order.copy()
    runs = []
    start = prev = int(close[0])
    for j in close[1:].tolist():
        if j != prev + 1:
            runs.append((start, prev + 1))
            start = j
        prev = j
    runs.append((start, prev + 1))
    for lo, hi in runs:
        ids = order[lo : hi + 1].tolist()
        vecs = {g: _vector(g, parent, pidx, expo) for g in ids}

        def key(g):
            # dense lexicographic order, read off the sparse vector
            val = Fraction(nums[g], 1 if dens is None else dens[g])
            return val, tuple((-i, e) for i, e in sorted(vecs[g].items()))

        order[lo : hi + 1] = sorted(ids, key=key)
    return order


def N_count(table: SemigroupTable, x) -> int:
    """Number of generalized integers ``<= x``."""
    return table.N_count(x)


def Pi_riemann(system: PrimeSystem, x) -> Fraction:
    """Riemann-weighted prime count ``sum_k pi(x**(1/k)) / k``, exactly."""
    x = system.check_range(x)
    if x is INF:
        raise ValidationError("Pi_riemann needs a finite x")
    if not system.primes or x < system.primes[0]:
        return Fraction(0)
    total = Fraction(0)
    k = 1
    # p**k <= x  <=>  p <= x**(1/k); stop once the smallest prime fails
    while system.primes[0] ** k <= x:
        cnt = bisect.bisect_right(system.primes, x, key=lambda p, k=k: p**k) if k > 1 \
            else pi_count(system, x)
        total += Fraction(cnt, k)
        k += 1
    return total
