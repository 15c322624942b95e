"""Residue-class counts of the number of prime factors.

For a table of generalized integers, ``S_count`` counts elements ``n <= x``
whose factor count ``l(n)`` (``Omega`` in mode ``"total"``, ``omega`` in mode
``"distinct"``) lies in a residue class mod ``K``.  ``F_q`` is the twisted sum
of ``exp(2*pi*i*q*l(n)/K)``; the two are related by the discrete Fourier
transform over ``q``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._rational import INF, as_bound
from .errors import ValidationError
from .prime_systems import PrimeSystem, pi_count
from .semigroup import GenInteger, SemigroupTable

__all__ = [
    "MODES",
    "ClassCountQuery",
    "ScanResult",
    "root_of_unity",
    "f_q_value",
    "class_buckets",
    "F_q",
    "S_count",
    "orthogonality_reconstruct",
    "convergence_scan",
    "chebyshev_ratio",
    "density_estimate",
    "log_density",
]

MODES = ("total", "distinct")


def root_of_unity(r: int, K: int) -> complex:
    """``exp(2*pi*i*r/K)`` with the exponent reduced mod ``K`` first."""
    r %= K
    if r == 0:
        return 1 + 0j
    if 2 * r == K:
        return -1 + 0j
    if 4 * r == K:
        return 1j
    if 4 * r == 3 * K:
        return -1j
    ang = 2 * math.pi * r / K
    return complex(math.cos(ang), math.sin(ang))


def _check_mode(mode):
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")


def _check_qK(q, K):
    if K < 1 or not 0 <= q < K:
        raise ValidationError(f"need 0 <= q < K, got q={q}, K={K}")


@dataclass(frozen=True)
class ClassCountQuery:
    K: int
    c: int
    mode: str = "total"

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 2:
            raise ValidationError(f"K must be an integer >= 2, got {self.K}")
        if not 0 <= self.c < self.K:
            raise ValidationError(f"c must lie in [0, K), got c={self.c}, K={self.K}")
        _check_mode(self.mode)

    def to_dict(self):
        return {"K": self.K, "c": self.c, "mode": self.mode}


@dataclass
class ScanResult:
    """A quantity tabulated over a strictly increasing grid."""

    quantity: str
    grid: list
    values: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValidationError("grid and values differ in length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValidationError("grid must be strictly increasing")

    @property
    def is_complex(self) -> bool:
        return any(isinstance(v, complex) for v in self.values)

    def to_csv(self, path) -> None:
        cplx = self.is_complex
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["grid_point", "value_re", "value_im"] if cplx else ["grid_point", "value_re"])
            for g, v in zip(self.grid, self.values):
                row = [repr(float(g)), repr(float(complex(v).real))]
                if cplx:
                    row.append(repr(float(complex(v).imag)))
                w.writerow(row)

    def to_json(self, path) -> None:
        doc = {"quantity": self.quantity, "n_points": len(self.grid), "metadata": self.metadata}
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


def _level(n: GenInteger, mode: str) -> int:
    return n.omega_total if mode == "total" else n.omega_distinct


def f_q_value(n: GenInteger, q: int, K: int, mode: str = "total") -> complex:
    _check_qK(q, K)
    _check_mode(mode)
    return root_of_unity(q * _level(n, mode), K)


def _levels(table: SemigroupTable, mode: str) -> np.ndarray:
    _check_mode(mode)
    return table.omega_total if mode == "total" else table.omega_distinct


def class_buckets(table: SemigroupTable, K: int, mode: str, x) -> np.ndarray:
    """Integer counts of elements ``<= x`` in each residue class mod ``K``."""
    x = table.check_range(x)
    i = table.index_le(x)
    return np.bincount(_levels(table, mode)[:i] % K, minlength=K).astype(np.int64)


def F_q(table: SemigroupTable, q: int, K: int, mode: str, x) -> complex:
    """Sum of ``f_q(n)`` over ``n <= x``.

    Accumulated as integer class counts first; the roots of unity are applied
    once at the end.
    """
    _check_qK(q, K)
    counts = class_buckets(table, K, mode, x)
    return sum((int(c) * root_of_unity(q * r, K) for r, c in enumerate(counts)), 0j)


def S_count(table: SemigroupTable, query: ClassCountQuery, x) -> int:
    counts = class_buckets(table, query.K, query.mode, x)
    return int(counts[query.c])


def orthogonality_reconstruct(table: SemigroupTable, query: ClassCountQuery, x) -> complex:
    """``(1/K) * sum_q exp(-2*pi*i*q*c/K) * F_q(x)``, which recovers ``S_count``."""
    K, c = query.K, query.c
    total = 0j
    for q in range(K):
        total += root_of_unity(-q * c, K) * F_q(table, q, K, query.mode, x)
    return total / K


def density_estimate(table: SemigroupTable) -> float:
    """``N(x_max) / x_max``."""
    if len(table) == 0:
        raise ValidationError("empty table")
    return len(table) / float(table.x_max)


def log_density(table: SemigroupTable, x) -> float:
    """``sum_{n <= x} 1/n``: the integral of ``dN(u)/u`` up to ``x``."""
    x = table.check_range(x)
    i = table.index_le(x)
    return float(math.fsum((1.0 / table.values[:i]).tolist()))


def convergence_scan(table: SemigroupTable, query: ClassCountQuery, x_grid: Sequence) -> ScanResult:
    """Tabulate ``K * S(x) / (a * x)`` over ``x_grid``.

    ``a`` is the system's known density when available, otherwise the
    empirical ``N(x_max)/x_max``; which one was used is recorded.
    """
    grid = [as_bound(x) for x in x_grid]
    for x in grid:
        table.check_range(x)
    known = table.system.known_density
    if known is not None:
        a, source = float(known), "known_density"
    else:
        a, source = density_estimate(table), "density_estimate"
        if a < 1e-6:
            raise ValidationError(
                f"no known density and the empirical estimate {a:.3g} is degenerate"
            )
    values = [query.K * S_count(table, query, x) / (a * float(x)) for x in grid]
    meta = {
        "system": table.system.to_dict(),
        "query": query.to_dict(),
        "x_max": float(table.x_max),
        "density": a,
        "density_source": source,
    }
    return ScanResult("K*S/(a*x)", [float(x) for x in grid], values, meta)


def chebyshev_ratio(system: PrimeSystem, x_samples=None) -> float:
    """Max over samples of ``pi(x) * ln(x) / x``.

    With no samples, every prime position plus ``x = e`` is used.  Between
    consecutive primes ``ln(x)/x`` rises up to ``e`` and falls after it, so
    these points attain the sup over the whole materialized range.
    """
    if x_samples is None:
        pf = system.prime_floats
        if len(pf) == 0:
            return 0.0
        pts = pf
        if system.limit is INF or system.limit >= math.e:
            pts = np.append(pf, math.e)
        counts = np.searchsorted(pf, pts, side="right")
        return float(np.max(counts * np.log(pts) / pts))
    best = 0.0
    for x in x_samples:
        x = as_bound(x)
        if x <= 1:
            continue
        xf = float(x)
        best = max(best, pi_count(system, x) * math.log(xf) / xf)
    return best
