"""Discrete Beurling prime systems.

A system is a finite, nondecreasing list of exact rationals > 1 together with
the bound ``limit`` up to which the list is known to be complete.  Three kinds
of system are supported:

* ``classical``: the ordinary primes up to ``limit``;
* ``explicit``: an arbitrary multiset of rationals > 1;
* ``modified``: classical primes with some removed and some rationals added.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from ._rational import INF, as_bound, as_fraction, fraction_to_json, log_fraction
from .errors import EmptySystemError, OutOfRangeError, ValidationError

__all__ = [
    "PrimeSystem",
    "sieve_primes",
    "classical_primes",
    "explicit_system",
    "modify_system",
    "pi_count",
    "load_system",
    "system_from_dict",
]


def sieve_primes(limit: int) -> np.ndarray:
    """All rational primes ``<= limit`` (sieve of Eratosthenes)."""
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass(frozen=True, eq=False)
class PrimeSystem:
    """An immutable Beurling prime system.

    ``primes`` is a tuple of :class:`~fractions.Fraction`, sorted nondecreasing,
    duplicates allowed.  ``spec`` is the JSON-style generator descriptor.
    """

    primes: tuple
    limit: object  # Fraction or math.inf
    spec: dict
    known_density: Optional[float] = None
    _floats: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ps = tuple(as_fraction(p) for p in self.primes)
        for p in ps:
            if p <= 1:
                raise ValidationError(f"generalized prime {p} is not > 1")
        if any(a > b for a, b in zip(ps, ps[1:])):
            raise ValidationError("primes must be nondecreasing")
        if self.limit is not INF and ps and ps[-1] > self.limit:
            raise ValidationError(f"prime {ps[-1]} exceeds the system limit {self.limit}")
        object.__setattr__(self, "primes", ps)
        object.__setattr__(self, "_floats", np.array([float(p) for p in ps], dtype=float))

    def __len__(self):
        return len(self.primes)

    def __repr__(self):
        return (
            f"PrimeSystem(type={self.spec.get('type')!r}, n_primes={len(self.primes)}, "
            f"limit={self.limit}, known_density={self.known_density})"
        )

    @property
    def kind(self) -> str:
        return self.spec["type"]

    @property
    def is_integral(self) -> bool:
        """True when every prime is a rational integer."""
        return all(p.denominator == 1 for p in self.primes)

    @property
    def prime_floats(self) -> np.ndarray:
        return self._floats

    @property
    def log_primes(self) -> np.ndarray:
        """``ln p`` for every prime, in extended precision (cached)."""
        cached = self.__dict__.get("_log_cache")
        if cached is None:
            cached = np.array(
                [np.log(np.longdouble(p.numerator)) - np.log(np.longdouble(p.denominator))
                 if p.numerator < 2**63 else np.longdouble(log_fraction(p)) for p in self.primes],
                dtype=np.longdouble,
            )
            object.__setattr__(self, "_log_cache", cached)
        return cached

    def check_range(self, x, what="x"):
        x = as_bound(x)
        if self.limit is not INF and x > self.limit:
            raise OutOfRangeError(
                f"{what}={float(x):g} exceeds the system limit {float(self.limit):g}; "
                "the answer would be incomplete"
            )
        return x

    def to_dict(self) -> dict:
        return dict(self.spec)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


def classical_primes(limit) -> PrimeSystem:
    """The ordinary primes up to ``limit``; density 1."""
    lim = as_fraction(limit)
    if lim < 2:
        raise EmptySystemError(
            f"limit {limit} < 2 gives no primes; use explicit_system([]) for the empty system"
        )
    ps = sieve_primes(math.floor(lim))
    spec = {"type": "classical", "limit": _limit_json(lim)}
    return PrimeSystem(tuple(Fraction(int(p)) for p in ps), lim, spec, known_density=1.0)


def explicit_system(primes: Iterable, limit=INF) -> PrimeSystem:
    """A system listing its primes directly.

    The list is taken to be complete up to ``limit``; the default ``inf`` means
    the system has exactly these primes and nothing else.
    """
    ps = sorted(as_fraction(p) for p in primes)
    lim = as_bound(limit)
    spec = {
        "type": "explicit",
        "limit": _limit_json(lim),
        "primes": [fraction_to_json(p) for p in ps],
    }
    return PrimeSystem(tuple(ps), lim, spec)


def modify_system(base: PrimeSystem, removed: Iterable = (), added: Iterable = ()) -> PrimeSystem:
    """Remove some classical primes from ``base`` and add arbitrary rationals.

    The density of the result is ``prod(1 - 1/p for removed) * prod(r/(r-1) for added)``.
    """
    if base.kind != "classical":
        raise ValidationError("modify_system needs a classical base system")
    removed = sorted({as_fraction(p) for p in removed})
    added = sorted(as_fraction(r) for r in added)
    present = set(base.primes)
    for p in removed:
        if p not in present:
            raise ValidationError(f"removed value {p} is not a prime of the base system")
    for r in added:
        if r <= 1:
            raise ValidationError(f"added value {r} is not > 1")
        if r > base.limit:
            raise ValidationError(f"added value {r} exceeds the base limit {base.limit}")

    drop = set(removed)
    kept = [p for p in base.primes if p not in drop]
    merged = sorted(kept + added)

    density = Fraction(1)
    for p in removed:
        density *= 1 - 1 / p
    for r in added:
        density *= r / (r - 1)
    spec = {
        "type": "modified",
        "limit": _limit_json(base.limit),
        "removed": [int(p) for p in removed],
        "added": [fraction_to_json(r) for r in added],
    }
    return PrimeSystem(tuple(merged), base.limit, spec, known_density=float(density))


def pi_count(system: PrimeSystem, x) -> int:
    """Number of primes ``<= x``, counted with multiplicity."""
    x = system.check_range(x)
    if x is INF:
        return len(system.primes)
    return bisect.bisect_right(system.primes, x)


def _limit_json(lim):
    if lim is INF:
        return None
    if lim.denominator == 1:
        return int(lim)
    return float(lim)


def system_from_dict(d: dict) -> PrimeSystem:
    """Build a system from its JSON descriptor."""
    kind = d.get("type")
    limit = d.get("limit")
    if kind == "classical":
        if limit is None:
            raise ValidationError("classical system needs a limit")
        return classical_primes(as_fraction(limit))
    if kind == "explicit":
        primes = [as_fraction(p) for p in d.get("primes", [])]
        return explicit_system(primes, INF if limit is None else as_fraction(limit))
    if kind == "modified":
        if limit is None:
            raise ValidationError("modified system needs a limit")
        base = classical_primes(as_fraction(limit))
        return modify_system(base, d.get("removed", []), [as_fraction(r) for r in d.get("added", [])])
    raise ValidationError(f"unknown system type {kind!r}")


def load_system(path) -> PrimeSystem:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"cannot read system spec {path}: {e}") from e
    if not isinstance(doc, dict):
        raise ValidationError(f"system spec {path} is not a JSON object")
    try:
        return system_from_dict(doc)
    except (KeyError, TypeError, ZeroDivisionError) as e:
        raise ValidationError(f"malformed system spec {path}: {e}") from e
