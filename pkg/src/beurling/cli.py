"""Batch experiment driver.

    python -m beurling enumerate --system sys.json --x-max 1e5 --out runs/a
    python -m beurling scan --K 3 --grid 1e4,1e5,1e6 --out runs/b
    python -m beurling verify --seed 7 --out runs/c
    python -m beurling probe --q 1 --K 2 --out runs/d
    python -m beurling zeta --sigmas 1.5,2 --t-grid 0,1 --x-max 1e5 --out runs/e

Exit codes: 0 success, 1 check failure, 2 validation error, 3 resource error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic, checks, counting
from .errors import ResourceError, ValidationError
from .prime_systems import classical_primes, load_system
from .semigroup import DEFAULT_MEM_CAP, enumerate_semigroup

EXIT_OK, EXIT_CHECK, EXIT_VALIDATION, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    system: Optional[str] = None
    x_max: Optional[float] = None
    K: int = 2
    c: Optional[int] = None
    q: int = 1
    mode: str = "total"
    grid: list = field(default_factory=list)
    sigmas: list = field(default_factory=list)
    t_grid: list = field(default_factory=list)
    x_cap: float = 10**6
    out: str = "."
    seed: Optional[int] = None
    mem_cap: int = DEFAULT_MEM_CAP

    def digest(self) -> str:
        d = asdict(self)
        d.pop("out")
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()

    @property
    def modes(self):
        return list(counting.MODES) if self.mode == "both" else [self.mode]


def _number(s: str):
    """Parse ints exactly and everything else (``1e6``, ``2.5``) as float."""
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        v = float(s)
        return int(v) if v.is_integer() and abs(v) < 2**53 else v


def _numbers(s: str):
    return [_number(x) for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="beurling", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("enumerate", "scan", "verify", "probe", "zeta"):
        p = sub.add_parser(name)
        p.add_argument("--system", help="system spec JSON (default: classical primes)")
        p.add_argument("--x-max", type=_number)
        p.add_argument("--K", type=int, default=2)
        p.add_argument("--c", type=int)
        p.add_argument("--q", type=int, default=1)
        p.add_argument("--mode", choices=["total", "distinct", "both"], default="total")
        p.add_argument("--grid", type=_numbers, default=[])
        p.add_argument("--sigmas", type=_numbers, default=[])
        p.add_argument("--t-grid", type=_numbers, default=[])
        p.add_argument("--x-cap", type=_number, default=10**6)
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int)
        p.add_argument("--mem-cap", type=int, default=DEFAULT_MEM_CAP)
    return ap


def _system(cfg: RunConfig, needed):
    if cfg.system:
        return load_system(cfg.system)
    return classical_primes(max(2, needed))


def _write_json(path: Path, doc: dict):
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


def _sidecar(cfg: RunConfig, **extra) -> dict:
    return {"config": asdict(cfg), "config_digest": cfg.digest(), **extra}


def cmd_enumerate(cfg: RunConfig, out: Path) -> int:
    if cfg.x_max is None:
        raise ValidationError("enumerate needs --x-max")
    system = _system(cfg, cfg.x_max)
    table = enumerate_semigroup(system, cfg.x_max, mem_cap=cfg.mem_cap)
    table.to_csv(out / "table.csv")
    summary = {
        "N_x_max": len(table),
        "density_estimate": counting.density_estimate(table),
        "chebyshev_ratio": counting.chebyshev_ratio(system),
        "log_density": counting.log_density(table, table.x_max),
        "system": system.to_dict(),
    }
    _write_json(out / "summary.json", _sidecar(cfg, summary=summary))
    print(f"enumerated {len(table)} elements up to {cfg.x_max}")
    return EXIT_OK


def cmd_scan(cfg: RunConfig, out: Path) -> int:
    if cfg.K < 2:
        raise ValidationError("K must be >= 2")
    if cfg.c is not None and not 0 <= cfg.c < cfg.K:
        raise ValidationError(f"c={cfg.c} must lie in [0, K={cfg.K})")
    if not cfg.grid:
        raise ValidationError("scan needs --grid")
    classes = [cfg.c] if cfg.c is not None else list(range(cfg.K))
    x_top = max(cfg.grid)
    system = _system(cfg, x_top)
    table = enumerate_semigroup(system, x_top, mem_cap=cfg.mem_cap)
    for mode in cfg.modes:
        for c in classes:
            res = counting.convergence_scan(table, counting.ClassCountQuery(cfg.K, c, mode), cfg.grid)
            stem = f"scan_{mode}_K{cfg.K}_c{c}"
            res.to_csv(out / f"{stem}.csv")
            _write_json(out / f"{stem}.json", _sidecar(cfg, quantity=res.quantity, metadata=res.metadata))
            print(stem, " ".join(f"{v:.5f}" for v in res.values))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out: Path) -> int:
    if cfg.seed is None:
        raise ValidationError("verify runs fuzz checks and needs --seed")
    rng = np.random.default_rng(cfg.seed)
    x_max = cfg.x_max or 1000
    system = _system(cfg, max(x_max, 10**4))
    table = enumerate_semigroup(system, x_max, mem_cap=cfg.mem_cap)
    reports = []
    for mode in counting.MODES:
        reports.append(checks.check_partition(table, rng, mode=mode, x_hi=x_max))
        reports.append(checks.check_orthogonality(table, rng, mode=mode, x_hi=x_max))
    reports.append(checks.check_exp_star(system, min(x_max, 10**4), table=table))
    reports.append(checks.check_g_decomposition())
    reports.append(checks.check_trig_fuzz(rng))
    reports.append(checks.check_atom_fuzz(system, rng, X=float(system.limit)))
    ok = all(r.passed for r in reports)
    _write_json(out / "verify_report.json",
                _sidecar(cfg, passed=ok, checks=[r.to_dict() for r in reports]))
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} observed={r.max_discrepancy:.3g} tol={r.tolerance:g}")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_probe(cfg: RunConfig, out: Path) -> int:
    if not 0 < cfg.q < cfg.K:
        raise ValidationError(f"probe needs 0 < q < K, got q={cfg.q}, K={cfg.K}")
    sigmas = cfg.sigmas or [1.5, 1.3, 1.2, 1.1, 1.05]
    t_grid = cfg.t_grid or [0.0, 0.5, 1.0]
    if any(s <= 1 for s in sigmas):
        raise ValidationError("every sigma must exceed 1")
    system = _system(cfg, cfg.x_cap)
    rows = analytic.halasz_probe(system, cfg.q, cfg.K, t_grid, sigmas, x_cap=cfg.x_cap)
    analytic.write_probe_csv(rows, out / "probe.csv")
    _write_json(out / "probe.json", _sidecar(cfg, rows=len(rows), system=system.to_dict()))
    print(f"wrote {len(rows)} probe rows")
    return EXIT_OK


def cmd_zeta(cfg: RunConfig, out: Path) -> int:
    if cfg.x_max is None:
        raise ValidationError("zeta needs --x-max")
    sigmas = cfg.sigmas or [2.0]
    t_grid = cfg.t_grid or [0.0]
    if any(s <= 1 for s in sigmas):
        raise ValidationError("every sigma must exceed 1")
    system = _system(cfg, cfg.x_max)
    table = enumerate_semigroup(system, cfg.x_max, mem_cap=cfg.mem_cap)
    lines = ["sigma,t,X,value_re,value_im,tail_bound"]
    for s in sigmas:
        for t in t_grid:
            v = analytic.zeta_truncated(system, complex(s, t), cfg.x_max, table)
            lines.append(f"{s!r},{t!r},{v.truncation_X!r},{v.value.real!r},{v.value.imag!r},{v.tail_bound!r}")
    (out / "zeta.csv").write_text("\n".join(lines) + "\n")
    _write_json(out / "zeta.json", _sidecar(cfg, system=system.to_dict()))
    print(f"wrote {len(lines) - 1} zeta values")
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "probe": cmd_probe,
    "zeta": cmd_zeta,
}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
    out = Path(cfg.out)
    try:
        if cfg.mode not in ("total", "distinct", "both"):
            raise ValidationError(f"bad mode {cfg.mode!r}")
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[cfg.command](cfg, out)
    except ResourceError as e:
        print(f"resource error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
