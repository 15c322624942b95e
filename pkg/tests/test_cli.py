import csv
import json
import subprocess
import sys

import pytest

from beurling.cli import RunConfig, main


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def _rows(path):
    return list(csv.reader(open(path)))


def test_enumerate_classical(tmp_path):
    spec = _write(tmp_path / "c.json", {"type": "classical", "limit": 100})
    assert main(["enumerate", "--system", spec, "--x-max", "10", "--out", str(tmp_path / "o")]) == 0
    rows = _rows(tmp_path / "o" / "table.csv")
    assert rows[0] == ["value_num", "value_den", "value_float", "omega_total", "omega_distinct"]
    assert [int(r[0]) for r in rows[1:]] == list(range(1, 11))
    side = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert side["summary"]["N_x_max"] == 10
    assert {"density_estimate", "chebyshev_ratio", "log_density"} <= set(side["summary"])
    assert len(side["config_digest"]) == 64


def test_enumerate_empty_system(tmp_path):
    spec = _write(tmp_path / "e.json", {"type": "explicit", "primes": []})
    assert main(["enumerate", "--system", spec, "--x-max", "1000", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "table.csv")
    assert len(rows) == 2 and rows[1][:2] == ["1", "1"]


def test_enumerate_rational_system(tmp_path):
    spec = _write(tmp_path / "r.json", {"type": "explicit", "primes": [{"num": 3, "den": 2}]})
    assert main(["enumerate", "--system", spec, "--x-max", "4", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "table.csv")
    assert [(r[0], r[1]) for r in rows[1:]] == [("1", "1"), ("3", "2"), ("9", "4"), ("27", "8")]


def test_x_max_above_limit(tmp_path, capsys):
    spec = _write(tmp_path / "c.json", {"type": "classical", "limit": 100})
    assert main(["enumerate", "--system", spec, "--x-max", "1000", "--out", str(tmp_path)]) == 2
    assert "limit" in capsys.readouterr().err


def test_bad_spec_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["enumerate", "--system", str(bad), "--x-max", "10", "--out", str(tmp_path)]) == 2
    spec = _write(tmp_path / "m.json", {"type": "modified", "limit": 100, "removed": [4]})
    assert main(["enumerate", "--system", spec, "--x-max", "10", "--out", str(tmp_path)]) == 2


def test_mem_cap_exit_code(tmp_path):
    assert main(["enumerate", "--x-max", "1e6", "--mem-cap", "1000", "--out", str(tmp_path)]) == 3


def test_scan_classical(tmp_path):
    assert main(["scan", "--K", "2", "--grid", "1e4,1e5,1e6", "--out", str(tmp_path)]) == 0
    for c in (0, 1):
        rows = _rows(tmp_path / f"scan_total_K2_c{c}.csv")
        assert len(rows) == 4
        assert all(abs(float(r[1]) - 1) < 0.02 for r in rows[1:])
        side = json.loads((tmp_path / f"scan_total_K2_c{c}.json").read_text())
        assert side["metadata"]["density"] == 1.0


def test_scan_removed_two_both_modes(tmp_path):
    spec = _write(tmp_path / "m.json", {"type": "modified", "limit": 10**5, "removed": [2], "added": []})
    assert main(["scan", "--system", spec, "--K", "2", "--mode", "both", "--grid", "1e4,1e5",
                 "--out", str(tmp_path)]) == 0
    for mode in ("total", "distinct"):
        for c in (0, 1):
            rows = _rows(tmp_path / f"scan_{mode}_K2_c{c}.csv")
            assert all(abs(float(r[1]) - 1) < 0.05 for r in rows[1:])


def test_scan_validation(tmp_path):
    assert main(["scan", "--K", "3", "--c", "3", "--grid", "100", "--out", str(tmp_path / "x")]) == 2
    assert main(["scan", "--K", "1", "--grid", "100", "--out", str(tmp_path / "x")]) == 2
    assert not list((tmp_path / "x").glob("*.csv"))


def test_probe(tmp_path):
    out = tmp_path / "p"
    assert main(["probe", "--q", "1", "--K", "2", "--x-cap", "1e5", "--out", str(out)]) == 0
    rows = _rows(out / "probe.csv")
    assert len(rows) == 1 + 5 * 3
    for t in ("0.0", "0.5", "1.0"):
        P = [float(r[5]) for r in rows[1:] if r[1] == t]
        assert all(a > b for a, b in zip(P, P[1:]))


def test_probe_validation(tmp_path):
    assert main(["probe", "--q", "0", "--K", "2", "--out", str(tmp_path)]) == 2
    assert main(["probe", "--q", "1", "--K", "2", "--sigmas", "1.5,1", "--out", str(tmp_path)]) == 2


def test_probe_row_count(tmp_path):
    assert main(["probe", "--q", "1", "--K", "3", "--sigmas", "2,1.5", "--t-grid", "0,1,2,3",
                 "--x-cap", "1e4", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "probe.csv")) == 1 + 2 * 4


def test_zeta(tmp_path):
    assert main(["zeta", "--sigmas", "2", "--t-grid", "0", "--x-max", "1e5", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "zeta.csv")
    assert rows[0] == ["sigma", "t", "X", "value_re", "value_im", "tail_bound"]
    assert abs(float(rows[1][3]) - 1.6449340668) < float(rows[1][5]) + 2e-6


def test_verify_needs_seed(tmp_path):
    assert main(["verify", "--out", str(tmp_path)]) == 2


@pytest.mark.slow
def test_verify_passes_and_is_reproducible(tmp_path):
    a = tmp_path / "a"
    assert main(["verify", "--seed", "7", "--out", str(a)]) == 0
    doc = json.loads((a / "verify_report.json").read_text())
    assert doc["passed"]
    for chk in doc["checks"]:
        assert {"check", "tolerance", "observed_max", "passed"} <= set(chk)
    first = (a / "verify_report.json").read_bytes()
    assert main(["verify", "--seed", "7", "--out", str(a)]) == 0
    assert (a / "verify_report.json").read_bytes() == first
    assert main(["verify", "--seed", "8", "--out", str(tmp_path / "b")]) == 0


def test_reruns_byte_identical(tmp_path):
    args = ["scan", "--K", "3", "--mode", "both", "--grid", "1e3,1e4", "--out", str(tmp_path)]
    assert main(args) == 0
    snap = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert main(args) == 0
    assert {p.name: p.read_bytes() for p in tmp_path.iterdir()} == snap
    assert len(snap) == 2 * 3 * 2


def test_digest_embedded_and_ignores_out(tmp_path):
    cfg = RunConfig(command="scan", K=3, grid=[1000], out="x")
    assert cfg.digest() == RunConfig(command="scan", K=3, grid=[1000], out="y").digest()
    assert cfg.digest() != RunConfig(command="scan", K=4, grid=[1000]).digest()
    assert main(["scan", "--K", "3", "--grid", "1000", "--out", str(tmp_path)]) == 0
    for p in tmp_path.glob("*.json"):
        side = json.loads(p.read_text())
        assert side["config_digest"] == RunConfig(**side["config"]).digest()


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "beurling", "enumerate", "--x-max", "30", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert len(_rows(tmp_path / "table.csv")) == 31
