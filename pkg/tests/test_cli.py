import csv
import io
import json
import os

import pytest

import annulus_weyl as aw
from annulus_weyl.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    comments = [l for l in text.splitlines() if l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines)))), comments


class TestEigs:
    def test_row_count_matches_eig_count(self, capsys, geom, cfg):
        code, out, _ = run_cli(capsys, "eigs", "--R", "2", "--r", "1", "--mu", "5")
        assert code == 0
        rows, comments = parse_csv(out)
        assert len(rows) == aw.eig_count(geom, 5.0, cfg)
        assert any("R=2" in c for c in comments)  # config echo
        # multiplicity expanded: +-n rows share k and x
        signed = {(int(r["n"]), int(r["k"])) for r in rows}
        for n, k in signed:
            if n != 0:
                assert (-n, k) in signed

    def test_empty_below_ground_state(self, capsys):
        code, out, _ = run_cli(capsys, "eigs", "--R", "2", "--r", "1", "--mu", "0.5")
        assert code == 0
        rows, _ = parse_csv(out)
        assert rows == []

    def test_bad_radii_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "eigs", "--R", "1", "--r", "2", "--mu", "5")
        assert code == 2
        assert "radii" in err

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "eigs", "--R", "2", "--r", "1", "--mu", "4",
                               "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["config"]["R"] == 2.0
        assert all(set(z) == {"n", "k", "x", "regime", "tau", "residual"}
                   for z in doc["zeros"])


class TestLattice:
    def test_column_count(self, capsys, geom):
        code, out, _ = run_cli(capsys, "lattice", "--R", "2", "--r", "1",
                               "--mu", "30", "--shift", "0.25")
        assert code == 0
        rows, _ = parse_csv(out)
        assert int(rows[0]["count"]) == aw.lattice_count_uniform(geom, 30.0, 0.25)

    def test_slanted_without_slope_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "lattice", "--R", "2", "--r", "1",
                               "--mu", "30", "--slanted")
        assert code == 2
        assert "rational" in err

    def test_slanted_equals_columns(self, capsys, geom):
        code, out, _ = run_cli(capsys, "lattice", "--R", "2", "--r", "1", "--mu", "30",
                               "--slanted", "--slope", "1/3")
        assert code == 0
        rows, _ = parse_csv(out)
        from annulus_weyl.counting import lattice_count_d2_columns
        assert int(rows[0]["count"]) == lattice_count_d2_columns(geom, 30.0, 0.25)

    def test_mu_below_counting_range_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "lattice", "--R", "2", "--r", "1", "--mu", "1.5")
        assert code == 3
        assert "mu" in err


class TestBand:
    def test_band_csv(self, capsys, geom):
        code, out, _ = run_cli(capsys, "band", "--R", "2", "--r", "1", "--mu", "30")
        assert code == 0
        rows, _ = parse_csv(out)
        assert int(rows[0]["band_count"]) == aw.band_count(geom, 30.0)
        assert float(rows[0]["band_err"]) == aw.band_error(geom, 30.0)


class TestRemainderScan:
    def test_csv_rows_and_fit_line(self, capsys):
        code, out, _ = run_cli(capsys, "remainder-scan", "--R", "2", "--r", "1",
                               "--mu-min", "20", "--mu-max", "40", "--points", "5")
        assert code == 0
        rows, comments = parse_csv(out)
        assert len(rows) == 5
        assert any(c.startswith("# fit slope=") for c in comments)

    def test_deterministic_output(self, tmp_path, capsys):
        args = ["remainder-scan", "--R", "2", "--r", "1", "--mu-min", "20",
                "--mu-max", "35", "--points", "4", "--seed", "1"]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(p1)]) == 0
        assert main(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_figures_rendered(self, tmp_path, capsys):
        figs = tmp_path / "figs"
        code, out, _ = run_cli(capsys, "remainder-scan", "--R", "2", "--r", "1",
                               "--mu-min", "20", "--mu-max", "30", "--points", "3",
                               "--fig-dir", str(figs))
        assert code == 0
        for name in ("remainder_scan.png", "count_convergence.png"):
            f = figs / name
            assert f.exists() and f.stat().st_size > 5000

    def test_json_reports(self, capsys):
        code, out, _ = run_cli(capsys, "remainder-scan", "--R", "2", "--r", "1",
                               "--mu-min", "20", "--mu-max", "30", "--points", "3",
                               "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert len(doc["reports"]) == 3
        assert "slope" in doc["fit"]
        assert all("wall_time_s" in r for r in doc["reports"])

    def test_bad_grid_exit_2(self, capsys):
        code, _, _ = run_cli(capsys, "remainder-scan", "--R", "2", "--r", "1",
                             "--mu-min", "40", "--mu-max", "20", "--points", "5")
        assert code == 2


class TestCount:
    def test_single_report(self, capsys, geom, cfg):
        code, out, _ = run_cli(capsys, "count", "--R", "2", "--r", "1", "--mu", "20",
                               "--variable")
        assert code == 0
        rows, _ = parse_csv(out)
        assert int(rows[0]["n_eig"]) == aw.eig_count(geom, 20.0, cfg)
        assert rows[0]["n_lat_var"] != ""


class TestConfigFile:
    def test_file_overrides_defaults_but_flags_win(self, tmp_path, capsys):
        cfgfile = tmp_path / "regime.json"
        cfgfile.write_text(json.dumps({"regime_c": 0.3, "k_small": 10}))
        code, out, _ = run_cli(capsys, "eigs", "--R", "2", "--r", "1", "--mu", "4",
                               "--config", str(cfgfile), "--regime-c", "0.4")
        assert code == 0
        _, comments = parse_csv(out)
        assert any("regime_c=0.4" in c for c in comments)   # flag beats file
        assert any("k_small=10" in c for c in comments)     # file beats default

    def test_unknown_key_exit_2(self, tmp_path, capsys):
        cfgfile = tmp_path / "bad.json"
        cfgfile.write_text(json.dumps({"mystery": 1}))
        code, _, err = run_cli(capsys, "eigs", "--R", "2", "--r", "1", "--mu", "4",
                               "--config", str(cfgfile))
        assert code == 2 and "mystery" in err


class TestThreads:
    def test_parallel_scan_matches_serial(self, tmp_path):
        base = ["remainder-scan", "--R", "2", "--r", "1", "--mu-min", "20",
                "--mu-max", "28", "--points", "3"]
        p1, p2 = tmp_path / "serial.csv", tmp_path / "pool.csv"
        assert main(base + ["--threads", "1", "--out", str(p1)]) == 0
        assert main(base + ["--threads", "2", "--out", str(p2)]) == 0
        strip = lambda p: [l for l in p.read_text().splitlines()
                           if not l.startswith("# threads=")]
        assert strip(p1) == strip(p2)


class TestVerify:
    def test_psi_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "psi")
        assert code == 0
        assert "psi.value-at-0" in out and "FAIL" not in out

    def test_slanted_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "slanted",
                               "--slope", "1/3")
        assert code == 0
        assert "slanted.column-equality" in out

    def test_unknown_suite_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--suite", "nope")
        assert code == 2

    def test_fixture_regeneration(self, tmp_path, capsys):
        code, out, _ = run_cli(capsys, "verify", "--fixtures", "--out",
                               str(tmp_path / "fx"))
        assert code == 0
        for name in ("airy_zeros.csv", "psi_samples.csv", "bessel_oracle.csv"):
            assert (tmp_path / "fx" / name).exists()
