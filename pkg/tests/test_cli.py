"""Command-line entry points: outputs, manifests and exit codes."""

import csv
import json
from pathlib import Path

import pytest

from svcache import analytic, cli

LIGHT_SCENARIO = """\
# small single-helper network for fast end-to-end runs
n1 = 1
n2 = 1
f_count = 10
m_cache = 3e8
"""


@pytest.fixture(scope="module")
def light_cfg(tmp_path_factory):
    path = tmp_path_factory.mktemp("scenario") / "light.cfg"
    path.write_text(LIGHT_SCENARIO)
    return str(path)


def _read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestValidate:
    def test_cross_check_passes(self, light_cfg, tmp_path):
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "--drops", "4096", "validate"])
        assert rc == 0
        header, rows = _read_csv(tmp_path / "validate.csv")
        assert header == ["quantity", "gamma_db", "analytic", "mc_mean",
                          "mc_std_error", "status"]
        assert len(rows) == len(cli.GAMMA_GRID_DB) * 6
        statuses = {r[-1] for r in rows}
        assert statuses <= {"pass", "inconclusive"}
        assert "pass" in statuses

    def test_too_few_drops_is_inconclusive_not_fail(self, light_cfg, tmp_path):
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "--drops", "512", "validate"])
        assert rc == 0
        _, rows = _read_csv(tmp_path / "validate.csv")
        assert "fail" not in {r[-1] for r in rows}


class TestAnalyze:
    def test_writes_probabilities_and_rate_table(self, light_cfg, tmp_path):
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "analyze"])
        assert rc == 0
        header, rows = _read_csv(tmp_path / "analyze.csv")
        assert header == ["quantity", "gamma_db", "value"]
        # 3 probabilities per threshold plus 2 + n1 + n2 rate entries
        assert len(rows) == len(cli.GAMMA_GRID_DB) * 3 + 4
        names = {r[0] for r in rows}
        assert {"p_success_mbs", "rate_mbs_bl_threshold",
                "rate_sbs_bl_n1", "rate_sbs_el_n1"} <= names

    def test_deterministic_output(self, light_cfg, tmp_path):
        for sub in ("a", "b"):
            out = tmp_path / sub
            out.mkdir()
            assert cli.main(["--config", light_cfg, "--out-dir", str(out),
                             "analyze"]) == 0
        a = (tmp_path / "a" / "analyze.csv").read_bytes()
        b = (tmp_path / "b" / "analyze.csv").read_bytes()
        assert a == b

    def test_plot_manifest(self, light_cfg, tmp_path):
        cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                  "analyze"])
        manifest = json.loads(
            (tmp_path / "analyze.manifest.json").read_text())
        assert manifest["csv"] == "analyze.csv"
        assert manifest["schema_version"] == 1
        assert manifest["columns"]["y"] == ["value"]


class TestSimulate:
    def test_estimates_and_dump(self, light_cfg, tmp_path):
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "--drops", "2048", "simulate", "--dump"])
        assert rc == 0
        header, rows = _read_csv(tmp_path / "simulate.csv")
        assert header == ["quantity", "gamma_db", "mc_mean", "mc_std_error",
                          "n_samples"]
        assert len(rows) == len(cli.GAMMA_GRID_DB) * 3
        assert all(int(r[-1]) == 2048 for r in rows)
        dump = (tmp_path / "sir_drops.txt").read_text().splitlines()
        assert dump[0].startswith("#")
        assert len(dump) == 1 + 2048
        assert all(float(x) > 0 for x in dump[1].split()[1:])


class TestOptimize:
    def test_trace_and_policy_outputs(self, light_cfg, tmp_path):
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "optimize", "--scheme", "2", "--init", "ucp",
                       "--max-iters", "50"])
        assert rc == 0
        _, trace_rows = _read_csv(tmp_path / "trace.csv")
        assert 1 <= len(trace_rows) <= 50
        ees = [float(r[1]) for r in trace_rows]
        running_max = [max(ees[:i + 1]) for i in range(len(ees))]
        assert running_max == sorted(running_max)
        header, pol_rows = _read_csv(tmp_path / "policy.csv")
        assert header == ["file", "q1", "q2"]
        assert len(pol_rows) == 10
        q1 = [float(r[1]) for r in pol_rows]
        q2 = [float(r[2]) for r in pol_rows]
        assert all(0.0 <= x <= 1.0 for x in q1 + q2)
        assert sum(q1) == pytest.approx(3.0, abs=1e-6)  # m_cache / l_b
        assert sum(q2) == pytest.approx(1.0, abs=1e-6)  # m_cache / l_e


class TestCompare:
    def test_cache_sweep_with_empty_cache_tie(self, light_cfg, tmp_path):
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "compare", "--sweep", "cache_size",
                       "--grid", "0,3e8", "--max-iters", "40",
                       "--icp-realizations", "20"])
        assert rc == 0
        header, rows = _read_csv(tmp_path / "compare_cache_size.csv")
        assert header == ["cache_size", "policy", "ee"]
        assert len(rows) == 2 * 6
        # with no cache every placement collapses to serve-from-MBS
        empty = [float(r[2]) for r in rows if float(r[0]) == 0.0]
        assert len(empty) == 6
        assert max(empty) == pytest.approx(min(empty), rel=1e-9)
        # a real cache budget must not hurt the optimized schemes
        full = {r[1]: float(r[2]) for r in rows if float(r[0]) > 0.0}
        assert full["scheme1"] >= empty[0] - 1e-6 * empty[0]
        assert full["scheme2"] >= empty[0] - 1e-6 * empty[0]


class TestExitCodes:
    def test_bad_scenario_exits_1(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("warp_speed = 9\n")
        rc = cli.main(["--config", str(bad), "--out-dir", str(tmp_path),
                       "analyze"])
        assert rc == 1

    def test_quadrature_failure_exits_2(self, light_cfg, tmp_path,
                                        monkeypatch):
        def boom(*args, **kwargs):
            raise analytic.QuadratureError("tail integral did not settle")

        monkeypatch.setattr(analytic, "p_success_mbs", boom)
        rc = cli.main(["--config", light_cfg, "--out-dir", str(tmp_path),
                       "analyze"])
        assert rc == 2
