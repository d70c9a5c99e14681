"""Tests for the command-line interface."""

import json

import yaml
from click.testing import CliRunner

from berezin_kit.cli import main


class TestCli:
    """Tests for berezin-kit commands and exit statuses."""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(main, list(args))

    def test_version(self):
        result = self.invoke("--version")
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_cs_check_passes(self):
        result = self.invoke("cs-check", "--json", "--no-timing")
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data["passed"]
        assert [r["verdict"] for r in data["records"]] == ["pass", "pass"]
        assert all(r["runtime_ms"] == 0 for r in data["records"])

    def test_output_is_reproducible(self):
        args = ("cs-check", "--json", "--no-timing", "--gamma", "2", "--seed", "3")
        assert self.invoke(*args).output == self.invoke(*args).output

    def test_perturbed_fails(self):
        result = self.invoke("cs-check", "--perturb", "--json")
        assert result.exit_code == 1

    def test_rotation_flags(self):
        result = self.invoke("cs-check", "--xi=-1", "--mu", "1j", "--phi1", "0.2", "--json")
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["records"][0]["theorem"] == "rotation-symmetry"

    def test_non_self_map_is_usage_error(self):
        result = self.invoke("cs-check", "--phi0", "0.5", "--phi1", "0.9")
        assert result.exit_code == 64
        assert "self_map_margin" in result.output

    def test_vector_length_is_usage_error(self):
        result = self.invoke("cs-check", "--dim", "2", "--phi0", "0.1,0.2,0.3")
        assert result.exit_code == 64

    def test_bad_tolerances(self):
        result = self.invoke("sa-check", "--tol", "1e-3,1e-6")
        assert result.exit_code == 64

    def test_sa_check_needs_real_slope(self):
        result = self.invoke("sa-check", "--phi1", "0.3i")
        assert result.exit_code == 64

    def test_sa_check_report_file(self, tmp_path):
        out = tmp_path / "sa.json"
        result = self.invoke("sa-check", "--gamma", "2", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["counts"]["pass"] == 2

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(yaml.safe_dump({"symbols": {"gamma": 3, "phi0": [0.1]}}))
        result = self.invoke("cs-check", "--config", str(path), "--json")
        assert result.exit_code == 0, result.output
        params = json.loads(result.output)["records"][0]["params"]
        assert params["gamma"] == 3
        assert params["phi0"] == [[0.1, 0.0]]

    def test_berezin_outputs(self, tmp_path):
        csv_path = tmp_path / "range.csv"
        svg_path = tmp_path / "range.svg"
        result = self.invoke(
            "berezin", "--alpha", "0.5", "--grid", "10,32",
            "--out", str(csv_path), "--svg", str(svg_path), "--json",
        )
        assert result.exit_code == 0, result.output
        assert len(csv_path.read_text().splitlines()) == 321
        assert svg_path.exists()
        summary = json.loads(result.output)
        assert summary["count"] == 320
        assert summary["alpha"] == [0.5, 0.0]

    def test_berezin_preset(self, tmp_path):
        result = self.invoke(
            "berezin", "--preset", "complex-alpha-hardy", "--grid", "5,8",
            "--out", str(tmp_path / "csv"), "--json",
        )
        assert result.exit_code == 0, result.output
        assert len(json.loads(result.output)) == 3
        assert len(list((tmp_path / "csv").glob("*.csv"))) == 3

    def test_berezin_unknown_preset(self):
        assert self.invoke("berezin", "--preset", "bogus").exit_code == 64

    def test_berezin_precision(self):
        result = self.invoke("berezin", "--source", "matrix", "--N", "16", "--json")
        assert result.exit_code == 2

    def test_berezin_unwritable(self, tmp_path):
        target = tmp_path / "missing" / "range.csv"
        result = self.invoke("berezin", "--grid", "4,8", "--out", str(target))
        assert result.exit_code == 74

    def test_certify_nonconvex(self):
        result = self.invoke("certify-nonconvex", "--alpha", "0.5", "--gamma", "2", "--json")
        assert result.exit_code == 0, result.output
        record = json.loads(result.output)["records"][0]
        assert record["theorem"] == "blaschke-nonconvexity"
        assert record["params"]["witness"]["gap"] > 0

    def test_certify_alpha_zero(self):
        result = self.invoke("certify-nonconvex", "--alpha", "0", "--json")
        assert result.exit_code == 0
        assert json.loads(result.output)["records"][0]["params"]["convex"] is True

    def test_numrange(self):
        result = self.invoke("numrange", "--coeffs", "1,1", "--beta", "0.5,0.25", "--json")
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["counts"]["pass"] == 2

    def test_numrange_length_mismatch(self):
        result = self.invoke("numrange", "--coeffs", "1,1,1", "--beta", "0.5")
        assert result.exit_code == 64

    def test_report(self, tmp_path):
        out = tmp_path / "report.json"
        result = self.invoke("report", "--json", "--no-timing", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["passed"]
        assert json.loads(out.read_text()) == json.loads(result.output)
