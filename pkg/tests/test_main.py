"""Tests for the command-line interface."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from app.main import cli
from app.schemas.report import SuiteReport


@pytest.fixture(scope="module")
def runner() -> CliRunner:
    return CliRunner()


class TestOptions:
    """Tests for global option validation."""

    def test_rejects_composite_p(self, runner: CliRunner) -> None:
        """Test p = 4 is a usage error."""
        result = runner.invoke(cli, ["--p", "4", "dims"])
        assert result.exit_code == 2
        assert "p must be an odd prime > 3" in result.output

    def test_rejects_short_t(self, runner: CliRunner) -> None:
        """Test t with the wrong number of entries is a usage error."""
        result = runner.invoke(cli, ["--t", "1,1", "dims"])
        assert result.exit_code == 2
        assert "t must have exactly n=3 entries" in result.output

    def test_rejects_small_n(self, runner: CliRunner) -> None:
        """Test n = 2 is a usage error."""
        result = runner.invoke(cli, ["--n", "2", "--t", "1,1", "dims"])
        assert result.exit_code == 2

    def test_unknown_suite(self, runner: CliRunner) -> None:
        """Test an unknown suite name is a usage error."""
        result = runner.invoke(cli, ["verify", "nonsense"])
        assert result.exit_code == 2

    def test_degree_on_suite_without_degrees(self, runner: CliRunner) -> None:
        """Test --degree on a suite that has no degree is a usage error."""
        result = runner.invoke(cli, ["verify", "center", "--degree", "1"])
        assert result.exit_code == 2
        assert "does not take --degree" in result.output

    def test_degrees_only_for_full_runs(self, runner: CliRunner) -> None:
        """Test --degrees is refused by the single-degree suites."""
        result = runner.invoke(cli, ["verify", "der-neg", "--degrees", "-1,-2"])
        assert result.exit_code == 2
        assert "does not take --degrees" in result.output

    def test_degree_and_degrees_together(self, runner: CliRunner) -> None:
        """Test derive refuses --degree with --degrees."""
        result = runner.invoke(cli, ["derive", "--degree", "0", "--degrees", "critical"])
        assert result.exit_code == 2

    def test_bad_degree_list(self, runner: CliRunner) -> None:
        """Test a malformed degree list is a usage error."""
        result = runner.invoke(cli, ["derive", "--degrees", "-1,zero"])
        assert result.exit_code == 2
        assert "comma-separated integers" in result.output

    def test_version(self, runner: CliRunner) -> None:
        """Test --version prints the package version."""
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output


class TestCommands:
    """Tests for the subcommands on n=3, p=5, t=(1,1,1)."""

    def test_dims(self, runner: CliRunner) -> None:
        """Test the dimension report."""
        result = runner.invoke(cli, ["dims"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert "dim O            1000" in lines
        assert "dim W (even)     3000" in lines
        assert "dim HO (even)    500" in lines
        assert "dim HO (odd)     499" in lines
        assert "dim G            24" in lines

    def test_verify_center(self, runner: CliRunner) -> None:
        """Test a passing suite exits 0."""
        result = runner.invoke(cli, ["verify", "center"])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[-1] == "PASS"

    def test_verify_writes_report(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test --out writes the JSON report."""
        out = tmp_path / "center.json"
        result = runner.invoke(cli, ["--seed", "7", "--out", str(out), "verify", "center"])
        assert result.exit_code == 0, result.output
        report = SuiteReport.model_validate_json(out.read_text())
        assert report.seed == 7
        assert report.passed

    def test_export_basis(self, runner: CliRunner) -> None:
        """Test the basis export on stdout is deterministic."""
        first = runner.invoke(cli, ["export", "basis", "--degree", "-1"])
        second = runner.invoke(cli, ["export", "basis", "--degree", "-1"])
        assert first.exit_code == 0, first.output
        assert first.output == second.output
        lines = first.output.splitlines()
        assert lines[0] == "cartan-ho-lab/1"
        assert [json.loads(line)["label"] for line in lines[2:]] == ["d_1", "d_2", "d_3"]

    def test_export_unwritable(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test a failing write reports the error and exits 2."""
        target = tmp_path / "missing" / "basis.jsonl"
        result = runner.invoke(cli, ["--out", str(target), "export", "basis", "--degree", "-1"])
        assert result.exit_code == 2
        assert "error: cannot write" in result.output

    @pytest.mark.slow
    def test_derive_single_degree(self, runner: CliRunner) -> None:
        """Test derive on degree -1 in generator mode."""
        result = runner.invoke(cli, ["derive", "--degree", "-1", "--mode", "generators"])
        assert result.exit_code == 0, result.output
        assert "PASS" in result.output

    @pytest.mark.slow
    def test_derive_degree_list(self, runner: CliRunner) -> None:
        """Test derive on a degree list notes the degrees it did not solve."""
        result = runner.invoke(cli, ["derive", "--degrees", "-2,-1"])
        assert result.exit_code == 0, result.output
        assert "other degrees not solved, taken to be inner" in result.output
        assert "mode graded" in result.output.splitlines()[0]
