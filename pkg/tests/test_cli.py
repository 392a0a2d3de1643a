"""
Tests for the command line interface
Commands, output files and exit codes
"""

import json

import pytest
from click.testing import CliRunner

from opspace_toolkit.cli import cli
from opspace_toolkit.core.toolkit import OpSpaceToolkit
from opspace_toolkit.testing.suites import FIXTURE_DIR

SMALL_RUN = """
run:
  seed: 20240601
budgets:
  restarts: 4
  iterations: 60
  level_cap: 2
  depth: 40
"""


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for var in ("OPSPACE_DEBUG", "OPSPACE_SEED", "OPSPACE_OUT", "OPSPACE_WORKERS"):
        monkeypatch.delenv(var, raising=False)
    (tmp_path / "small.yaml").write_text(SMALL_RUN, encoding="utf-8")
    return tmp_path


@pytest.fixture
def invoke(workdir):
    runner = CliRunner(env={"OPSPACE_LOG": "ERROR"})

    def _invoke(*args):
        return runner.invoke(cli, ["-c", str(workdir / "small.yaml"), *args], obj={})

    return _invoke


def fixture(name: str) -> str:
    return str(FIXTURE_DIR / name)


def write_json(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestNormCommand:
    """Test the norm command"""

    def test_matrix_identity(self, invoke, workdir):
        """Test matrix identity"""
        out = workdir / "norm.json"
        result = invoke("--out", str(out), "norm", fixture("m2_space.json"), fixture("identity_element.json"))
        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data["command"] == "norm"
        assert data["lo"] == pytest.approx(1.0, abs=1e-10)
        assert data["hi"] == pytest.approx(1.0, abs=1e-10)
        assert data["status"] == "exact"
        assert data["level"] == 1

    def test_trace_class_identity(self, invoke, workdir):
        """Test trace class identity"""
        out = workdir / "t2.json"
        result = invoke("--out", str(out), "norm", fixture("t2_space.json"), fixture("identity_element.json"), "1")
        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data["lo"] == pytest.approx(2.0, abs=1e-6)
        assert data["hi"] == pytest.approx(2.0, abs=1e-6)

    def test_text_format(self, invoke):
        """Test text format"""
        result = invoke("norm", fixture("m2_space.json"), fixture("identity_element.json"), "-f", "txt")
        assert result.exit_code == 0
        assert "exact" in result.output

    def test_malformed_json(self, invoke, workdir):
        """Test malformed json"""
        (workdir / "broken.json").write_text("{", encoding="utf-8")
        result = invoke("norm", fixture("m2_space.json"), str(workdir / "broken.json"))
        assert result.exit_code == 2
        assert "broken.json" in result.output

    def test_schema_violation(self, invoke, workdir):
        """Test schema violation"""
        path = write_json(workdir / "space.json", {"kind": "matrix_algebra"})
        result = invoke("norm", path, fixture("identity_element.json"))
        assert result.exit_code == 2

    def test_shape_mismatch(self, invoke, workdir):
        """Test shape mismatch"""
        path = write_json(workdir / "short.json", {"level": 1, "coords": [[[1, 0, 0]]]})
        result = invoke("norm", fixture("m2_space.json"), path)
        assert result.exit_code == 3

    def test_level_mismatch(self, invoke):
        """Test level mismatch"""
        result = invoke("norm", fixture("m2_space.json"), fixture("identity_element.json"), "2")
        assert result.exit_code == 3


class TestVerifyCommand:
    """Test the verify command"""

    def test_bundled_fixture(self, invoke, workdir):
        """Test bundled fixture"""
        out = workdir / "equaliser.json"
        result = invoke("--out", str(out), "verify", "equaliser")
        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data["command"] == "verify"
        assert data["suite"] == "equaliser"
        assert data["seed"] == 20240601
        assert data["counts"]["fail"] == 0

    def test_seed_flag(self, invoke, workdir):
        """Test seed flag"""
        out = workdir / "seeded.json"
        invoke("--seed", "5", "--out", str(out), "verify", "equaliser")
        assert json.loads(out.read_text())["seed"] == 5

    def test_unknown_suite(self, invoke):
        """Test unknown suite"""
        result = invoke("verify", "pullback")
        assert result.exit_code == 4
        assert "pullback" in result.output

    def test_failed_check_exits_one(self, invoke, workdir):
        """Test failed check exits one"""
        out = workdir / "corrupted.json"
        result = invoke("--out", str(out), "verify", "coalgebra", fixture("coalgebra_corrupted.json"))
        assert result.exit_code == 1
        data = json.loads(out.read_text())
        assert data["status"] == "fail"

    def test_same_seed_same_output(self, invoke, workdir):
        """Test same seed same output"""
        a, b = workdir / "a.json", workdir / "b.json"
        invoke("--out", str(a), "verify", "coproduct")
        invoke("--out", str(b), "verify", "coproduct")
        assert a.read_text() == b.read_text()


class TestReportCommand:
    """Test the report command"""

    def test_bundle(self, invoke, workdir):
        """Test bundle"""
        bundle = workdir / "bundle"
        invoke("--out", str(bundle / "equaliser.json"), "verify", "equaliser")
        invoke("--out", str(bundle / "coalgebra.json"), "verify", "coalgebra", fixture("coalgebra_corrupted.json"))
        out = workdir / "summary.json"
        result = invoke("--out", str(out), "report", str(bundle))
        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data["suite_count"] == 2
        assert data["failures"] == 1

    def test_empty_bundle(self, invoke, workdir):
        """Test empty bundle"""
        (workdir / "empty").mkdir()
        result = invoke("report", str(workdir / "empty"))
        assert result.exit_code == 5

    def test_corrupt_report(self, invoke, workdir):
        """Test corrupt report"""
        bundle = workdir / "corrupt"
        bundle.mkdir()
        write_json(bundle / "odd.json", {"hello": "world"})
        result = invoke("report", str(bundle))
        assert result.exit_code == 2
        assert "odd.json" in result.output


class TestInfoCommands:
    """Test suites, config and version"""

    def test_suites(self, invoke):
        """Test suites"""
        result = invoke("suites")
        assert result.exit_code == 0
        assert "trace-lemma" in result.output
        assert "coalgebra" in result.output

    def test_config(self, invoke):
        """Test config"""
        result = invoke("config")
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["budgets"]["restarts"] == 4

    def test_health(self, invoke):
        """Test health"""
        result = invoke("health")
        assert result.exit_code == 0
        assert "HEALTHY" in result.output
        assert "20240601" in result.output

    def test_health_status_tracks_runs_and_warnings(self, workdir):
        """Test health status tracks runs and warnings"""
        toolkit = OpSpaceToolkit(str(workdir / "small.yaml"))
        toolkit.verify("coalgebra")
        toolkit.logger.warning("loose interval")
        status = toolkit.get_health_status()
        assert status["performance"]["tasks"]["verify:coalgebra"]["execution_count"] == 1
        assert status["warnings"] == ["loose interval"]
        toolkit.cleanup()
        assert toolkit.get_health_status()["performance"]["tasks"] == {}

    def test_version(self):
        """Test version"""
        result = CliRunner().invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "1.0.0" in result.output

    def test_missing_config_file(self, workdir):
        """Test missing config file"""
        result = CliRunner(env={"OPSPACE_LOG": "ERROR"}).invoke(cli, ["-c", str(workdir / "nope.yaml"), "suites"], obj={})
        assert result.exit_code == 1
