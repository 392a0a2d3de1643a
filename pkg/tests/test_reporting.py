"""
Tests for Reporting System
Bundle aggregation, rendering formats and atomic writes
"""

import json

import pytest

from opspace_toolkit.core.error_codes import EmptyInputError, ErrorCode, ParseError
from opspace_toolkit.reporting import (
    BundleSummary,
    NormReport,
    ReportFormat,
    ReportGenerator,
    aggregate_bundle,
)


def suite_output(suite, statuses, residual=1e-12):
    return {
        "command": "verify",
        "suite": suite,
        "seed": 1,
        "status": "fail" if "fail" in statuses else "pass",
        "counts": {s: statuses.count(s) for s in ("pass", "fail", "undecided")},
        "checks": [
            {"name": f"check_{i}", "status": s, "message": "m", "residual": residual}
            for i, s in enumerate(statuses)
        ],
    }


class TestNormReport:
    """Test norm run outputs"""

    def test_to_dict(self):
        """Test to dict"""
        report = NormReport(1.0, 1.0, "exact", 1, {"kind": "concrete"}, {"space": "m2.json"})
        data = report.to_dict()
        assert data["command"] == "norm"
        assert (data["lo"], data["hi"], data["status"]) == (1.0, 1.0, "exact")
        assert data["provenance"]["files"] == {"space": "m2.json"}


class TestAggregateBundle:
    """Test bundle aggregation"""

    @pytest.fixture
    def bundle(self, tmp_path):
        (tmp_path / "a_ruan.json").write_text(json.dumps(suite_output("ruan", ["pass", "pass"])))
        (tmp_path / "b_ruan.json").write_text(json.dumps(suite_output("ruan", ["pass", "fail"], residual=0.5)))
        (tmp_path / "c_coalgebra.json").write_text(json.dumps(suite_output("coalgebra", ["pass", "undecided"])))
        norm = NormReport(2.0, 2.0, "exact", 1, {}).to_dict()
        (tmp_path / "d_norm.json").write_text(json.dumps(norm))
        (tmp_path / "notes.txt").write_text("ignored")
        return tmp_path

    def test_counts(self, bundle):
        """Test counts"""
        summary = aggregate_bundle(str(bundle))
        assert isinstance(summary, BundleSummary)
        assert summary.files == ["a_ruan.json", "b_ruan.json", "c_coalgebra.json", "d_norm.json"]
        assert summary.norm_runs == 1
        ruan = summary.suites["ruan"]
        assert (ruan.runs, ruan.failed_runs, ruan.passed_checks, ruan.failed_checks) == (2, 1, 3, 1)
        assert ruan.max_residual == 0.5
        assert summary.suites["coalgebra"].undecided_checks == 1
        assert summary.failures == 1

    def test_summary_is_deterministic(self, bundle):
        """Test summary is deterministic"""
        assert aggregate_bundle(str(bundle)).to_dict() == aggregate_bundle(str(bundle)).to_dict()

    def test_suites_sorted_in_output(self, bundle):
        """Test suites sorted in output"""
        data = aggregate_bundle(str(bundle)).to_dict()
        assert [s["suite"] for s in data["suites"]] == ["coalgebra", "ruan"]
        assert data["suite_count"] == 2

    def test_empty_directory(self, tmp_path):
        """Test empty directory"""
        with pytest.raises(EmptyInputError) as exc:
            aggregate_bundle(str(tmp_path))
        assert exc.value.exit_code == 5

    def test_missing_directory(self, tmp_path):
        """Test missing directory"""
        with pytest.raises(EmptyInputError):
            aggregate_bundle(str(tmp_path / "absent"))

    def test_corrupt_report_names_file(self, tmp_path):
        """Test corrupt report names file"""
        (tmp_path / "bad.json").write_text(json.dumps({"unexpected": True}))
        with pytest.raises(ParseError) as exc:
            aggregate_bundle(str(tmp_path))
        assert exc.value.code == ErrorCode.CORRUPT_REPORT
        assert exc.value.context["file"] == "bad.json"
        assert exc.value.exit_code == 2

    def test_malformed_json_in_bundle(self, tmp_path):
        """Test malformed json in bundle"""
        (tmp_path / "broken.json").write_text("{")
        with pytest.raises(ParseError) as exc:
            aggregate_bundle(str(tmp_path))
        assert exc.value.code == ErrorCode.MALFORMED_JSON
        assert "broken.json" in exc.value.context["file"]

    def test_malformed_checks(self, tmp_path):
        """Test malformed checks"""
        data = suite_output("ruan", ["pass"])
        data["checks"].append("not a check")
        (tmp_path / "odd.json").write_text(json.dumps(data))
        with pytest.raises(ParseError):
            aggregate_bundle(str(tmp_path))


class TestReportGenerator:
    """Test ReportGenerator class"""

    @pytest.fixture
    def generator(self, tmp_path):
        return ReportGenerator(output_dir=str(tmp_path))

    def test_json_is_canonical(self, generator):
        """Test json is canonical"""
        text = generator.render({"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_write_is_readable(self, generator, tmp_path):
        """Test write is readable"""
        path = generator.write({"command": "norm", "lo": 1.0}, "nested/out.json")
        assert path == tmp_path / "nested" / "out.json"
        assert json.loads(path.read_text()) == {"command": "norm", "lo": 1.0}
        assert not [p for p in path.parent.iterdir() if p.name.startswith(".out.json")]

    def test_render_norm(self, generator):
        """Test render norm"""
        data = NormReport(1.0, 1.5, "approximate", 2, {}).to_dict()
        assert "approximate" in generator.render(data, ReportFormat.TEXT)
        assert generator.render(data, ReportFormat.MARKDOWN).startswith("# Norm")

    def test_render_suite(self, generator):
        """Test render suite"""
        data = suite_output("ruan", ["pass", "fail"])
        text = generator.render(data, ReportFormat.TEXT)
        assert "Suite ruan: FAIL" in text
        assert "check_1" in text
        assert "# Suite: ruan" in generator.render(data, ReportFormat.MARKDOWN)

    def test_render_bundle(self, generator, tmp_path):
        """Test render bundle"""
        (tmp_path / "r.json").write_text(json.dumps(suite_output("ruan", ["pass"])))
        data = aggregate_bundle(str(tmp_path)).to_dict()
        assert "1 suite(s)" in generator.render(data, ReportFormat.TEXT)
        assert generator.render(data, "md").startswith("# Bundle")

    def test_write_text(self, generator, tmp_path):
        """Test write text"""
        path = generator.write_text("hello\n", "notes/summary.txt")
        assert path.read_text() == "hello\n"
