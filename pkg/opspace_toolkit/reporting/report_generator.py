"""
Report Generator
JSON, Markdown and text reports for norm runs, suite runs and run bundles
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from tabulate import tabulate

from ..core.error_codes import EmptyInputError, ErrorCode, ParseError
from ..utils.helpers import dumps_json, load_json, save_json


class ReportFormat(str, Enum):
    """Supported report formats"""
    JSON = "json"
    MARKDOWN = "md"
    TEXT = "txt"


class ReportType(str, Enum):
    """Kinds of run output"""
    NORM = "norm"
    VERIFY = "verify"
    BUNDLE = "bundle"


@dataclass
class NormReport:
    """Level-n norm of one element with the provenance of its space"""
    lo: float
    hi: float
    status: str
    level: int
    space: Dict[str, Any]
    source: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": ReportType.NORM.value,
            "lo": self.lo,
            "hi": self.hi,
            "status": self.status,
            "provenance": {"level": self.level, "space": self.space, "files": self.source},
        }


@dataclass
class SuiteStats:
    """Per-suite statistics over a bundle"""
    suite: str
    runs: int = 0
    failed_runs: int = 0
    passed_checks: int = 0
    failed_checks: int = 0
    undecided_checks: int = 0
    max_residual: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "runs": self.runs,
            "failed_runs": self.failed_runs,
            "passed_checks": self.passed_checks,
            "failed_checks": self.failed_checks,
            "undecided_checks": self.undecided_checks,
            "max_residual": self.max_residual,
        }


@dataclass
class BundleSummary:
    """Aggregation of a directory of run outputs"""
    directory: str
    files: List[str] = field(default_factory=list)
    suites: Dict[str, SuiteStats] = field(default_factory=dict)
    norm_runs: int = 0

    @property
    def failures(self) -> int:
        """Number of suite runs with at least one failed check"""
        return sum(s.failed_runs for s in self.suites.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": ReportType.BUNDLE.value,
            "directory": self.directory,
            "files": self.files,
            "norm_runs": self.norm_runs,
            "suite_count": len(self.suites),
            "failures": self.failures,
            "suites": [self.suites[name].to_dict() for name in sorted(self.suites)],
        }


def _check_rows(checks: List[Dict[str, Any]]) -> List[List[Any]]:
    rows = []
    for c in checks:
        residual = c.get("residual")
        rows.append([
            c.get("name", ""),
            c.get("status", ""),
            "" if residual is None else f"{residual:.3e}",
            c.get("message", ""),
        ])
    return rows


def aggregate_bundle(directory: str) -> BundleSummary:
    """
    Aggregate every JSON run output in a directory

    Files are read in name order, so the summary depends only on the inputs.

    Raises:
        EmptyInputError: If the directory holds no JSON files
        ParseError: If a file is malformed or not a run output (names the file)
    """
    root = Path(directory)
    if not root.is_dir():
        raise EmptyInputError(f"{directory} is not a directory", {"directory": str(directory)})
    paths = sorted(p for p in root.glob("*.json") if p.is_file())
    if not paths:
        raise EmptyInputError(f"No run outputs in {directory}", {"directory": str(directory)})

    summary = BundleSummary(root.name)
    for path in paths:
        data = load_json(str(path))
        if not isinstance(data, dict):
            raise ParseError(f"{path.name} is not a run output", {"file": path.name}, code=ErrorCode.CORRUPT_REPORT)
        summary.files.append(path.name)

        if data.get("command") == ReportType.NORM.value and {"lo", "hi", "status"} <= data.keys():
            summary.norm_runs += 1
            continue
        if "suite" not in data or not isinstance(data.get("checks"), list):
            raise ParseError(f"{path.name} is not a run output", {"file": path.name}, code=ErrorCode.CORRUPT_REPORT)

        stats = summary.suites.setdefault(data["suite"], SuiteStats(data["suite"]))
        stats.runs += 1
        statuses = [c.get("status") for c in data["checks"] if isinstance(c, dict)]
        if len(statuses) != len(data["checks"]):
            raise ParseError(f"{path.name} has malformed checks", {"file": path.name}, code=ErrorCode.CORRUPT_REPORT)
        stats.passed_checks += statuses.count("pass")
        stats.failed_checks += statuses.count("fail")
        stats.undecided_checks += statuses.count("undecided")
        if "fail" in statuses:
            stats.failed_runs += 1
        residuals = [c["residual"] for c in data["checks"] if isinstance(c.get("residual"), (int, float))]
        stats.max_residual = max([stats.max_residual] + residuals)

    return summary


class ReportGenerator:
    """
    Renders run outputs

    JSON is canonical (sorted keys, no timestamps) so identical runs produce
    identical bytes; Markdown and text are human summaries.
    """

    def __init__(self, output_dir: Optional[str] = None):
        """
        Initialize report generator

        Args:
            output_dir: Directory for relative report paths
        """
        self.output_dir = Path(output_dir) if output_dir else None

    def _target(self, path: str) -> Path:
        target = Path(path)
        if self.output_dir is not None and not target.is_absolute():
            target = self.output_dir / target
        return target

    def write(self, data: Dict[str, Any], path: str) -> Path:
        """Write a JSON report atomically"""
        return save_json(data, str(self._target(path)))

    def write_text(self, text: str, path: str) -> Path:
        target = self._target(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        return target

    # Rendering

    def render(self, data: Dict[str, Any], format: ReportFormat = ReportFormat.JSON) -> str:
        """
        Render a run output

        Args:
            data: Output of a norm, verify or report command
            format: Report format

        Returns:
            Rendered text
        """
        format = ReportFormat(format)
        if format == ReportFormat.JSON:
            return dumps_json(data)
        if data.get("command") == ReportType.BUNDLE.value:
            return self._render_bundle(data, format)
        if "suite" in data:
            return self._render_suite(data, format)
        return self._render_norm(data, format)

    def _render_norm(self, data: Dict[str, Any], format: ReportFormat) -> str:
        rows = [["lo", f"{data['lo']:.12g}"], ["hi", f"{data['hi']:.12g}"], ["status", data["status"]]]
        level = data.get("provenance", {}).get("level")
        if level is not None:
            rows.append(["level", level])
        if format == ReportFormat.MARKDOWN:
            return "# Norm\n\n" + tabulate(rows, headers=["Field", "Value"], tablefmt="github") + "\n"
        return tabulate(rows, tablefmt="plain") + "\n"

    def _render_suite(self, data: Dict[str, Any], format: ReportFormat) -> str:
        counts = data.get("counts", {})
        rows = _check_rows(data.get("checks", []))
        headers = ["Check", "Status", "Residual", "Message"]
        status = data.get("status", "").upper()
        if format == ReportFormat.MARKDOWN:
            return (
                f"# Suite: {data['suite']}\n\n"
                f"**Status**: {status}  \n"
                f"**Seed**: {data.get('seed')}  \n"
                f"**Passed / Failed / Undecided**: {counts.get('pass', 0)} / {counts.get('fail', 0)} / {counts.get('undecided', 0)}\n\n"
                + tabulate(rows, headers=headers, tablefmt="github") + "\n"
            )
        return (
            f"Suite {data['suite']}: {status} "
            f"({counts.get('pass', 0)} passed, {counts.get('fail', 0)} failed, {counts.get('undecided', 0)} undecided)\n"
            + tabulate(rows, headers=headers, tablefmt="simple") + "\n"
        )

    def _render_bundle(self, data: Dict[str, Any], format: ReportFormat) -> str:
        headers = ["Suite", "Runs", "Failed runs", "Pass", "Fail", "Undecided", "Max residual"]
        rows = [
            [s["suite"], s["runs"], s["failed_runs"], s["passed_checks"], s["failed_checks"], s["undecided_checks"], f"{s['max_residual']:.3e}"]
            for s in data.get("suites", [])
        ]
        head = f"{data['suite_count']} suite(s), {data['failures']} failing run(s), {data['norm_runs']} norm run(s)"
        if format == ReportFormat.MARKDOWN:
            return f"# Bundle: {data['directory']}\n\n{head}\n\n" + tabulate(rows, headers=headers, tablefmt="github") + "\n"
        return f"Bundle {data['directory']}: {head}\n" + tabulate(rows, headers=headers, tablefmt="simple") + "\n"
