"""
Toolkit
Central orchestration for norm evaluation, verification suites and report bundles
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import Config
from .error_codes import ShapeMismatchError
from .loader import SpecLoader
from .validation import validate_log_level
from ..monitoring.performance_monitor import PerformanceMonitor
from ..reporting.report_generator import BundleSummary, NormReport, ReportGenerator, aggregate_bundle
from ..testing.suites import SUITES, SuiteResult, SuiteRunner
from ..utils.logger import Logger


class OpSpaceToolkit:
    """
    Main toolkit class.
    Wires configuration, logging, loading, suites and reporting together.
    """

    def __init__(self, config_path: Optional[str] = None, **overrides: Any):
        """
        Initialize the toolkit

        Args:
            config_path: Optional path to configuration file
            **overrides: seed, output, level_cap, depth overriding config values
        """
        self.config = Config(config_path)
        level = validate_log_level(self.config.get("logging.level", "WARNING"))
        self.logger = Logger(self.config, level)

        self.run_config = self.config.run_config(**overrides)
        self.budget = self.run_config.budget()
        self.tolerances = self.run_config.tolerance_set()

        self.loader = SpecLoader(self.budget, self.tolerances)
        self.suite_runner = SuiteRunner(self.budget, self.tolerances, self.loader)
        self.performance_monitor = PerformanceMonitor(self.config, self.logger)
        self.report_generator = ReportGenerator()

        self.logger.debug(f"Toolkit initialized (seed {self.budget.seed})")

    def norm(self, space_file: str, element_file: str, level: Optional[int] = None) -> NormReport:
        """
        Level-n norm of an element of a described space

        Args:
            space_file: Space description file
            element_file: Element file
            level: Expected matrix level (defaults to the element's)

        Returns:
            NormReport

        Raises:
            ParseError: If a file does not parse
            ShapeMismatchError: If the element does not fit the space or level
        """
        with self.performance_monitor.track("norm"):
            space = self.loader.load_space(space_file)
            element = self.loader.load_element(element_file, space)
            if level is not None and level != element.level:
                raise ShapeMismatchError(
                    f"element is at level {element.level}, not {level}",
                    {"element_level": element.level, "level": level}
                )
            interval = space.norm(element)

        self.logger.info(f"||x||_{element.level} in {space.name}: [{interval.lo:.12g}, {interval.hi:.12g}]")
        return NormReport(
            interval.lo, interval.hi, interval.status.value, element.level, space.to_dict(),
            {"space": Path(space_file).name, "element": Path(element_file).name}
        )

    def verify(self, suite: str, inputs: Optional[Sequence[str]] = None) -> SuiteResult:
        """
        Run a verification suite

        Raises:
            UnknownSuiteError: If the suite name is not recognized
        """
        with self.performance_monitor.track(f"verify:{suite}"):
            return self.suite_runner.run(suite, inputs)

    def report(self, directory: str) -> BundleSummary:
        """
        Aggregate a directory of run outputs

        Raises:
            EmptyInputError: If the directory holds no run outputs
            ParseError: If a run output is corrupt
        """
        with self.performance_monitor.track("report"):
            return aggregate_bundle(directory)

    def write_output(self, data: Dict[str, Any], path: Optional[str] = None) -> Optional[Path]:
        """Write a JSON run output to path or the configured output, if any"""
        target = path or self.run_config.output
        if not target:
            return None
        written = self.report_generator.write(data, target)
        self.logger.info(f"Wrote {written}")
        return written

    def list_suites(self) -> List[str]:
        return list(SUITES)

    def get_health_status(self) -> Dict[str, Any]:
        """
        Get toolkit status

        Returns:
            Seed, budgets, tolerances, per-task timings and logged warnings
        """
        performance = self.performance_monitor.get_summary()
        performance["tasks"] = self.performance_monitor.get_stats()
        return {
            "status": "healthy",
            "version": self.config.get("toolkit.version"),
            "seed": self.budget.seed,
            "budgets": self.run_config.budgets.model_dump(),
            "tolerances": self.run_config.tolerances.model_dump(),
            "suites": self.list_suites(),
            "performance": performance,
            "warnings": [entry["message"] for entry in self.logger.get_logs(level="WARNING")],
        }

    def cleanup(self) -> None:
        """Cleanup toolkit resources"""
        self.performance_monitor.cleanup()
