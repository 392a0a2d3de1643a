"""Reporting components"""

from .report_generator import (
    BundleSummary,
    NormReport,
    ReportFormat,
    ReportGenerator,
    ReportType,
    SuiteStats,
    aggregate_bundle,
)

__all__ = [
    "BundleSummary",
    "NormReport",
    "ReportFormat",
    "ReportGenerator",
    "ReportType",
    "SuiteStats",
    "aggregate_bundle",
]
