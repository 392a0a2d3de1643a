"""Verification suites"""

from .suites import SUITES, CheckResult, CheckStatus, SuiteResult, SuiteRunner, quotient_oracle

__all__ = ["SUITES", "CheckResult", "CheckStatus", "SuiteResult", "SuiteRunner", "quotient_oracle"]
