"""Monitoring components"""

from .performance_monitor import PerformanceMonitor

__all__ = ["PerformanceMonitor"]
