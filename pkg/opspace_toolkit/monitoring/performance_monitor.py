"""
Performance Monitor
Tracks wall time, CPU time and memory of toolkit commands and suites
"""

import time
import psutil
from typing import Dict, Any, Optional
from contextlib import contextmanager
from collections import defaultdict


class PerformanceMonitor:
    """Monitors command performance"""

    def __init__(self, config, logger):
        """
        Initialize Performance Monitor

        Args:
            config: Configuration object
            logger: Logger object
        """
        self.config = config
        self.logger = logger
        self.metrics = defaultdict(list)
        self.enabled = config.get("performance.monitoring_enabled", True)
        self.duration_warning = float(config.get("performance.duration_warning_seconds", 60))
        self._process = psutil.Process()

    @contextmanager
    def track(self, task_name: str):
        """
        Context manager to track one command or suite run

        Measurements stay in memory and in the log; they never enter JSON
        reports, which must be identical across reruns.

        Args:
            task_name: Name of the tracked task
        """
        if not self.enabled:
            yield
            return

        start_time = time.perf_counter()
        start_cpu = sum(self._process.cpu_times()[:2])
        start_memory = self._process.memory_info().rss / 1024 / 1024  # MB

        try:
            yield
        finally:
            end_memory = self._process.memory_info().rss / 1024 / 1024
            metrics = {
                "task": task_name,
                "duration": time.perf_counter() - start_time,
                "cpu_seconds": sum(self._process.cpu_times()[:2]) - start_cpu,
                "memory_start_mb": start_memory,
                "memory_end_mb": end_memory,
                "memory_delta_mb": end_memory - start_memory,
            }
            self.metrics[task_name].append(metrics)
            self.logger.debug(
                f"{task_name}: {metrics['duration']:.2f}s wall, {metrics['cpu_seconds']:.2f}s cpu"
            )

            if metrics["duration"] > self.duration_warning:
                self.logger.warning(f"{task_name} took {metrics['duration']:.2f}s")

            if metrics["memory_delta_mb"] > 500:
                self.logger.warning(f"{task_name} grew memory by {metrics['memory_delta_mb']:.2f}MB")

    def get_stats(self, task_name: Optional[str] = None) -> Dict[str, Any]:
        """
        Get performance statistics

        Args:
            task_name: Optional task name to filter stats

        Returns:
            Performance statistics
        """
        if task_name:
            if task_name not in self.metrics:
                return {}
            return self._calculate_stats(self.metrics[task_name])

        return {task: self._calculate_stats(entries) for task, entries in self.metrics.items()}

    def _calculate_stats(self, metrics_list: list) -> Dict[str, Any]:
        if not metrics_list:
            return {}

        durations = [m["duration"] for m in metrics_list]
        cpu = [m["cpu_seconds"] for m in metrics_list]
        memory_deltas = [m["memory_delta_mb"] for m in metrics_list]

        return {
            "execution_count": len(metrics_list),
            "avg_duration": sum(durations) / len(durations),
            "min_duration": min(durations),
            "max_duration": max(durations),
            "total_cpu_seconds": sum(cpu),
            "max_memory_delta_mb": max(memory_deltas),
        }

    def get_summary(self) -> Dict[str, Any]:
        """
        Get performance summary

        Returns:
            Summary statistics
        """
        return {
            "tasks_tracked": len(self.metrics),
            "total_executions": sum(len(m) for m in self.metrics.values()),
            "process_memory_mb": self._process.memory_info().rss / 1024 / 1024,
            "system_memory_percent": psutil.virtual_memory().percent,
            "cpu_count": psutil.cpu_count(logical=True),
        }

    def cleanup(self) -> None:
        """Clear collected metrics"""
        self.metrics.clear()
        self.logger.debug("Performance monitor cleanup completed")
