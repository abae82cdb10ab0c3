"""
Base Agent - common surface of the simulate, calibrate, fuse, analyze and
benchmark stages
"""
import asyncio
import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, TypeVar

from ..utils.helpers import format_duration

T = TypeVar("T")


class BaseAgent(ABC):
    """
    One pipeline stage.

    Numerical work lives in plain synchronous methods that the CLI and the
    tests call directly. execute() is the async entry point used by the
    HTTP API and the benchmark orchestrator; it takes and returns a
    context dictionary.
    """

    def __init__(self, name: str, description: str = ""):
        """
        Args:
            name: Stage name, used as the logger suffix and log prefix
            description: One-line purpose
        """
        self.name = name
        self.description = description
        self.logger = logging.getLogger(f"agent.{name}")

    @abstractmethod
    async def execute(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """
        Run the stage on a context dictionary.

        Args:
            context: Stage inputs (scenario, config, measurement lists, ...)

        Returns:
            Stage outputs keyed by name
        """

    async def run_blocking(self, func: Callable[..., T], *args, **kwargs) -> T:
        """Run a CPU-bound stage in a worker thread, logging its runtime at DEBUG."""
        started = time.perf_counter()
        result = await asyncio.to_thread(func, *args, **kwargs)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        self.log_debug(f"{getattr(func, '__name__', 'stage')} finished in {format_duration(elapsed_ms)}")
        return result

    def log_info(self, message: str):
        self.logger.info(f"[{self.name}] {message}")

    def log_warning(self, message: str):
        self.logger.warning(f"[{self.name}] {message}")

    def log_error(self, message: str):
        self.logger.error(f"[{self.name}] {message}")

    def log_debug(self, message: str):
        self.logger.debug(f"[{self.name}] {message}")

    def __repr__(self):
        return f"<{self.__class__.__name__}(name='{self.name}')>"
