"""Agents package"""
from .base_agent import BaseAgent
from .simulator_agent import SimulatorAgent
from .calibrator_agent import CalibratorAgent
from .fusion_agent import FusionAgent
from .analyzer_agent import AnalyzerAgent
from .orchestrator_agent import OrchestratorAgent

__all__ = [
    "BaseAgent",
    "SimulatorAgent",
    "CalibratorAgent",
    "FusionAgent",
    "AnalyzerAgent",
    "OrchestratorAgent",
]
