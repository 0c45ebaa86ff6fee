"""Scenario configs, runnable recipes, derived analyses and CSV output."""
from .analysis import (
    FitResult,
    first_burst_peak,
    fit_decay_rate,
    fit_peak_scaling,
    predicted_max_coherence,
    saturation_time,
)
from .config import SCENARIOS, ScenarioConfig, emit_config, load_config, parse_config
from .scenarios import Check, Job, ScenarioResult, expand_jobs, run_scenario, simulate, trotter_error_report

__all__ = [
    "Check",
    "FitResult",
    "Job",
    "SCENARIOS",
    "ScenarioConfig",
    "ScenarioResult",
    "emit_config",
    "expand_jobs",
    "first_burst_peak",
    "fit_decay_rate",
    "fit_peak_scaling",
    "load_config",
    "parse_config",
    "predicted_max_coherence",
    "run_scenario",
    "saturation_time",
    "simulate",
    "trotter_error_report",
]
