"""Scenario loading, random instances, theorem verification and reports."""

from .fixtures import FIXTURES, fixture, fixtures, random_instance, random_scenario
from .report import run_report, to_csv, to_markdown, verify_all
from .scenario import Scenario, Tolerance, load_scenarios, scenario_from_payload
from .verify import (
    MODES,
    BoundReport,
    BoundRow,
    hammerstein_factors,
    verify,
    verify_hammerstein,
    verify_nemytskii,
    verify_urysohn,
)

__all__ = [
    "FIXTURES", "fixture", "fixtures", "random_instance", "random_scenario",
    "run_report", "to_csv", "to_markdown", "verify_all",
    "Scenario", "Tolerance", "load_scenarios", "scenario_from_payload",
    "MODES", "BoundReport", "BoundRow", "hammerstein_factors",
    "verify", "verify_hammerstein", "verify_nemytskii", "verify_urysohn",
]
