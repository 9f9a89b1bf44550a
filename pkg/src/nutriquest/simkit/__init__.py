"""Seeded synthetic cohorts, measurement streams, and trial scores."""

from .config import SIM_DEFAULTS, Bump, SimConfig, TRIAL_PARAMS
from .measurements import SimulatedStream, simulate_measurements
from .population import field_z, generate_population
from .trial import expected_se, simulate_trial, trial_to_csv

__all__ = [
    "SIM_DEFAULTS", "Bump", "SimConfig", "TRIAL_PARAMS", "SimulatedStream",
    "simulate_measurements", "field_z", "generate_population", "expected_se",
    "simulate_trial", "trial_to_csv",
]
