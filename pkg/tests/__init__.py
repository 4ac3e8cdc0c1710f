from __future__ import annotations

from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"

# scenario files
SCENARIOS_DIR = DATA_DIR / "scenarios"
SHORT_PULSE_SCENARIO = SCENARIOS_DIR / "short-pulse.json"
MINIMAL_SCENARIO = SCENARIOS_DIR / "minimal.json"
INVALID_SCENARIOS_DIR = DATA_DIR / "invalid-scenarios"

# measured tunneling probabilities
TOMOGRAPHY_DIR = DATA_DIR / "tomography"
MEASURED_PROBABILITIES = TOMOGRAPHY_DIR / "measured.csv"
