"""Scalable cell-free massive MIMO simulation."""

from ._core import (
    AdmissionError,
    Config,
    ConfigError,
    InfeasibleError,
    NumericError,
    Setup,
    build_setup,
    dbm_to_watt,
    parse_config,
    parse_config_text,
    run_campaign,
    run_scenario,
    scenario_names,
    sign_test_threshold,
)

__all__ = [
    "AdmissionError",
    "Config",
    "ConfigError",
    "InfeasibleError",
    "NumericError",
    "Setup",
    "build_setup",
    "dbm_to_watt",
    "parse_config",
    "parse_config_text",
    "run_campaign",
    "run_scenario",
    "scenario_names",
    "sign_test_threshold",
]
