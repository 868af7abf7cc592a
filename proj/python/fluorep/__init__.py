"""Rate and protocol models for fluorescence-readout repeater chains.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its surface. Submodules: ``physics`` (closed-form device physics),
``statesim`` (truncated occupation-basis protocol model), ``rates``
(scheme reduction, analytic rate, fidelity budget), ``montecarlo``
(waiting-time sampling plus the exact two-link oracle), and ``optimizer``
(distance/scheme search and sweeps).
"""

from ._core import (
    ChainConfig,
    Config,
    ConfigError,
    FrequencyUnits,
    LinkParams,
    PhysicalParams,
    RateResult,
    RatesKnobs,
    OptimizerKnobs,
    Scheme,
    SimConfig,
    ValidationReport,
    format_g9,
    load_config,
    load_config_file,
    montecarlo,
    optimizer,
    physics,
    rates,
    scheme_name,
    serialize_config,
    statesim,
    sweep_csv,
    validate,
)

__all__ = [
    "ChainConfig",
    "Config",
    "ConfigError",
    "FrequencyUnits",
    "LinkParams",
    "PhysicalParams",
    "RateResult",
    "RatesKnobs",
    "OptimizerKnobs",
    "Scheme",
    "SimConfig",
    "ValidationReport",
    "format_g9",
    "load_config",
    "load_config_file",
    "montecarlo",
    "optimizer",
    "physics",
    "rates",
    "scheme_name",
    "serialize_config",
    "statesim",
    "sweep_csv",
    "validate",
]
