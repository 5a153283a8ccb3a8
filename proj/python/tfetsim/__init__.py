"""Python bindings for the tfetsim tunnel FET simulator."""

import os
from pathlib import Path

_data = Path(__file__).with_name("data")
if "TFETSIM_DATA_DIR" not in os.environ and (_data / "materials.json").exists():
    os.environ["TFETSIM_DATA_DIR"] = str(_data)

from ._core import (  # noqa: E402
    ConfigError,
    IoError,
    NumericalError,
    barrier_transmission,
    fd_half,
    fd_half_neg,
    resolved_config,
    run_sweep,
    version,
)

__all__ = [
    "ConfigError",
    "IoError",
    "NumericalError",
    "barrier_transmission",
    "fd_half",
    "fd_half_neg",
    "resolved_config",
    "run_sweep",
    "version",
]
