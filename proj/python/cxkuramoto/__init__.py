"""Controlled complex-valued Kuramoto networks.

Thin wrapper over the C++ core: seeded networks, the closed-loop simulator,
scenario presets and the gain-condition helpers.
"""

import json as _json
from pathlib import Path as _Path

from . import _core
from ._core import (
    AcceptanceError,
    ConfigError,
    IoError,
    SimulationError,
    csign,
    erdos_renyi,
    gain_threshold,
    matexp,
    order_parameter,
    preset_names,
    reaching_bound_complex_smc,
    reaching_bound_ff_smc,
    roberts_spectrum,
)

__all__ = [
    "AcceptanceError",
    "ConfigError",
    "IoError",
    "SimulationError",
    "csign",
    "erdos_renyi",
    "execute",
    "gain_threshold",
    "matexp",
    "order_parameter",
    "preset",
    "preset_names",
    "reaching_bound_complex_smc",
    "reaching_bound_ff_smc",
    "roberts_spectrum",
    "run",
    "scenario_hash",
]


def preset(name):
    """Scenario document of a built-in preset, as a dict."""
    return _json.loads(_core.preset_document(name))


def _text(scenario):
    return scenario if isinstance(scenario, str) else _json.dumps(scenario)


def scenario_hash(scenario, base_dir=""):
    return _core.scenario_hash(_text(scenario), str(base_dir))


def execute(scenario, base_dir=""):
    """Run a scenario (dict or JSON text) in memory.

    Returns a dict of numpy arrays (times, states, unwrapped_args, r_mod,
    optionally e_abs and real_phases, adjacency, omega) plus the parsed
    summary under "summary".
    """
    out = _core.execute(_text(scenario), str(base_dir))
    out["summary"] = _json.loads(out["summary"])
    return out


def run(scenario, outdir, base_dir=""):
    """Run a scenario and write its artifacts to outdir; returns the summary."""
    _Path(outdir).mkdir(parents=True, exist_ok=True)
    return _json.loads(_core.run_scenario(_text(scenario), str(outdir), str(base_dir)))
