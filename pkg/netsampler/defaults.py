"""
Default registry for every tunable knob.

Maps knob names to default values. Override any knob via env var:
  NETSAMPLER_FRACTION=0.2       # sample 20% of the nodes
  NETSAMPLER_RUNS=10            # quick runs while iterating
  NETSAMPLER_LEDGER_PATH=off    # disable the timing ledger

Run-config files and CLI flags take precedence over both.
"""

import os

DEFAULTS: dict[str, str] = {
    "fraction":           "0.15",
    "runs":               "100",
    "forward_burning_p":  "0.7",
    "flyback_c":          "0.15",
    "stall_factor":       "100",
    "induction_fraction": "1.0",
    "significance":       "0.05",
    "workers":            "1",
    "output_dir":         "results",
    "ledger_path":        os.path.join(os.path.dirname(__file__), "data", "ledger.db"),
}


def get_default(name: str) -> str:
    """Return the default for name, respecting env-var overrides."""
    env_key = f"NETSAMPLER_{name.upper()}"
    override = os.environ.get(env_key)
    if override:
        return override
    if name not in DEFAULTS:
        raise ValueError(f"Unknown setting: {name!r}. Valid settings: {list(DEFAULTS)}")
    return DEFAULTS[name]


def get_float(name: str) -> float:
    return float(get_default(name))


def get_int(name: str) -> int:
    return int(get_default(name))
