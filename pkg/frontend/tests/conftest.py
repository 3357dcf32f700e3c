"""Shared fixtures: real CSV artifacts produced by the simulation CLI.

The renderer is exercised against genuine outputs of every experiment verb,
generated once per session with deliberately small parameter sets.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

# cheap configs: one per verb, small enough to run in seconds
VERB_CONFIGS = {
    "simulate": {"N": 32, "t_end": 0.2, "dt": 1e-3, "record_every": 50},
    "mi-region": {"k_points": 16},
    "kmax": {"alpha_points": 4},
    "stationary": {"N": 64},
    "pnb": {"w_points": 5, "eps_points": 5, "N": 32},
    "compare-flows": {"N": 24, "t_end": 0.5, "dt": 5e-3, "record_every": 20},
    "kernel-decay": {"t_values": [5.0, 10.0, 20.0]},
    "unitary-gap": {"alphas": [6.0, 8.0]},
    "mi-pattern": {"N": 32, "t_end": 2.0, "dt": 5e-3, "record_every": 40},
    "mobility": {"N": 64, "t_end": 5.0, "record_every": 50},
}


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    """Run every verb once; return {verb: output directory}."""
    root = tmp_path_factory.mktemp("artifacts")
    dirs = {}
    for verb, params in VERB_CONFIGS.items():
        outdir = root / verb
        cfg = outdir / "config.json"
        outdir.mkdir()
        cfg.write_text(json.dumps({"verb": verb, **params}))
        proc = subprocess.run(
            [sys.executable, "-m", "fdnls.cli", "--config", str(cfg), "--out", str(outdir)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, f"{verb} failed:\n{proc.stderr}"
        dirs[verb] = outdir
    return dirs


@pytest.fixture()
def spec_file(tmp_path):
    """Write a spec dict to disk and return its path."""

    def write(data, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return write
