"""Regenerate tests/snapshots/help_<command>.txt at an 80-column terminal."""
import os
import subprocess
import sys
from pathlib import Path

SNAPSHOTS = Path(__file__).resolve().parent.parent / "tests" / "snapshots"
COMMANDS = ("gen", "maxcut", "cuts", "eq", "core", "crit", "hconst", "hfree", "simonovits", "janson", "experiment")

if __name__ == "__main__":
    env = dict(os.environ, COLUMNS="80")
    SNAPSHOTS.mkdir(parents=True, exist_ok=True)
    for cmd in COMMANDS:
        out = subprocess.run([sys.executable, "-m", "rigidcuts", cmd, "--help"], capture_output=True, text=True,
                             env=env, check=True).stdout
        (SNAPSHOTS / f"help_{cmd}.txt").write_text(out)
        print(f"wrote help_{cmd}.txt")
