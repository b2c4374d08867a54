"""Property checks delegated to the primary toolkit.

The tame solvability property of a ramified place is never re-implemented
here: every (e, q, tame) entry is handed to the `towerforge` command line
as a `property-p` datum and the per-datum verdicts are read back from its
JSON report.  The command is found on PATH (override with
`NFEX_TOWERFORGE`), falling back to the module entry point of the current
interpreter.
"""

import json
import os
import shutil
import subprocess
import sys
from typing import Dict, List, Sequence

from nfexamples.parse import RamEntry

REPORT_SCHEMA_TAG = "towerforge-report/1"


class BridgeError(RuntimeError):
    """The primary command line was unavailable or spoke the wrong contract."""


def towerforge_command() -> List[str]:
    override = os.environ.get("NFEX_TOWERFORGE")
    if override:
        return override.split()
    found = shutil.which("towerforge")
    if found:
        return [found]
    return [sys.executable, "-m", "towerforge.cli"]


def check_property_p(entries: Sequence[RamEntry], timeout: float = 300.0) -> List[Dict]:
    """Per-entry verdict dicts (keys e, q, n, tame, property_p, criterion)."""
    if not entries:
        return []
    data = [
        f"{entry.e},{entry.q},{'tame' if entry.tame else 'wild'}" for entry in entries
    ]
    cmd = towerforge_command() + ["--command", "property-p"] + data
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=timeout, check=False
        )
    except (OSError, subprocess.TimeoutExpired) as ex:
        raise BridgeError(f"cannot run the property-p command: {ex}")
    if proc.returncode not in (0, 1):
        raise BridgeError(
            f"property-p rejected the data (exit {proc.returncode}): "
            f"{proc.stderr.strip()[:300]}"
        )
    try:
        payload = json.loads(proc.stdout)
    except json.JSONDecodeError as ex:
        raise BridgeError(f"property-p emitted invalid JSON: {ex}")
    if payload.get("schema") != REPORT_SCHEMA_TAG:
        raise BridgeError(f"unexpected report schema {payload.get('schema')!r}")
    verdicts = payload.get("results", {}).get("data")
    if not isinstance(verdicts, list) or len(verdicts) != len(entries):
        raise BridgeError("property-p report carries no per-datum verdicts")
    return verdicts
