"""External engine invocation.

The engine is GP/PARI, located through the `NFEX_GP` environment variable,
an explicit path, or `gp` on PATH.  Scripts are written to a temporary file
and run with a quiet, fast-starting interpreter; the transcript is whatever
the script printed.  All failure modes are distinct exceptions so the
verdict can record them explicitly.
"""

import os
import shutil
import subprocess
import tempfile
from typing import Optional

DEFAULT_TIMEOUT = 6 * 3600  # seconds


class EngineMissing(RuntimeError):
    """No GP interpreter available on this host."""


class EngineTimeout(RuntimeError):
    """The engine exceeded the configured wall-clock budget."""


class EngineFailure(RuntimeError):
    """The engine exited nonzero; carries its stderr."""


def find_engine(explicit: Optional[str] = None) -> Optional[str]:
    for candidate in (explicit, os.environ.get("NFEX_GP")):
        if candidate:
            if shutil.which(candidate):
                return shutil.which(candidate)
            raise EngineMissing(f"engine {candidate!r} is not executable")
    return shutil.which("gp")


def run_engine(script: str, engine_path: str, timeout: float = DEFAULT_TIMEOUT) -> str:
    with tempfile.NamedTemporaryFile(
        "w", suffix=".gp", prefix="nfex_", delete=False
    ) as fh:
        fh.write(script)
        path = fh.name
    try:
        try:
            proc = subprocess.run(
                [engine_path, "-q", "-f", path],
                capture_output=True,
                text=True,
                timeout=timeout,
                stdin=subprocess.DEVNULL,
            )
        except subprocess.TimeoutExpired:
            raise EngineTimeout(f"engine exceeded {timeout:.0f}s")
        if proc.returncode != 0:
            raise EngineFailure(
                f"engine exited {proc.returncode}: {proc.stderr.strip()[:500]}"
            )
        return proc.stdout
    finally:
        os.unlink(path)
