"""Engine discovery and subprocess plumbing, exercised with stand-in binaries."""

import os
import stat

import pytest

from nfexamples import engine


def make_executable(path, body: str) -> str:
    path.write_text(body)
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return str(path)


@pytest.fixture
def echo_engine(tmp_path):
    # ignores the -q -f flags and prints the script file itself
    return make_executable(
        tmp_path / "fakegp", "#!/bin/sh\nshift 2\nexec cat \"$1\"\n"
    )


class TestFindEngine:
    def test_explicit_path_wins(self, echo_engine, monkeypatch):
        monkeypatch.delenv("NFEX_GP", raising=False)
        assert engine.find_engine(echo_engine) == echo_engine

    def test_explicit_missing_raises(self, monkeypatch):
        monkeypatch.delenv("NFEX_GP", raising=False)
        with pytest.raises(engine.EngineMissing, match="not executable"):
            engine.find_engine("/nonexistent/gp")

    def test_environment_override(self, echo_engine, monkeypatch):
        monkeypatch.setenv("NFEX_GP", echo_engine)
        assert engine.find_engine() == echo_engine

    def test_absent_engine_is_none(self, tmp_path, monkeypatch):
        monkeypatch.delenv("NFEX_GP", raising=False)
        monkeypatch.setenv("PATH", str(tmp_path))
        assert engine.find_engine() is None


class TestRunEngine:
    def test_transcript_comes_back(self, echo_engine):
        script = "NFEX begin p=5 grh=1 guard=96\nNFEX done\n"
        assert engine.run_engine(script, echo_engine, timeout=10) == script

    def test_timeout_is_reported(self, tmp_path):
        sleeper = make_executable(tmp_path / "slowgp", "#!/bin/sh\nsleep 5\n")
        with pytest.raises(engine.EngineTimeout, match="exceeded"):
            engine.run_engine("x", sleeper, timeout=0.2)

    def test_nonzero_exit_is_reported(self, tmp_path):
        crasher = make_executable(
            tmp_path / "badgp", "#!/bin/sh\necho boom >&2\nexit 3\n"
        )
        with pytest.raises(engine.EngineFailure, match="exited 3: boom"):
            engine.run_engine("x", crasher, timeout=10)

    def test_script_file_is_cleaned_up(self, echo_engine, tmp_path, monkeypatch):
        monkeypatch.setenv("TMPDIR", str(tmp_path))
        engine.run_engine("NFEX done\n", echo_engine, timeout=10)
        assert not [p for p in os.listdir(tmp_path) if p.startswith("nfex_")]

    def test_default_budget_is_six_hours(self):
        assert engine.DEFAULT_TIMEOUT == 6 * 3600
