"""The property-check bridge: real subprocess calls into the primary CLI."""

import pytest

from nfexamples.bridge import BridgeError, check_property_p, towerforge_command
from nfexamples.parse import RamEntry


def entry(e, q, tame=True, label="quartic", prime=2):
    return RamEntry(label, prime, e, q, tame)


class TestBridge:
    def test_empty_profile_needs_no_subprocess(self):
        assert check_property_p([]) == []

    def test_tame_divisor_entries_pass(self):
        verdicts = check_property_p([entry(3, 16), entry(2, 81), entry(4, 81)])
        assert [v["property_p"] for v in verdicts] == [True, True, True]
        assert [v["e"] for v in verdicts] == [3, 2, 4]
        assert [v["q"] for v in verdicts] == [16, 81, 81]

    def test_crafted_failing_fixture(self):
        # ramified with index 2 over residue size 4: 2 does not divide 3
        verdicts = check_property_p([entry(2, 4)])
        assert verdicts[0]["property_p"] is False

    def test_wild_entry_fails(self):
        verdicts = check_property_p([entry(2, 5, tame=False)])
        assert verdicts[0]["property_p"] is False

    def test_mixed_profile_keeps_order(self):
        verdicts = check_property_p([entry(2, 4), entry(3, 16)])
        assert [v["property_p"] for v in verdicts] == [False, True]

    def test_command_override(self, monkeypatch):
        monkeypatch.setenv("NFEX_TOWERFORGE", "my-tool --flag")
        assert towerforge_command() == ["my-tool", "--flag"]

    def test_garbage_command_is_a_bridge_error(self, monkeypatch):
        monkeypatch.setenv("NFEX_TOWERFORGE", "false")
        with pytest.raises(BridgeError, match="invalid JSON"):
            check_property_p([entry(2, 81)])

    def test_missing_command_is_a_bridge_error(self, monkeypatch):
        monkeypatch.setenv("NFEX_TOWERFORGE", "/nonexistent/towerforge")
        with pytest.raises(BridgeError, match="cannot run"):
            check_property_p([entry(2, 81)])
