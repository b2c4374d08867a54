"""Transcript parsing against the recorded samples and malformed inputs."""

import pathlib

import pytest

from nfexamples.parse import ParseError, RamEntry, parse_engine_output

DATA = pathlib.Path(__file__).parent / "data"


def load(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


class TestRecordedSamples:
    def test_p5_complete(self):
        result = parse_engine_output(load("p5_complete.txt"))
        assert (result.p, result.grh, result.guard) == (5, True, 96)
        assert result.irreducible == {"octic": True, "quartic": True}
        assert result.closure_degrees == {"octic": 24, "quartic": 12}
        assert result.subfield_ok is True
        assert result.cyclo_degree == 4
        assert result.compositum_degrees == {"quartic": 48, "octic": 96}
        assert result.class_numbers == {"quartic": (1, True), "octic": (1, True)}
        assert result.guard_skipped == {}
        assert result.certified == {}
        assert result.done and result.aborted is None
        assert result.ram_for("quartic") == [
            RamEntry("quartic", 2, 3, 16, True),
            RamEntry("quartic", 3, 2, 81, True),
        ]
        assert result.ram_for("octic") == [
            RamEntry("octic", 2, 3, 16, True),
            RamEntry("octic", 3, 4, 81, True),
        ]

    def test_banner_noise_is_ignored(self):
        text = load("p5_complete.txt")
        assert "GP/PARI CALCULATOR" in text  # noise present in the sample
        parse_engine_output(text)  # and tolerated

    def test_p7_partial(self):
        result = parse_engine_output(load("p7_partial.txt"))
        assert result.p == 7 and result.cyclo_degree == 6
        assert result.compositum_degrees == {"quartic": 72}
        assert result.guard_skipped == {"octic": 144}
        assert result.ram == [RamEntry("quartic", 3, 2, 729, True)]
        assert result.done

    def test_p5_unconditional(self):
        result = parse_engine_output(load("p5_unconditional.txt"))
        assert result.grh is False
        assert result.class_numbers == {"quartic": (1, False), "octic": (1, False)}
        assert result.certified == {"quartic": True, "octic": True}

    def test_reducible_abort(self):
        result = parse_engine_output(load("reducible.txt"))
        assert result.irreducible == {"octic": True, "quartic": False}
        assert result.aborted == "reducible quartic"
        assert not result.done


class TestMalformed:
    def test_truncated_transcript(self):
        with pytest.raises(ParseError, match="truncated"):
            parse_engine_output(load("truncated.txt"))

    def test_no_begin(self):
        with pytest.raises(ParseError, match="begin"):
            parse_engine_output("some banner\nNFEX done\n")

    def test_empty_text(self):
        with pytest.raises(ParseError, match="not an engine transcript"):
            parse_engine_output("")

    def test_duplicate_begin(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX begin p=5 grh=1 guard=96\n"
        with pytest.raises(ParseError, match="duplicate"):
            parse_engine_output(text)

    def test_unknown_key(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX florp 1\nNFEX done\n"
        with pytest.raises(ParseError, match="unknown fact key"):
            parse_engine_output(text)

    def test_unknown_field_label(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX compositum M 48\nNFEX done\n"
        with pytest.raises(ParseError, match="unknown label"):
            parse_engine_output(text)

    def test_short_ram_line(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX ram quartic 2 3\nNFEX done\n"
        with pytest.raises(ParseError, match="ram needs"):
            parse_engine_output(text)

    def test_unramified_ram_entry(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX ram quartic 2 1 16 1\nNFEX done\n"
        with pytest.raises(ParseError, match="e >= 2"):
            parse_engine_output(text)

    def test_fact_after_done(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX done\nNFEX cyclo_degree 4\n"
        with pytest.raises(ParseError, match="closed"):
            parse_engine_output(text)

    def test_class_number_without_mode(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX class_number quartic 1\nNFEX done\n"
        with pytest.raises(ParseError, match="class_number needs"):
            parse_engine_output(text)

    def test_nonpositive_class_number(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX class_number quartic 0 grh=1\nNFEX done\n"
        with pytest.raises(ParseError, match="positive"):
            parse_engine_output(text)

    def test_non_binary_flag(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX irreducible octic 2\nNFEX done\n"
        with pytest.raises(ParseError, match="expected 0 or 1"):
            parse_engine_output(text)

    def test_non_integer_degree(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX closure octic twenty\nNFEX done\n"
        with pytest.raises(ParseError, match="expected an integer"):
            parse_engine_output(text)

    def test_short_fact_line(self):
        text = "NFEX begin p=5 grh=1 guard=96\nNFEX irreducible\nNFEX done\n"
        with pytest.raises(ParseError, match="too few fields"):
            parse_engine_output(text)

    def test_begin_missing_fields(self):
        with pytest.raises(ParseError, match="begin line needs"):
            parse_engine_output("NFEX begin p=5\nNFEX done\n")
