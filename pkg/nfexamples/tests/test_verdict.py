"""Verdict assembly: scoring parsed transcripts in the shared report shape."""

import json
import pathlib

import jsonschema
import pytest

from nfexamples.bridge import BridgeError
from nfexamples.examples import BUILTIN_EXAMPLES
from nfexamples.parse import parse_engine_output
from nfexamples.verdict import (
    VerdictBuilder,
    assemble_verdict,
    error_verdict,
    exit_code,
    load_shared_schema,
    render_json,
    validate_report,
)

DATA = pathlib.Path(__file__).parent / "data"


def parsed(name: str):
    return parse_engine_output((DATA / name).read_text(encoding="utf-8"))


def statuses(report):
    return {c["id"]: c["status"] for c in report["checks"]}


class TestCompleteRun:
    def test_p5_all_checks_pass(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_complete.txt"))
        assert report["verdict"] == "pass"
        assert set(statuses(report).values()) == {"pass"}
        assert report["results"]["status"] == "complete"
        assert report["results"]["class_numbers"] == {"quartic": 1, "octic": 1}
        assert report["results"]["ramified_places"] == {"quartic": 2, "octic": 2}
        validate_report(report)

    def test_report_matches_the_shared_schema_exactly(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_complete.txt"))
        schema = load_shared_schema()
        assert schema["$id"] == "towerforge-report/1"
        jsonschema.validate(report, schema)

    def test_rendering_is_deterministic(self):
        a = render_json(assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_complete.txt")))
        b = render_json(assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_complete.txt")))
        assert a == b
        assert a.endswith("\n")
        assert json.loads(a)["schema"] == "towerforge-report/1"

    def test_unconditional_mode_is_recorded(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_unconditional.txt"))
        assert report["verdict"] == "pass"
        detail = {c["id"]: c["details"] for c in report["checks"]}
        assert "unconditional, certified=True" in detail["class-number-quartic-coprime"]
        assert report["results"]["grh"] is False


class TestPartialRun:
    def test_p7_guard_skip_is_partial_not_failing(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[7], parsed("p7_partial.txt"))
        assert report["verdict"] == "pass"
        assert report["results"]["status"] == "partial"
        assert report["results"]["guard_skipped"] == {"octic": 144}
        st = statuses(report)
        assert st["compositum-octic"] == "skip"
        assert st["class-number-octic-coprime"] == "skip"
        assert st["property-octic"] == "skip"
        assert st["compositum-quartic"] == "pass"
        assert st["property-quartic"] == "pass"
        assert report["summary"]["skip"] == 3


class TestFailures:
    def test_bad_ramification_fails_the_property_check(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_badram.txt"))
        assert report["verdict"] == "fail"
        st = statuses(report)
        assert st["property-quartic"] == "fail"
        detail = {c["id"]: c["details"] for c in report["checks"]}
        assert "(e=2, q=4)" in detail["property-quartic"]
        # everything else about that transcript is fine
        assert st["class-number-quartic-coprime"] == "pass"
        # octic reported no ramified places: vacuous pass
        assert st["property-octic"] == "pass"
        assert "vacuous" in detail["property-octic"]

    def test_reducible_polynomial_is_an_error_verdict(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parsed("reducible.txt"))
        assert report["verdict"] == "fail"
        st = statuses(report)
        assert st["quartic-irreducible"] == "error"
        assert st["octic-irreducible"] == "pass"
        assert st["engine-transcript"] == "error"
        assert report["results"]["status"] == "aborted"
        validate_report(report)

    def test_transcript_for_the_wrong_prime(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[7], parsed("p5_complete.txt"))
        assert report["verdict"] == "fail"
        assert statuses(report)["engine-transcript"] == "error"

    def test_mode_mismatch(self):
        report = assemble_verdict(
            BUILTIN_EXAMPLES[5], parsed("p5_complete.txt"), use_grh=False
        )
        assert statuses(report)["engine-mode"] == "error"

    def test_missing_sections_are_errors(self):
        text = (
            "NFEX begin p=5 grh=1 guard=96\n"
            "NFEX irreducible octic 1\nNFEX irreducible quartic 1\nNFEX done\n"
        )
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parse_engine_output(text))
        st = statuses(report)
        assert st["octic-closure"] == "error"
        assert st["cyclotomic-degree"] == "error"
        assert st["compositum-quartic"] == "error"
        assert report["verdict"] == "fail"

    def test_bridge_failure_is_an_error_check(self):
        def broken(entries):
            raise BridgeError("no primary toolkit")

        report = assemble_verdict(
            BUILTIN_EXAMPLES[5], parsed("p5_complete.txt"), property_checker=broken
        )
        st = statuses(report)
        assert st["property-quartic"] == "error"
        assert st["property-octic"] == "error"
        assert report["verdict"] == "fail"


class TestBuilderAndHelpers:
    def test_error_verdict_is_schema_valid(self):
        report = error_verdict({"p": 5}, "engine-available", "no GP interpreter found")
        validate_report(report)
        assert report["verdict"] == "fail"
        assert exit_code(report) == 1

    def test_exit_code_of_a_pass(self):
        report = assemble_verdict(BUILTIN_EXAMPLES[5], parsed("p5_complete.txt"))
        assert exit_code(report) == 0

    def test_builder_rejects_unknown_status(self):
        builder = VerdictBuilder("verify-example", {})
        with pytest.raises(ValueError, match="unknown status"):
            builder.add("x", "maybe", "")

    def test_summary_counts(self):
        builder = VerdictBuilder("verify-example", {})
        builder.add("a", "pass", "")
        builder.add("b", "skip", "")
        builder.add("c", "fail", "")
        report = builder.finish()
        assert report["summary"] == {"pass": 1, "fail": 1, "skip": 1, "error": 0}
        assert report["verdict"] == "fail"
        validate_report(report)
