"""Report rendering: schema contract, determinism, exit codes, and the
delimited/figure outputs."""

import csv
import io
import json

import pytest

from towerforge import report as rp


def sample_report():
    rep = rp.Report("demo", {"seed": 11, "p": 2})
    rep.add("first", True, details="fine", elapsed=0.25)
    rep.add("second", False, details="broken")
    rep.add_skip("third", details="not reachable here")
    rep.add_error("fourth", details="blew up")
    return rep


class TestCheck:
    def test_rejects_unknown_status(self):
        with pytest.raises(ValueError):
            rp.Check("x", "meh")

    def test_add_variants_set_statuses(self):
        rep = sample_report()
        assert [c.status for c in rep.checks] == ["pass", "fail", "skip", "error"]


class TestVerdict:
    def test_empty_report_passes(self):
        rep = rp.Report("empty", {})
        assert rep.verdict() == "pass" and rep.exit_code() == 0

    def test_fail_or_error_fails(self):
        rep = rp.Report("x", {})
        rep.add("a", True)
        assert rep.exit_code() == 0
        rep.add_error("b")
        assert rep.verdict() == "fail" and rep.exit_code() == 1

    def test_skips_do_not_fail(self):
        rep = rp.Report("x", {})
        rep.add_skip("a")
        assert rep.exit_code() == 0

    def test_summary_counts(self):
        counts = sample_report().summary()
        assert counts == {"pass": 1, "fail": 1, "skip": 1, "error": 1}


class TestSchema:
    def test_shipped_schema_loads(self):
        schema = rp.load_schema()
        assert schema["properties"]["schema"]["const"] == "towerforge-report/1"

    def test_sample_report_validates(self):
        rp.validate_report(sample_report().as_json_obj())

    def test_jsonschema_is_available_here(self):
        import jsonschema  # noqa: F401  — the strict validator must be active in CI

    def test_missing_key_is_rejected(self):
        obj = sample_report().as_json_obj()
        del obj["verdict"]
        with pytest.raises(Exception):
            rp.validate_report(obj)

    def test_bad_status_is_rejected(self):
        obj = sample_report().as_json_obj()
        obj["checks"][0]["status"] = "maybe"
        with pytest.raises(Exception):
            rp.validate_report(obj)

    def test_structural_fallback_rejects_malformed_reports(self):
        obj = sample_report().as_json_obj()
        rp._validate_structurally(obj)
        bad = dict(obj)
        bad["schema"] = "towerforge-report/2"
        with pytest.raises(ValueError):
            rp._validate_structurally(bad)

    def test_results_block_is_optional(self):
        rep = rp.Report("x", {})
        rep.results = {"count": 35}
        obj = rep.as_json_obj()
        assert obj["results"] == {"count": 35}
        rp.validate_report(obj)


class TestRenderings:
    def test_json_is_deterministic_and_time_free(self):
        a = rp.render_json(sample_report())
        rep = sample_report()
        rep.checks[0].elapsed = 99.0  # timings must not leak into the JSON
        b = rp.render_json(rep)
        assert a == b
        assert json.loads(a)["verdict"] == "fail"

    def test_json_round_trips_check_ids(self):
        obj = json.loads(rp.render_json(sample_report()))
        assert [c["id"] for c in obj["checks"]] == ["first", "second", "third", "fourth"]

    def test_text_rendering_carries_timings_and_verdict(self):
        text = rp.render_text(sample_report())
        assert "0.250s" in text
        assert "verdict: fail" in text
        assert "[PASS " in text and "[FAIL " in text

    def test_csv_shape(self):
        rows = list(csv.reader(io.StringIO(rp.render_csv(sample_report()))))
        assert rows[0] == ["command", "check", "status", "details"]
        assert len(rows) == 5
        assert rows[2] == ["demo", "second", "fail", "broken"]

    def test_write_reports_produces_all_four_files(self, tmp_path):
        base = tmp_path / "nested" / "out"
        paths = rp.write_reports(sample_report(), str(base))
        assert [p.rsplit(".", 1)[1] for p in paths] == ["json", "txt", "csv", "png"]
        for p in paths:
            with open(p, "rb") as fh:
                blob = fh.read()
            assert blob
        with open(str(base) + ".png", "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"

    def test_figure_alone(self, tmp_path):
        target = tmp_path / "fig.png"
        rp.render_figure(sample_report(), str(target))
        assert target.stat().st_size > 0
