"""Verdict assembly in the shared report contract.

Reports use the same `towerforge-report/1` JSON shape as the primary
command line, validated against the schema file shipped inside the
installed `towerforge` distribution (located without importing its code).
A verdict fails if any check fails or errors; checks skipped behind the
degree guard mark the run `partial` in the results block without failing
it.  JSON rendering is byte-deterministic: sorted keys, fixed separators,
no timings.
"""

import importlib.util
import json
import os
from typing import Callable, Dict, List, Optional, Sequence

from nfexamples.bridge import REPORT_SCHEMA_TAG, BridgeError, check_property_p
from nfexamples.examples import ExampleSpec
from nfexamples.parse import EngineResult, RamEntry

STATUSES = ("pass", "fail", "skip", "error")
FIELD_LABELS = ("quartic", "octic")


def shared_schema_path() -> str:
    spec = importlib.util.find_spec("towerforge")
    if spec is None or not spec.submodule_search_locations:
        raise RuntimeError("the towerforge distribution is not installed")
    return os.path.join(list(spec.submodule_search_locations)[0], "report_schema.json")


def load_shared_schema() -> dict:
    with open(shared_schema_path(), "r", encoding="utf-8") as fh:
        return json.load(fh)


class VerdictBuilder:
    def __init__(self, command: str, parameters: Dict):
        self.command = command
        self.parameters = parameters
        self.checks: List[Dict] = []
        self.results: Dict = {}

    def add(self, check_id: str, status: str, details: str) -> None:
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        self.checks.append({"id": check_id, "status": status, "details": details})

    def ok(self, check_id: str, good: bool, details: str) -> None:
        self.add(check_id, "pass" if good else "fail", details)

    def finish(self) -> dict:
        summary = {s: 0 for s in STATUSES}
        for check in self.checks:
            summary[check["status"]] += 1
        verdict = "fail" if summary["fail"] or summary["error"] else "pass"
        report = {
            "schema": REPORT_SCHEMA_TAG,
            "command": self.command,
            "parameters": self.parameters,
            "checks": self.checks,
            "summary": summary,
            "verdict": verdict,
        }
        if self.results:
            report["results"] = self.results
        return report


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ": "), indent=2) + "\n"


def validate_report(report: dict) -> None:
    """Schema validation; structural fallback when jsonschema is absent."""
    try:
        import jsonschema
    except ImportError:
        jsonschema = None
    if jsonschema is not None:
        jsonschema.validate(report, load_shared_schema())
        return
    required = {"schema", "command", "parameters", "checks", "summary", "verdict"}
    if not required <= set(report):
        raise ValueError(f"report is missing {sorted(required - set(report))}")
    if report["schema"] != REPORT_SCHEMA_TAG:
        raise ValueError(f"wrong schema tag {report['schema']!r}")
    for check in report["checks"]:
        if check["status"] not in STATUSES:
            raise ValueError(f"bad check status {check['status']!r}")


def error_verdict(parameters: Dict, check_id: str, details: str) -> dict:
    """A one-check error report for conditions outside the engine transcript
    (missing engine, timeout, engine crash)."""
    builder = VerdictBuilder("verify-example", parameters)
    builder.add(check_id, "error", details)
    return builder.finish()


def exit_code(report: dict) -> int:
    return 0 if report["verdict"] == "pass" else 1


def _mode_text(grh: bool, certified: Optional[bool]) -> str:
    mode = "GRH-conditional" if grh else "unconditional"
    if certified is not None:
        mode += f", certified={certified}"
    return mode


def assemble_verdict(
    spec: ExampleSpec,
    result: EngineResult,
    use_grh: Optional[bool] = None,
    property_checker: Callable[[Sequence[RamEntry]], List[Dict]] = check_property_p,
) -> dict:
    """Score one parsed engine transcript against the example's expectations."""
    builder = VerdictBuilder(
        "verify-example",
        {"p": spec.p, "grh": result.grh, "degree_guard": result.guard},
    )
    if result.p != spec.p:
        builder.add(
            "engine-transcript",
            "error",
            f"transcript is for p={result.p}, expected p={spec.p}",
        )
        return builder.finish()
    if use_grh is not None and result.grh != use_grh:
        builder.add(
            "engine-mode",
            "error",
            f"transcript ran grh={result.grh}, requested grh={use_grh}",
        )
        return builder.finish()

    for label in ("octic", "quartic"):
        flag = result.irreducible.get(label)
        if flag is None:
            builder.add(f"{label}-irreducible", "error", "not reported by the engine")
        elif flag:
            builder.add(f"{label}-irreducible", "pass", "irreducible over the rationals")
        else:
            builder.add(
                f"{label}-irreducible",
                "error",
                "reducible defining polynomial: precondition violated",
            )
    if result.aborted:
        builder.add("engine-transcript", "error", f"engine aborted: {result.aborted}")
        builder.results = {"status": "aborted"}
        return builder.finish()

    expected_closures = {
        "octic": spec.expected_octic_closure_degree,
        "quartic": spec.expected_quartic_closure_degree,
    }
    for label, expected in expected_closures.items():
        got = result.closure_degrees.get(label)
        if got is None:
            builder.add(f"{label}-closure", "error", "closure degree not reported")
        else:
            builder.ok(
                f"{label}-closure",
                got == expected,
                f"splitting field degree {got}, expected {expected}",
            )
    if result.subfield_ok is None:
        builder.add("quartic-closure-inside-octic-closure", "error", "not reported")
    else:
        builder.ok(
            "quartic-closure-inside-octic-closure",
            result.subfield_ok,
            "the small closure embeds into the big one"
            if result.subfield_ok
            else "no embedding of the small closure into the big one",
        )
    if result.cyclo_degree is None:
        builder.add("cyclotomic-degree", "error", "not reported")
    else:
        builder.ok(
            "cyclotomic-degree",
            result.cyclo_degree == spec.cyclotomic_degree,
            f"degree {result.cyclo_degree}, expected {spec.cyclotomic_degree}",
        )

    partial = False
    class_numbers: Dict[str, int] = {}
    ramified_counts: Dict[str, int] = {}
    for label in FIELD_LABELS:
        if label in result.guard_skipped:
            partial = True
            potential = result.guard_skipped[label]
            detail = f"potential degree {potential} exceeds the guard {result.guard}"
            builder.add(f"compositum-{label}", "skip", detail)
            builder.add(f"class-number-{label}-coprime", "skip", detail)
            builder.add(f"property-{label}", "skip", detail)
            continue
        degree = result.compositum_degrees.get(label)
        expected = spec.expected_compositum_degree(label)
        if degree is None:
            builder.add(f"compositum-{label}", "error", "degree not reported")
        else:
            builder.ok(
                f"compositum-{label}",
                degree == expected,
                f"compositum degree {degree}, expected {expected}",
            )
        entry = result.class_numbers.get(label)
        if entry is None:
            builder.add(f"class-number-{label}-coprime", "error", "not reported")
        else:
            h, grh_flag = entry
            class_numbers[label] = h
            builder.ok(
                f"class-number-{label}-coprime",
                h % spec.p != 0,
                f"h = {h}, p = {spec.p} "
                f"({_mode_text(grh_flag, result.certified.get(label))})",
            )
        entries = result.ram_for(label)
        ramified_counts[label] = len(entries)
        try:
            verdicts = property_checker(entries)
        except BridgeError as ex:
            builder.add(f"property-{label}", "error", str(ex))
            continue
        if not entries:
            builder.add(
                f"property-{label}",
                "pass",
                "unramified over the cyclotomic base: vacuously satisfied",
            )
            continue
        bad = [
            f"(e={e.e}, q={e.q})"
            for e, v in zip(entries, verdicts)
            if not v.get("property_p")
        ]
        builder.ok(
            f"property-{label}",
            not bad,
            f"all {len(entries)} ramified places satisfy the tame solvability property"
            if not bad
            else f"failing places: {', '.join(bad)}",
        )

    builder.results = {
        "status": "partial" if partial else "complete",
        "grh": result.grh,
        "class_numbers": class_numbers,
        "ramified_places": ramified_counts,
        "guard_skipped": dict(result.guard_skipped),
    }
    return builder.finish()
