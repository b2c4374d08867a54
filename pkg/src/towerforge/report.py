"""Verification reports: one JSON contract, three renderings beside it.

A report is a list of named checks with pass/fail/skip/error statuses.  The
JSON rendering is the machine contract (schema `towerforge-report/1`,
shipped as package data) and is byte-deterministic for a fixed command and
seed: keys are sorted, separators fixed, and wall-clock timings are kept
out of it.  The text rendering carries the timings; the CSV rendering is
one delimited row per check; the figure rendering is a PNG bar chart of
check outcomes.
"""

import csv
import io
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional

__all__ = [
    "Check",
    "Report",
    "load_schema",
    "validate_report",
    "render_json",
    "render_text",
    "render_csv",
    "render_figure",
    "write_reports",
]

STATUSES = ("pass", "fail", "skip", "error")


@dataclass
class Check:
    """One named verification with its outcome."""

    id: str
    status: str
    details: str = ""
    elapsed: float = 0.0

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown check status {self.status!r}")


@dataclass
class Report:
    command: str
    parameters: Dict
    checks: List[Check] = field(default_factory=list)
    results: Optional[Dict] = None

    def add(self, check_id: str, ok: bool, details: str = "", elapsed: float = 0.0) -> Check:
        check = Check(check_id, "pass" if ok else "fail", details, elapsed)
        self.checks.append(check)
        return check

    def add_skip(self, check_id: str, details: str = "") -> Check:
        check = Check(check_id, "skip", details)
        self.checks.append(check)
        return check

    def add_error(self, check_id: str, details: str = "") -> Check:
        check = Check(check_id, "error", details)
        self.checks.append(check)
        return check

    def summary(self) -> Dict[str, int]:
        counts = {status: 0 for status in STATUSES}
        for check in self.checks:
            counts[check.status] += 1
        return counts

    def verdict(self) -> str:
        counts = self.summary()
        return "pass" if counts["fail"] == 0 and counts["error"] == 0 else "fail"

    def exit_code(self) -> int:
        return 0 if self.verdict() == "pass" else 1

    def as_json_obj(self) -> Dict:
        obj = {
            "schema": "towerforge-report/1",
            "command": self.command,
            "parameters": self.parameters,
            "checks": [
                {"id": c.id, "status": c.status, "details": c.details} for c in self.checks
            ],
            "summary": self.summary(),
            "verdict": self.verdict(),
        }
        if self.results is not None:
            obj["results"] = self.results
        return obj


def load_schema() -> Dict:
    with resources.files("towerforge").joinpath("report_schema.json").open("rb") as fh:
        return json.load(fh)


def validate_report(obj: Dict) -> None:
    """Validate a report object against the shipped schema.

    Uses jsonschema when importable and a structural fallback otherwise, so
    the contract is enforced even in minimal environments.
    """
    try:
        import jsonschema
    except ImportError:
        _validate_structurally(obj)
        return
    jsonschema.validate(obj, load_schema())


def _validate_structurally(obj: Dict) -> None:
    required = {"schema", "command", "parameters", "checks", "summary", "verdict"}
    missing = required - set(obj)
    if missing:
        raise ValueError(f"report is missing keys: {sorted(missing)}")
    if obj["schema"] != "towerforge-report/1":
        raise ValueError("unknown report schema tag")
    for check in obj["checks"]:
        if set(check) != {"id", "status", "details"} or check["status"] not in STATUSES:
            raise ValueError(f"malformed check record: {check}")
    if obj["verdict"] not in ("pass", "fail"):
        raise ValueError("malformed verdict")


def render_json(report: Report) -> str:
    obj = report.as_json_obj()
    validate_report(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2) + "\n"


def render_text(report: Report) -> str:
    lines = [f"towerforge report — {report.command}"]
    if report.parameters:
        params = ", ".join(f"{k}={report.parameters[k]}" for k in sorted(report.parameters))
        lines.append(f"parameters: {params}")
    lines.append("checks:")
    for check in report.checks:
        stamp = f" ({check.elapsed:.3f}s)" if check.elapsed else ""
        detail = f" — {check.details}" if check.details else ""
        lines.append(f"  [{check.status.upper():5s}] {check.id}{stamp}{detail}")
    counts = report.summary()
    lines.append(
        "summary: "
        + ", ".join(f"{counts[status]} {status}" for status in STATUSES)
    )
    lines.append(f"verdict: {report.verdict()}")
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["command", "check", "status", "details"])
    for check in report.checks:
        writer.writerow([report.command, check.id, check.status, check.details])
    return buf.getvalue()


def render_figure(report: Report, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts = report.summary()
    colors = {"pass": "#2a9d3f", "fail": "#c8321e", "skip": "#8a8a8a", "error": "#b06000"}
    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    xs = range(len(STATUSES))
    ax.bar(xs, [counts[s] for s in STATUSES], color=[colors[s] for s in STATUSES])
    ax.set_xticks(list(xs))
    ax.set_xticklabels(STATUSES)
    ax.set_ylabel("checks")
    ax.set_title(f"{report.command}: {report.verdict()}")
    for x, status in zip(xs, STATUSES):
        if counts[status]:
            ax.text(x, counts[status], str(counts[status]), ha="center", va="bottom")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def write_reports(report: Report, output_base: str) -> List[str]:
    """Write the JSON, text, CSV and PNG renderings next to `output_base`."""
    parent = os.path.dirname(output_base)
    if parent:
        os.makedirs(parent, exist_ok=True)
    paths = []
    for suffix, text in (
        (".json", render_json(report)),
        (".txt", render_text(report)),
        (".csv", render_csv(report)),
    ):
        path = output_base + suffix
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        paths.append(path)
    png = output_base + ".png"
    render_figure(report, png)
    paths.append(png)
    return paths
