"""Engine transcript parsing.

Transcripts are scored line by line: lines starting with `NFEX ` carry
facts in a fixed vocabulary, anything else is engine noise and is ignored.
A transcript is complete when it ends in `done` or in an explicit `abort`;
anything else (a crash, a timeout, a truncated pipe) raises `ParseError`,
as does an unknown fact key or a malformed field — the parser would rather
fail loudly than score a transcript it does not fully understand.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

# the two scored fields are named for the polynomial whose splitting field
# they compose with the cyclotomic base
FIELD_LABELS = ("quartic", "octic")
POLY_LABELS = ("octic", "quartic")


class ParseError(ValueError):
    """Malformed or incomplete engine transcript."""


@dataclass(frozen=True)
class RamEntry:
    """One ramified place: field label, rational prime, relative index,
    residue size in the base subfield, tameness flag."""

    field_label: str
    rational_prime: int
    e: int
    q: int
    tame: bool


@dataclass
class EngineResult:
    p: int
    grh: bool
    guard: int
    irreducible: Dict[str, bool] = field(default_factory=dict)
    closure_degrees: Dict[str, int] = field(default_factory=dict)
    subfield_ok: Optional[bool] = None
    cyclo_degree: Optional[int] = None
    compositum_degrees: Dict[str, int] = field(default_factory=dict)
    guard_skipped: Dict[str, int] = field(default_factory=dict)
    class_numbers: Dict[str, Tuple[int, bool]] = field(default_factory=dict)
    certified: Dict[str, bool] = field(default_factory=dict)
    ram: List[RamEntry] = field(default_factory=list)
    aborted: Optional[str] = None
    done: bool = False

    def ram_for(self, field_label: str) -> List[RamEntry]:
        return [r for r in self.ram if r.field_label == field_label]


def _int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {token!r}")


def _flag(token: str, what: str) -> bool:
    value = _int(token, what)
    if value not in (0, 1):
        raise ParseError(f"{what}: expected 0 or 1, got {token!r}")
    return bool(value)


def _label(token: str, allowed: Tuple[str, ...], what: str) -> str:
    if token not in allowed:
        raise ParseError(f"{what}: unknown label {token!r}")
    return token


def _parse_begin(fields: List[str]) -> Tuple[int, bool, int]:
    pairs = dict(f.split("=", 1) for f in fields if "=" in f)
    if set(pairs) != {"p", "grh", "guard"}:
        raise ParseError(f"begin line needs p=, grh=, guard=; got {fields!r}")
    return (
        _int(pairs["p"], "begin p"),
        _flag(pairs["grh"], "begin grh"),
        _int(pairs["guard"], "begin guard"),
    )


def parse_engine_output(text: str) -> EngineResult:
    result: Optional[EngineResult] = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line.startswith("NFEX "):
            continue
        tokens = line.split()
        key, fields = tokens[1], tokens[2:]
        if key == "begin":
            if result is not None:
                raise ParseError("duplicate begin line")
            p, grh, guard = _parse_begin(fields)
            result = EngineResult(p=p, grh=grh, guard=guard)
            continue
        if result is None:
            raise ParseError(f"fact before begin: {line!r}")
        if result.done or result.aborted:
            raise ParseError(f"fact after the transcript closed: {line!r}")
        try:
            _dispatch(result, key, fields, line)
        except IndexError:
            raise ParseError(f"too few fields: {line!r}")
    if result is None:
        raise ParseError("no begin line: not an engine transcript")
    if not result.done and not result.aborted:
        raise ParseError("truncated transcript: neither done nor abort")
    return result


def _dispatch(result: EngineResult, key: str, fields: List[str], line: str) -> None:
    if key == "irreducible":
        label = _label(fields[0], POLY_LABELS, "irreducible")
        result.irreducible[label] = _flag(fields[1], "irreducible flag")
    elif key == "closure":
        label = _label(fields[0], POLY_LABELS, "closure")
        result.closure_degrees[label] = _int(fields[1], "closure degree")
    elif key == "subfield":
        if fields[0] != "quartic_in_octic":
            raise ParseError(f"unknown subfield relation {fields[0]!r}")
        result.subfield_ok = _flag(fields[1], "subfield flag")
    elif key == "cyclo_degree":
        result.cyclo_degree = _int(fields[0], "cyclotomic degree")
    elif key == "compositum":
        label = _label(fields[0], FIELD_LABELS, "compositum")
        result.compositum_degrees[label] = _int(fields[1], "compositum degree")
    elif key == "guard_skip":
        label = _label(fields[0], FIELD_LABELS, "guard_skip")
        result.guard_skipped[label] = _int(fields[1], "potential degree")
    elif key == "class_number":
        label = _label(fields[0], FIELD_LABELS, "class_number")
        if len(fields) != 3 or not fields[2].startswith("grh="):
            raise ParseError(f"class_number needs <label> <h> grh=<flag>: {line!r}")
        h = _int(fields[1], "class number")
        if h < 1:
            raise ParseError(f"class number must be positive, got {h}")
        result.class_numbers[label] = (h, _flag(fields[2][4:], "class_number grh"))
    elif key == "certified":
        label = _label(fields[0], FIELD_LABELS, "certified")
        result.certified[label] = _flag(fields[1], "certified flag")
    elif key == "ram":
        label = _label(fields[0], FIELD_LABELS, "ram")
        if len(fields) != 5:
            raise ParseError(f"ram needs <label> <prime> <e> <q> <tame>: {line!r}")
        entry = RamEntry(
            field_label=label,
            rational_prime=_int(fields[1], "ram prime"),
            e=_int(fields[2], "ram index"),
            q=_int(fields[3], "ram residue size"),
            tame=_flag(fields[4], "ram tame flag"),
        )
        if entry.e < 2:
            raise ParseError(f"ram entries must be ramified (e >= 2): {line!r}")
        result.ram.append(entry)
    elif key == "abort":
        result.aborted = " ".join(fields) or "unspecified"
    elif key == "done":
        result.done = True
    else:
        raise ParseError(f"unknown fact key {key!r}")
