"""Scenario files: declarations followed by subcommand invocations.

A scenario uses the declaration grammar plus three kinds of extra lines::

    scenario NAME          # report name (default: file stem)
    field F31              # field for the rings declared after it
    budget 200000          # S-pair budget for every invocation
    verify fiber V W       # any subcommand; ideal arguments are declared names

Names must be declared before the invocation that uses them.
"""

from __future__ import annotations

import contextvars
import json
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

from . import __version__
from .commands import BUDGET, ERROR, FAIL, INCONCLUSIVE, OK, PASS, Outcome, Resolver, UsageError, execute, invocation_parser
from .field import Field, FieldError
from .groebner import DEFAULT_MAX_PAIRS, pair_budget
from .ideals import Ideal
from .parser import GRAMMAR_VERSION, Document, ParseError, parse_statement, split_statements
from .ring import RingMap
from .verifiers import thread_count

REPORT_SCHEMA = "1"

BUNDLED = ("conifold.scn", "e1_fermat.scn", "normality_cubics.scn", "segre_small.scn")


@dataclass
class Invocation:
    line: int
    text: str
    args: object
    ideals: dict
    maps: dict


@dataclass
class Scenario:
    name: str
    field: Field | None = None
    budget: int | None = None
    invocations: list[Invocation] = dc_field(default_factory=list)


class _SnapshotResolver(Resolver):
    def __init__(self, ideals: dict, maps: dict, field: Field | None):
        self._ideals = ideals
        self._maps = maps
        self._field = field

    def ideal(self, ref: str) -> Ideal:
        ring, polys = self._ideals[ref]
        return Ideal(ring, polys)

    def ring_map(self, ref: str) -> RingMap:
        return self._maps[ref]

    @property
    def field(self):
        return self._field


def _referenced(args) -> tuple[list[str], list[str]]:
    ideals = [getattr(args, k) for k in ("ideal", "iv", "iw", "by") if getattr(args, k, None) is not None]
    maps = [args.map] if getattr(args, "map", None) is not None else []
    return ideals, maps


def parse_scenario(text: str, name: str = "scenario", field_override: Field | None = None) -> Scenario:
    """Parse scenario text; raises :class:`ParseError` with line and column."""
    doc = Document()
    scen = Scenario(name)
    parser = invocation_parser()
    field = field_override
    for lineno, stmt in split_statements(text):
        words = stmt.split()
        head = words[0]
        if head == "scenario":
            if len(words) != 2:
                raise ParseError("expected 'scenario NAME'", lineno, 1)
            scen.name = words[1]
            continue
        if head == "field":
            if len(words) != 2:
                raise ParseError("expected 'field Q' or 'field F<p>'", lineno, 1)
            try:
                f = Field(0) if words[1] == "Q" else Field(int(words[1][1:])) if words[1][:1] == "F" else None
            except (FieldError, ValueError) as exc:
                raise ParseError(str(exc), lineno, stmt.index(words[1]) + 1) from None
            if f is None:
                raise ParseError(f"unknown field {words[1]!r}", lineno, stmt.index(words[1]) + 1)
            scen.field = f
            if field_override is None:
                field = f
            continue
        if head == "budget":
            if len(words) != 2 or not words[1].isdigit() or int(words[1]) <= 0:
                raise ParseError("expected 'budget <positive integer>'", lineno, 1)
            scen.budget = int(words[1])
            continue
        if head in ("ring", "ideal", "map"):
            parse_statement(doc, lineno, stmt, field)
            continue
        try:
            args = parser.parse_args(shlex.split(stmt))
        except UsageError as exc:
            raise ParseError(str(exc), lineno, 1) from None
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1) from None
        ideal_refs, map_refs = _referenced(args)
        for ref in ideal_refs:
            if ref not in doc.ideals:
                raise ParseError(f"ideal {ref!r} is not declared", lineno, stmt.index(ref) + 1)
        for ref in map_refs:
            if ref not in doc.maps:
                raise ParseError(f"map {ref!r} is not declared", lineno, stmt.index(ref) + 1)
        scen.invocations.append(Invocation(
            lineno, " ".join(stmt.split()), args,
            {r: doc.ideals[r] for r in ideal_refs}, {r: doc.maps[r] for r in map_refs},
        ))
    scen.field = field
    return scen


def load_scenario(path, field_override: Field | None = None) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), path.stem, field_override)


def bundled_scenario_text(name: str) -> str:
    if not name.endswith(".scn"):
        name += ".scn"
    return resources.files("conevanish").joinpath("scenarios", name).read_text(encoding="utf-8")


@dataclass
class Report:
    name: str
    results: list[dict] = dc_field(default_factory=list)

    @property
    def statuses(self) -> list[str]:
        return [r["status"] for r in self.results]

    def exit_code(self) -> int:
        s = self.statuses
        if any(x in (FAIL, INCONCLUSIVE, ERROR) for x in s):
            return 1
        if BUDGET in s:
            return 3
        return 0

    def to_json(self) -> dict:
        counts: dict[str, int] = {}
        for s in self.statuses:
            counts[s] = counts.get(s, 0) + 1
        return {
            "report_schema": REPORT_SCHEMA,
            "results": self.results,
            "scenario": self.name,
            "summary": {"counts": counts, "total": len(self.results)},
            "versions": {"artifact": __version__, "grammar": GRAMMAR_VERSION},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        return cls(data["scenario"], list(data["results"]))


def _run_one(inv: Invocation, field, budget: int) -> dict:
    res = _SnapshotResolver(inv.ideals, inv.maps, field)
    with pair_budget(budget):
        out: Outcome = execute(inv.args, res)
    return {"command": inv.text, "line": inv.line, "output": out.data, "status": out.status}


def run_scenario(scen: Scenario, budget: int | None = None, parallel: bool = False, threads: int | None = None) -> Report:
    """Execute every invocation; results keep file order even when run concurrently."""
    budget = budget or scen.budget or DEFAULT_MAX_PAIRS
    report = Report(scen.name)
    if parallel and len(scen.invocations) > 1:
        ctx = contextvars.copy_context()
        with ThreadPoolExecutor(max_workers=max(2, thread_count(threads))) as pool:
            futures = [pool.submit(ctx.copy().run, _run_one, inv, scen.field, budget) for inv in scen.invocations]
            report.results = [f.result() for f in futures]
    else:
        report.results = [_run_one(inv, scen.field, budget) for inv in scen.invocations]
    for k, r in enumerate(report.results):
        r["index"] = k
    return report


def emit_report(report: Report, fmt: str = "json") -> bytes:
    """Canonical JSON, or a plain-text summary with one line per invocation and failed check."""
    if fmt == "json":
        return (json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"scenario {report.name}"]
    for r in report.results:
        lines.append(f"{r['status'].upper():13} {r['command']}")
        out = r["output"]
        for c in out.get("checks", []) if isinstance(out, dict) else []:
            if c["status"] == "fail":
                lines.append(f"  FAIL {c['name']}")
        if r["status"] in (ERROR, BUDGET):
            lines.append(f"  {out.get('error', '')}")
    s = report.to_json()["summary"]
    parts = ", ".join(f"{k} {v}" for k, v in sorted(s["counts"].items()))
    lines.append(f"{s['total']} invocations" + (f": {parts}" if parts else ""))
    return ("\n".join(lines) + "\n").encode()


__all__ = [
    "BUDGET", "BUNDLED", "ERROR", "FAIL", "INCONCLUSIVE", "OK", "PASS", "Report", "Scenario",
    "bundled_scenario_text", "emit_report", "load_scenario", "parse_scenario", "run_scenario",
]
