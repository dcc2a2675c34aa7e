"""``conevanish`` command line.

Exit codes: 0 when everything passes, 1 on a failed or inconclusive
verification or a rejected input, 2 on usage and parse errors, 3 when a
budget ran out and nothing failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .commands import BUDGET, ERROR, FAIL, INCONCLUSIVE, Resolver, UsageError, _Parser, add_subcommands, execute, field_arg
from .field import Field
from .groebner import pair_budget
from .ideals import Ideal
from .parser import GRAMMAR_VERSION, ParseError, parse_document
from .ring import RingMap
from .scenario import BUNDLED, bundled_scenario_text, emit_report, load_scenario, parse_scenario, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class FileResolver(Resolver):
    """References are ``PATH`` or ``PATH:NAME``; the last declared object is the default."""

    def __init__(self, field: Field | None = None):
        self._field = field
        self._docs: dict = {}

    @property
    def field(self):
        return self._field

    def _doc(self, path: str):
        if path not in self._docs:
            text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
            try:
                self._docs[path] = parse_document(text, self._field)
            except ParseError as exc:
                raise ParseError(f"{path}: {exc.message}", exc.line, exc.col) from None
        return self._docs[path]

    @staticmethod
    def _split(ref: str) -> tuple[str, str | None]:
        path, sep, name = ref.rpartition(":")
        if sep and name and not Path(ref).exists():
            return path, name
        return ref, None

    def ideal(self, ref: str) -> Ideal:
        path, name = self._split(ref)
        doc = self._doc(path)
        if name is None:
            if not doc.ideal_names:
                raise UsageError(f"{path}: no ideal declared")
            name = doc.ideal_names[-1]
        if name not in doc.ideals:
            raise UsageError(f"{path}: no ideal named {name!r}")
        ring, polys = doc.ideals[name]
        return Ideal(ring, polys)

    def ring_map(self, ref: str) -> RingMap:
        path, name = self._split(ref)
        doc = self._doc(path)
        if not doc.maps:
            raise UsageError(f"{path}: no map declared")
        name = name or list(doc.maps)[-1]
        if name not in doc.maps:
            raise UsageError(f"{path}: no map named {name!r}")
        return doc.maps[name]


def _run_cmd(args) -> tuple[int, str]:
    if args.scenario is not None:
        scen = load_scenario(args.scenario, args.field)
    elif args.bundled:
        scen = parse_scenario(bundled_scenario_text(args.bundled), args.bundled, args.field)
    else:
        raise UsageError("run needs a scenario file or --bundled NAME")
    report = run_scenario(scen, budget=args.budget_pairs, parallel=args.parallel)
    fmt = "json" if args.json else "text"
    return report.exit_code(), emit_report(report, fmt).decode()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conevanish", description="Exact algebra for cones over Segre products and their blow-ups.")
    p.add_argument("--version", action="version", version=f"conevanish {__version__} (grammar {GRAMMAR_VERSION})")
    p.add_argument("--field", type=field_arg, default=None, help="override the field of every ring (Q or F<p>)")
    p.add_argument("--budget-pairs", type=int, default=None, help="S-pair budget per computation")
    p.add_argument("--json", action="store_true", help="emit canonical JSON")
    p.add_argument("--out", default=None, help="write output to this path")
    p.add_argument("--parallel", action="store_true", help="run scenario invocations concurrently")
    sub = add_subcommands(p, "PATH or PATH:NAME of a declaration file ('-' for stdin)")
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", nargs="?", default=None)
    run.add_argument("--bundled", choices=[b.removesuffix(".scn") for b in BUNDLED], default=None)
    run.set_defaults(func=None, command="run")
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.budget_pairs is not None and args.budget_pairs <= 0:
        print("error: --budget-pairs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "run":
            code, text = _run_cmd(args)
            _emit(text, args.out)
            return code
        res = FileResolver(args.field)
        if args.budget_pairs is not None:
            with pair_budget(args.budget_pairs):
                outcome = execute(args, res)
        else:
            outcome = execute(args, res)
    except (ParseError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if outcome.status == ERROR:
        print(f"error: {outcome.data['error']}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        text = json.dumps(outcome.data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    else:
        text = outcome.text
    _emit(text, args.out)
    if outcome.status in (FAIL, INCONCLUSIVE):
        return EXIT_FAIL
    if outcome.status == BUDGET:
        return EXIT_BUDGET
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
