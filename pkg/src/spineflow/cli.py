"""Command-line front end.

Every subcommand is a thin adapter over the library: it parses JSON
input files, calls one library operation and serializes the result.
Exit status 0 means pass / true / equivalent, 1 means fail / false /
inequivalent, 2 means a usage or parse error.  Output is deterministic
byte for byte for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .census import spine_census
from .equivalence import (EquivalenceMode, normalize_matrix, spec_equivalent)
from .errors import InputError, SpineflowError
from .fatgraph import spine_to_json
from .flowgraph import (ItineraryWord, build_flow_graph, flow_graph_to_edge_text,
                        flow_graph_to_json, is_transitive, validate_itinerary)
from .model import (GluingMatrix, orientation_classes, spec_from_json,
                    validate_spec)

USAGE_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spineflow",
        description="validate, query and compare model-flow specifications")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, files=()):
        p = sub.add_parser(name, help=help_text)
        for f in files:
            p.add_argument(f, help=f"path to {f}")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0,
                       help="reserved for scripted reproducibility; unused")
        return p

    add("validate", "check a specification against all conditions",
        files=("spec",))
    add("build-graph", "build the quotient oriented graph", files=("spec",))
    add("transitive", "decide strong connectivity of the quotient graph",
        files=("spec",))
    add("orient", "enumerate the 2^k orientation classes", files=("spec",))
    p = add("equiv", "decide equivalence of two specifications",
            files=("spec_a", "spec_b"))
    p.add_argument("--mode", default="isotopy-with-twists",
                   choices=[m.value for m in EquivalenceMode])
    p.add_argument("--allow-reflection", action="store_true")
    p = add("itinerary", "check a symbolic itinerary word",
            files=("spec", "word"))
    p = add("census", "enumerate valid spines up to isomorphism")
    p.add_argument("--max-edges", type=int, default=4)
    p = add("periodic", "census closed walks of the quotient graph",
            files=("spec",))
    p.add_argument("--max-len", type=int, default=4)
    add("normalize-matrix", "canonical form of a gluing matrix",
        files=("matrix",))
    return parser


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as err:
        raise InputError(f"{path}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise InputError(
            f"{path}: line {err.lineno} column {err.colno}: {err.msg}") from err


def _load_spec(path: str):
    return spec_from_json(_load_json(path), path=path)


def _emit(payload: dict, text_lines, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 0 if err.code in (0, None) else USAGE_ERROR

    try:
        return _dispatch(args)
    except SpineflowError as err:
        sys.stderr.write(f"error: {err}\n")
        return USAGE_ERROR


def _dispatch(args) -> int:
    if args.command == "validate":
        spec = _load_spec(args.spec)
        report = validate_spec(spec)
        _emit(report.to_json(), report.lines(), args.format)
        return 0 if report.passed else 1

    if args.command == "build-graph":
        graph = build_flow_graph(_load_spec(args.spec))
        _emit(flow_graph_to_json(graph),
              flow_graph_to_edge_text(graph).splitlines(), args.format)
        return 0

    if args.command == "transitive":
        graph = build_flow_graph(_load_spec(args.spec))
        verdict = is_transitive(graph)
        _emit({"transitive": verdict},
              [f"transitive: {str(verdict).lower()}"], args.format)
        return 0 if verdict else 1

    if args.command == "orient":
        count, reps = orientation_classes(_load_spec(args.spec))
        payload = {"count": count, "classes": [rep.to_json() for rep in reps]}
        lines = [f"count: {count}"]
        for rep in reps:
            flat = " ".join(f"{pid}.v{v}={s:+d}"
                            for (pid, v), s in sorted(rep.signs.items()))
            lines.append(flat)
        _emit(payload, lines, args.format)
        return 0

    if args.command == "equiv":
        spec_a = _load_spec(args.spec_a)
        spec_b = _load_spec(args.spec_b)
        mode = EquivalenceMode.parse(args.mode)
        witness = spec_equivalent(spec_a, spec_b, mode,
                                  allow_reflection=args.allow_reflection)
        if witness is None:
            _emit({"equivalent": False, "mode": mode.value},
                  ["inequivalent"], args.format)
            return 1
        _emit({"equivalent": True, "mode": mode.value,
               "witness": witness.to_json()},
              ["equivalent"], args.format)
        return 0

    if args.command == "itinerary":
        graph = build_flow_graph(_load_spec(args.spec))
        word = ItineraryWord.from_json(_load_json(args.word), path=args.word)
        verdict = validate_itinerary(graph, word)
        _emit({"realizable": verdict},
              [f"realizable: {str(verdict).lower()}"], args.format)
        return 0 if verdict else 1

    if args.command == "census":
        spines = spine_census(args.max_edges)
        payload = {"count": len(spines),
                   "spines": [spine_to_json(s) for s in spines]}
        lines = [f"count: {len(spines)}"]
        for s in spines:
            lines.append(json.dumps(spine_to_json(s), sort_keys=True))
        _emit(payload, lines, args.format)
        return 0

    if args.command == "periodic":
        from .flowgraph import periodic_words, word_counts
        graph = build_flow_graph(_load_spec(args.spec))
        words = periodic_words(graph, args.max_len)
        counts = word_counts(words)
        payload = {"counts": {str(k): v for k, v in counts.items()},
                   "words": [list(w.cycle) for w in words]}
        lines = [f"length {k}: {v}" for k, v in counts.items()]
        lines += [" ".join(w.cycle) for w in words]
        _emit(payload, lines, args.format)
        return 0

    if args.command == "normalize-matrix":
        rows = _load_json(args.matrix)
        matrix = GluingMatrix.from_rows(rows, path=args.matrix)
        normal = normalize_matrix(matrix)
        _emit({"normalized": normal.rows()},
              [json.dumps(normal.rows())], args.format)
        return 0

    raise InputError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
