"""Command-line surface: sxq query|mutate|serve|bench|baseline|validate.

Exit codes: 0 success, 1 query syntax error, 2 IO/schema/script error,
3 scorer transport error.  Machine-readable output goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from .api import build_query_response, dump_response, scorer_spec_from_json
from .baseline import flat_retrieve, flatten
from .bench import STRATEGIES, parse_session, rows_to_csv, run_bench
from .errors import (
    MemoryParseError,
    MutationError,
    QuerySyntaxError,
    SchemaViolationError,
    SxqError,
    TransportError,
    UnknownNodeError,
)
from .memtree import dump_memory, insert_version, load_memory_file, parse_edit

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_IO = 2
EXIT_TRANSPORT = 3


def _scorer_spec(args) -> "ScorerSpec":
    return scorer_spec_from_json({"kind": args.scorer})


def _emit(payload: dict) -> None:
    print(dump_response(payload))


def cmd_query(args) -> int:
    try:
        tree = load_memory_file(args.memory)
        response = build_query_response(tree, args.query, _scorer_spec(args), args.top_k, args.trace)
    except QuerySyntaxError as exc:
        _emit({"error": "syntax", "message": str(exc), "offset": exc.offset, "expected": list(exc.expected)})
        return EXIT_SYNTAX
    except TransportError as exc:
        _emit({"error": "transport", "message": str(exc)})
        return EXIT_TRANSPORT
    except (OSError, MemoryParseError, SchemaViolationError, ValueError) as exc:
        _emit({"error": "memory", "message": str(exc)})
        return EXIT_IO
    _emit(response)
    return EXIT_OK


def cmd_mutate(args) -> int:
    try:
        tree = load_memory_file(args.memory)
        with open(args.spec, encoding="utf-8") as fh:
            spec = json.load(fh)
        edit, source = parse_edit(spec)
        if source is None:
            versions = tree.children(tree.root_id)
            if not versions:
                raise MutationError("memory has no version branches to mutate")
            source = versions[-1]
        new_tree = insert_version(tree, source, edit, args.summary)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_memory(new_tree))
    except SchemaViolationError as exc:
        _emit({"error": "schema", "message": str(exc),
               "violations": [{"nodeId": v.node_id, "rule": v.rule} for v in exc.violations]})
        return EXIT_IO
    except (OSError, json.JSONDecodeError, MemoryParseError, MutationError, UnknownNodeError) as exc:
        _emit({"error": "mutation", "message": str(exc)})
        return EXIT_IO
    _emit({"ok": True, "versionId": new_tree.children(new_tree.root_id)[-1], "revision": new_tree.revision})
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    try:
        serve(args.memory, args.port, journal_path=args.journal, host=args.host)
    except (OSError, MemoryParseError, SchemaViolationError) as exc:
        print(json.dumps({"error": "serve", "message": str(exc)}))
        return EXIT_IO
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        tree = load_memory_file(args.memory)
        with open(args.script, encoding="utf-8") as fh:
            turns = parse_session(json.load(fh))
        strategies = tuple(s.strip() for s in args.strategies.split(",") if s.strip())
        unknown = [s for s in strategies if s not in STRATEGIES]
        if unknown:
            print(json.dumps({"error": "bench", "message": f"unknown strategies {unknown}"}))
            return EXIT_IO
        rows, _ = run_bench(tree, turns, strategies=strategies, scorer=_scorer_spec(args), k=args.k)
    except TransportError as exc:
        print(json.dumps({"error": "transport", "message": str(exc)}))
        return EXIT_TRANSPORT
    except (OSError, json.JSONDecodeError, SxqError) as exc:
        print(json.dumps({"error": "bench", "message": str(exc)}))
        return EXIT_IO
    sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def cmd_baseline(args) -> int:
    try:
        tree = load_memory_file(args.memory)
        ranking = flat_retrieve(flatten(tree), args.request, args.k, _scorer_spec(args))
    except TransportError as exc:
        _emit({"error": "transport", "message": str(exc)})
        return EXIT_TRANSPORT
    except (OSError, MemoryParseError, SchemaViolationError, ValueError) as exc:
        _emit({"error": "memory", "message": str(exc)})
        return EXIT_IO
    _emit({"request": args.request, "results": [{"id": nid, "score": score} for nid, score in ranking]})
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        load_memory_file(args.memory)
    except SchemaViolationError as exc:
        _emit({"ok": False,
               "violations": [{"nodeId": v.node_id, "rule": v.rule} for v in exc.violations]})
        return EXIT_IO
    except (OSError, MemoryParseError) as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_IO
    _emit({"ok": True})
    return EXIT_OK


def _add_scorer_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scorer", default="lexical", choices=["lexical", "embedding", "entailment"],
                        help="relevance scorer; remote kinds read SXQ_EMBED_URL/SXQ_NLI_URL/SXQ_MODEL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sxq", description="structure-aware memory retrieval")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("query", help="evaluate a query against a memory file")
    p.add_argument("--memory", required=True)
    p.add_argument("query")
    _add_scorer_flag(p)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--trace", action="store_true", help="include the execution trace")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("mutate", help="apply a version-branch edit and write the new document")
    p.add_argument("--memory", required=True)
    p.add_argument("--spec", required=True, help="mutation spec JSON file")
    p.add_argument("--summary", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--memory", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--journal", default=None, help="mutation journal path (default: MEMORY.journal)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="replay a session script, print per-turn token CSV")
    p.add_argument("--memory", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--strategies", default="in-context,flat,sxq")
    p.add_argument("--k", type=int, default=5)
    _add_scorer_flag(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("baseline", help="flat retrieval over the flattened memory")
    p.add_argument("--memory", required=True)
    p.add_argument("--request", required=True)
    p.add_argument("--k", type=int, default=5)
    _add_scorer_flag(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("validate", help="check a memory file against its schema")
    p.add_argument("--memory", required=True)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
