"""Command line entry point: serve, lint, search, replay."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .clarify import Clarifier, bundled_table_path, load_table
from .config import ConfigError, BackendConfig, ServiceConfig, load_config
from .corpus import bundled_corpus_path, ingest
from .dictionary import load_dictionary
from .gateway import Gateway, ScriptedBackend, load_scenario
from .linting import Linter
from .orchestrator import Engine
from .search import build_index, search
from .session import Session, TickClock
from .templates import load_template_set


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netlogo-assistant",
        description="Retrieval-backed NetLogo programming assistant",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="check a NetLogo file and print diagnostics")
    lint.add_argument("file", help="path to the NetLogo source file")
    lint.add_argument("--format", choices=("text", "json"), default="text")
    lint.add_argument("--corpus", default=None, help="corpus JSONL path (default: bundled)")

    find = sub.add_parser("search", help="query the documentation corpus")
    find.add_argument("query")
    find.add_argument("-k", type=int, default=3)
    find.add_argument("--corpus", default=None, help="corpus JSONL path (default: bundled)")
    find.add_argument("--format", choices=("text", "json"), default="text")

    replay = sub.add_parser(
        "replay",
        help="run scripted exchanges and print the event transcript as JSON lines",
    )
    replay.add_argument("--scenario", required=True, help="scripted scenario JSON path")
    replay.add_argument(
        "--message",
        action="append",
        required=True,
        dest="messages",
        help="user message; repeat for multi-turn exchanges",
    )
    replay.add_argument("--corpus", default=None)
    replay.add_argument("--max-iterations", type=int, default=6)
    replay.add_argument("--search-k", type=int, default=3)

    serve = sub.add_parser("serve", help="run the chat service")
    serve.add_argument("--config", default=None, help="service config JSON path")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--corpus", default=None)
    serve.add_argument(
        "--backend",
        default=None,
        help="'scripted:PATH' for a scripted backend, or 'http' to use the config file's backends",
    )
    serve.add_argument("--max-iterations", type=int, default=None)
    serve.add_argument("--data-dir", default=None)
    serve.add_argument("--static-ui", default=None)

    return parser


def _load_corpus(path: str | None):
    return ingest(Path(path) if path else bundled_corpus_path())


def cmd_lint(args) -> int:
    source = Path(args.file).read_text(encoding="utf-8")
    corpus = _load_corpus(args.corpus)
    dictionary = load_dictionary(corpus)
    linter = Linter(dictionary, Clarifier(load_table(bundled_table_path()), dictionary))
    diagnostics = linter.check_source(source)
    if args.format == "json":
        print(json.dumps([d.to_dict() for d in diagnostics], ensure_ascii=False))
    else:
        if not diagnostics:
            print(f"{args.file}: clean")
        for diag in diagnostics:
            location = f"{diag.span.start_line}:{diag.span.start_column}"
            print(f"{args.file}:{location} {diag.severity} {diag.code}: {diag.raw_message}")
            print(f"    {diag.clarified_message}")
    return 1 if any(d.severity == "error" for d in diagnostics) else 0


def cmd_search(args) -> int:
    corpus = _load_corpus(args.corpus)
    index = build_index(corpus)
    hits = search(index, args.query, args.k)
    if args.format == "json":
        out = []
        for hit in hits:
            entry = index.entry(hit.doc_id)
            out.append(
                {
                    "doc_id": hit.doc_id,
                    "name": entry.name,
                    "url": entry.url,
                    "score": hit.score,
                    "snippet": hit.snippet,
                }
            )
        print(json.dumps(out, ensure_ascii=False))
    else:
        if not hits:
            print("no results")
        for rank, hit in enumerate(hits, start=1):
            entry = index.entry(hit.doc_id)
            print(f"{rank}. {entry.name}  [{hit.doc_id}]  score={hit.score:.4f}")
            print(f"   {entry.url}")
            print(f"   {hit.snippet}")
    return 0


def build_replay_engine(
    scenario_path: str | Path,
    corpus_path: str | None = None,
    max_iterations: int = 6,
    search_k: int = 3,
) -> Engine:
    """Deterministic engine: scripted backend, tick clock, bundled data."""
    corpus = _load_corpus(corpus_path)
    index = build_index(corpus)
    dictionary = load_dictionary(corpus)
    linter = Linter(dictionary, Clarifier(load_table(bundled_table_path()), dictionary))
    backend = ScriptedBackend(load_scenario(scenario_path))
    gateway = Gateway({"scripted": backend}, {"default": "scripted"})
    return Engine(
        gateway=gateway,
        index=index,
        linter=linter,
        templates=load_template_set(),
        clock=TickClock(),
        max_iterations=max_iterations,
        search_k=search_k,
    )


def cmd_replay(args) -> int:
    engine = build_replay_engine(
        args.scenario, args.corpus, args.max_iterations, args.search_k
    )
    session = Session.create("replay", engine.clock)
    for message in args.messages:
        for event in engine.handle_user_message(session, message):
            print(json.dumps(event.to_frame(), ensure_ascii=False))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = load_config(args.config) if args.config else ServiceConfig()
    if args.host is not None:
        config.host = args.host
    if args.port is not None:
        config.port = args.port
    if args.corpus is not None:
        config.corpus_path = Path(args.corpus)
    if args.max_iterations is not None:
        config.max_iterations = args.max_iterations
    if args.data_dir is not None:
        config.data_dir = Path(args.data_dir)
    if args.static_ui is not None:
        config.static_ui_dir = Path(args.static_ui)
    if args.backend is not None:
        if args.backend.startswith("scripted:"):
            path = args.backend.split(":", 1)[1]
            config.backends = {
                "scripted": BackendConfig(
                    backend_id="scripted", type="scripted", scenario_path=path
                )
            }
            config.routing = {"default": "scripted"}
        elif args.backend == "http":
            if not any(b.type == "http" for b in config.backends.values()):
                print("--backend http requires http backends in the config file", file=sys.stderr)
                return 2
        else:
            print(f"unsupported --backend value: {args.backend}", file=sys.stderr)
            return 2
    try:
        config.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "lint": cmd_lint,
        "search": cmd_search,
        "replay": cmd_replay,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
