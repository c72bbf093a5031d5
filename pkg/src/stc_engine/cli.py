"""Command-line surface: offline build, one-shot query, REPL chat, HTTP serve."""

from __future__ import annotations

import argparse
import sys

from . import pipeline
from .bundle import build_bundle, load_bundle, save_bundle
from .config import EngineConfig
from .corpus import ingest_file
from .errors import EmptyQuery, EngineError


def _print_debug(resp: pipeline.ChatResponse, corpus) -> None:
    print("matched posts:")
    for sp in resp.matched:
        title = corpus.posts[sp.corpus_ordinal].title
        print(f"  #{sp.corpus_ordinal}  score={sp.score:.6f}  {title}")
    print("candidate pool:")
    for c in resp.pool:
        marker = "*" if c == resp.chosen else " "
        print(
            f" {marker}post#{c.post_ordinal} comment#{c.comment_index} "
            f"pop={c.popularity}  {c.text}"
        )
    if resp.low_confidence:
        print("(low confidence: no matched post scored above zero)")


def cmd_build(args) -> int:
    cfg = EngineConfig.from_file(args.config) if args.config else EngineConfig()
    corpus, report = ingest_file(
        args.corpus, cfg.filter, cfg.tokenizer, source_label=str(args.corpus)
    )
    print(
        f"ingest: raw={report.raw_count} kept={report.kept_count} "
        f"non_text={report.dropped_non_text} noise={report.dropped_noise} "
        f"no_comments={report.dropped_no_comments}"
    )
    bundle, training = build_bundle(corpus, cfg.tokenizer, cfg.pv, cfg.pipeline)
    first = training.per_epoch_mean_loss[0]
    last = training.per_epoch_mean_loss[-1]
    print(
        f"pv training: epochs={len(training.per_epoch_mean_loss)} "
        f"examples={training.total_examples} "
        f"loss {first:.4f} -> {last:.4f} "
        f"({training.wall_time_seconds:.1f}s)"
    )
    save_bundle(bundle, args.out)
    print(f"bundle written to {args.out}")
    return 0


def cmd_query(args) -> int:
    bundle = load_bundle(args.bundle)
    cfg = bundle.manifest.pipeline_defaults
    try:
        resp = pipeline.respond(args.text, bundle, cfg, seed=args.seed)
    except EmptyQuery:
        print("query is empty after tokenization", file=sys.stderr)
        return 1
    print(resp.text)
    if args.debug:
        _print_debug(resp, bundle.corpus)
    return 0


def cmd_chat(args) -> int:
    bundle = load_bundle(args.bundle)
    cfg = bundle.manifest.pipeline_defaults
    turn = 0
    print("stc-engine chat (empty line to quit)")
    while True:
        try:
            line = input("> ")
        except EOFError:
            break
        if not line.strip():
            if not line:
                break
            print("(empty query, try again)")
            continue
        seed = None if args.seed is None else args.seed + turn
        try:
            resp = pipeline.respond(line, bundle, cfg, seed=seed)
        except EmptyQuery:
            print("(query has no tokens, try again)")
            continue
        print(resp.text)
        if args.debug:
            _print_debug(resp, bundle.corpus)
        turn += 1
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    bundle = load_bundle(args.bundle)
    host, port = (args.listen.rsplit(":", 1) + ["8000"])[:2] if ":" in args.listen \
        else (args.listen, "8000")
    serve(bundle, host, int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stc", description="retrieval STC engine")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="ingest a corpus file and build a bundle")
    b.add_argument("--corpus", required=True)
    b.add_argument("--config", default=None)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer a single query")
    q.add_argument("--bundle", required=True)
    q.add_argument("--text", required=True)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--debug", action="store_true")
    q.set_defaults(func=cmd_query)

    c = sub.add_parser("chat", help="interactive REPL")
    c.add_argument("--bundle", required=True)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--debug", action="store_true")
    c.set_defaults(func=cmd_chat)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--bundle", required=True)
    s.add_argument("--listen", default="127.0.0.1:8000")
    s.set_defaults(func=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
