"""Batch command line: ingest, validate, report, serve."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from . import jsonutil
from .corpus import (
    CorpusError,
    CorpusParseError,
    CorpusValidationError,
    apply_filter,
    background_distributions,
    load_corpus_path,
    serialize_corpus,
)
from .model import Corpus, FilterCriteria
from .patterns import MiningParams, mine_patterns, sort_patterns
from .summary import GroupingMode, summary_document
from .tree import build_tree, serialize_tree

PORT_ENV_VAR = "CONVO_MINER_PORT"
UI_ORIGIN_ENV_VAR = "CONVO_MINER_UI_ORIGIN"
REPORT_TOP_PATTERNS = 20


def _load(path: str, ig_mode: str, alpha: float) -> Corpus:
    try:
        return load_corpus_path(path, ig_mode=ig_mode, alpha=alpha)
    except CorpusValidationError as exc:
        for finding in exc.findings:
            print(f"error: {finding}", file=sys.stderr)
        raise SystemExit(1)
    except (CorpusParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = _load(args.file, args.ig_mode, args.alpha)
    turns = corpus.turn_count
    fallback = sum(
        1 for c in corpus.conversations for t in c.turns if t.relevance_is_fallback
    )
    mean_ig = (
        sum(t.information_gain for c in corpus.conversations for t in c.turns) / turns
        if turns
        else 0.0
    )
    print(f"students:       {len(corpus.students)}")
    print(f"tasks:          {len(corpus.tasks)}")
    print(f"conversations:  {len(corpus.conversations)}")
    print(f"turns:          {turns}")
    print(f"fallback-relevance turns: {fallback}")
    print(f"mean information gain:    {mean_ig:.4f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(jsonutil.dumps(serialize_corpus(corpus), indent=1))
        print(f"normalized corpus written to {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        load_corpus_path(args.file)
    except CorpusValidationError as exc:
        for finding in exc.findings:
            print(f"error: {finding}", file=sys.stderr)
        return 1
    except (CorpusParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("ok")
    return 0


def build_report(corpus: Corpus) -> dict:
    """Overview, top patterns per kind, per-task trees and per-type summaries."""
    selection = apply_filter(corpus, FilterCriteria())
    distributions = background_distributions(corpus, FilterCriteria())

    catalog = mine_patterns(selection.conversations, MiningParams())
    top = {}
    for kind in ("sequence", "set"):
        rows = [
            p.to_row()
            for p in sort_patterns(catalog, "support", "desc")
            if p.kind.value == kind
        ][:REPORT_TOP_PATTERNS]
        top[kind] = rows

    task_trees = []
    for task in corpus.tasks:
        convs = [c for c in selection.conversations if c.task == task.id]
        if not convs:
            continue
        tree = build_tree(convs)
        doc = serialize_tree(tree)
        task_trees.append(
            {
                "task": task.id,
                "conversations": tree.total_conversations,
                "nodes": len(doc["nodes"]),
                "edges": len(doc["edges"]),
                "max_depth": max(node["depth"] for node in doc["nodes"]),
            }
        )

    summaries = summary_document(corpus, selection, GroupingMode.TASK)["groups"]
    return {
        "overview": {
            "students": len(corpus.students),
            "tasks": len(corpus.tasks),
            "conversations": len(corpus.conversations),
            "turns": corpus.turn_count,
            "distributions": distributions.to_dict(),
        },
        "top_patterns": top,
        "task_trees": task_trees,
        "task_type_summaries": summaries,
    }


def _markdown_report(report: dict) -> str:
    lines = ["# Corpus report", "", "## Overview", ""]
    overview = report["overview"]
    for key in ("students", "tasks", "conversations", "turns"):
        lines.append(f"- {key}: {overview[key]}")
    lines.append("")
    for kind in ("sequence", "set"):
        lines.append(f"## Top {kind} patterns")
        lines.append("")
        lines.append("| L | Pattern | C | Avg. |")
        lines.append("|---|---------|---|------|")
        for row in report["top_patterns"][kind]:
            joiner = " -> " if kind == "sequence" else ", "
            rendered = joiner.join(row["codes"])
            if kind == "set":
                rendered = "{" + rendered + "}"
            lines.append(f"| {row['L']} | {rendered} | {row['C']} | {row['avg']:.3f} |")
        lines.append("")
    lines.append("## Task type summaries")
    lines.append("")
    lines.append("| Type | Members | Mean IG | Mean RL | Mean score |")
    lines.append("|------|---------|---------|---------|------------|")
    for group in report["task_type_summaries"]:
        lines.append(
            f"| {group['key']} | {len(group['members'])} | {group['mean_ig']:.3f} "
            f"| {group['mean_rl']:.1f} | {group['mean_score']:.3f} |"
        )
    lines.append("")
    lines.append("## Interaction trees per task")
    lines.append("")
    lines.append("| Task | Conversations | Nodes | Edges | Max depth |")
    lines.append("|------|---------------|-------|-------|-----------|")
    for entry in report["task_trees"]:
        lines.append(
            f"| {entry['task']} | {entry['conversations']} | {entry['nodes']} "
            f"| {entry['edges']} | {entry['max_depth']} |"
        )
    lines.append("")
    return "\n".join(lines)


def _cmd_report(args: argparse.Namespace) -> int:
    corpus = _load(args.file, args.ig_mode, args.alpha)
    report = build_report(corpus)
    if args.format == "json":
        rendered = jsonutil.dumps(report, indent=1)
    else:
        rendered = _markdown_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(rendered)
        print(f"report written to {args.out}")
    else:
        print(rendered)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    corpus = _load(args.file, args.ig_mode, args.alpha)
    port = args.port
    env_port = os.environ.get(PORT_ENV_VAR)
    if env_port:
        try:
            port = int(env_port)
        except ValueError:
            print(f"error: {PORT_ENV_VAR}={env_port!r} is not a port number", file=sys.stderr)
            return 1
    ui_origin = os.environ.get(UI_ORIGIN_ENV_VAR, "*")
    app = create_app(corpus, ui_origin=ui_origin)
    print(f"serving {args.file} on {args.host}:{port}")
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def _add_load_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--ig-mode",
        choices=["inclusive", "exclusive_smoothed"],
        default="inclusive",
        dest="ig_mode",
        help="cumulative reading used for information gain",
    )
    parser.add_argument("--alpha", type=float, default=1.0, help="smoothing for exclusive mode")


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="convo-miner", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="load a corpus, print stats, optionally normalize")
    p_ingest.add_argument("file")
    p_ingest.add_argument("--out", help="write the normalized corpus JSON here")
    _add_load_options(p_ingest)
    p_ingest.set_defaults(func=_cmd_ingest)

    p_validate = sub.add_parser("validate", help="check a corpus file; exit 1 on findings")
    p_validate.add_argument("file")
    p_validate.set_defaults(func=_cmd_validate)

    p_report = sub.add_parser("report", help="write an analysis report")
    p_report.add_argument("file")
    p_report.add_argument("--format", choices=["json", "md"], default="json")
    p_report.add_argument("--out")
    _add_load_options(p_report)
    p_report.set_defaults(func=_cmd_report)

    p_serve = sub.add_parser("serve", help="serve the JSON API for a corpus")
    p_serve.add_argument("file")
    p_serve.add_argument("--port", type=int, default=8170)
    p_serve.add_argument("--host", default="127.0.0.1")
    _add_load_options(p_serve)
    p_serve.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
