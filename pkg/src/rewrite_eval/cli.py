"""Command-line entry point: ``rewrite-eval {eval-gec,eval-simp,cascade,tokenize-debug}``.

Exit codes: 0 success, 2 input or config error, 3 metric precondition
error, 4 backend failure.
"""

from __future__ import annotations

import argparse
import logging
import shlex
import sys
from pathlib import Path

from .corpus import Task, attach_references, load_m2, load_parallel, read_lines
from .errors import (
    BackendError,
    ConfigError,
    CorpusError,
    MetricError,
    PipelineError,
    RewriteEvalError,
    StructureError,
    UsageError,
)
from .gec_metrics import references_from_gold
from .hallucination import CommandRecognizer, HeuristicRecognizer, load_stoplist
from .pipeline import load_config, run_config
from .report import MetricReport, config_hash, evaluate_gec, evaluate_simp, file_digest, to_json, write_csv
from .tokenization import count_sentences, count_syllables, tokenize

EXIT_OK, EXIT_INPUT, EXIT_METRIC, EXIT_BACKEND = 0, 2, 3, 4


def _recognizer(args):
    if getattr(args, "recognizer_cmd", None):
        return CommandRecognizer(shlex.split(args.recognizer_cmd))
    return HeuristicRecognizer(load_stoplist(args.stoplist))


def _inputs(**paths) -> dict:
    out = {}
    for role, value in paths.items():
        if value is None:
            continue
        if isinstance(value, list):
            out[role] = [{"path": str(p), "sha256": file_digest(p)} for p in value]
        else:
            out[role] = {"path": str(value), "sha256": file_digest(value)}
    return out


def _emit(report: MetricReport, args) -> None:
    text = to_json(report)
    if args.report:
        Path(args.report).parent.mkdir(parents=True, exist_ok=True)
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.csv:
        write_csv(report, args.csv)


def cmd_eval_gec(args) -> int:
    gold = None
    if args.gold_m2:
        corpus, gold = load_m2(args.gold_m2, task=Task.GRAMMAR)
        if args.source:
            sources = read_lines(args.source)
            if len(sources) != len(corpus):
                raise StructureError(
                    f"{args.source} has {len(sources)} lines but {args.gold_m2} has {len(corpus)} sentences"
                )
        if args.refs:
            corpus = attach_references(corpus, args.refs)
        else:
            corpus = corpus.with_references(references_from_gold(corpus, gold))
        preds = read_lines(args.pred)
        if len(preds) != len(corpus):
            raise StructureError(f"{args.pred} has {len(preds)} lines but {args.gold_m2} has {len(corpus)} sentences")
        corpus = corpus.with_predictions(preds)
    else:
        if not args.source:
            raise UsageError("eval-gec needs --source (or --gold-m2)")
        corpus = load_parallel(args.source, args.refs or [], args.pred, task=Task.GRAMMAR)
        if not args.refs:
            raise MetricError("eval-gec needs --refs or --gold-m2 to define gold edits")

    metrics, rows = evaluate_gec(corpus, gold, args.beta, args.max_n, _recognizer(args), args.per_sentence)
    settings = {"beta": args.beta, "max_n": args.max_n, "stoplist": args.stoplist, "recognizer_cmd": args.recognizer_cmd}
    inputs = _inputs(source=args.source, refs=args.refs or None, pred=args.pred, gold_m2=args.gold_m2)
    report = MetricReport(
        Task.GRAMMAR,
        metrics,
        {"command": "eval-gec", "inputs": inputs, "settings": settings,
         "config_hash": config_hash({"inputs": inputs, "settings": settings}), "records": len(corpus)},
        rows,
    )
    _emit(report, args)
    return EXIT_OK


def cmd_eval_simp(args) -> int:
    if not args.source:
        raise UsageError("eval-simp needs --source")
    corpus = load_parallel(args.source, args.refs or [], args.pred, task=Task.SIMPLIFICATION)
    metrics, rows = evaluate_simp(corpus, args.max_n, _recognizer(args), args.per_sentence)
    settings = {"max_n": args.max_n, "stoplist": args.stoplist, "recognizer_cmd": args.recognizer_cmd}
    inputs = _inputs(source=args.source, refs=args.refs or None, pred=args.pred)
    report = MetricReport(
        Task.SIMPLIFICATION,
        metrics,
        {"command": "eval-simp", "inputs": inputs, "settings": settings,
         "config_hash": config_hash({"inputs": inputs, "settings": settings}), "records": len(corpus)},
        rows,
    )
    _emit(report, args)
    return EXIT_OK


def cmd_cascade(args) -> int:
    cfg = load_config(args.config, backend_config=args.backend_config)
    if args.report:
        cfg["output"]["report"] = str(Path(args.report).resolve())
    if args.csv:
        cfg["output"]["csv"] = str(Path(args.csv).resolve())
    report = run_config(cfg, max_workers=args.max_workers)
    if not cfg["output"].get("report"):
        sys.stdout.write(to_json(report))
    for stage in report.stages:
        for failure in stage["failures"]:
            print(f"stage {stage['index']} record {failure['id']}: {failure['error']}", file=sys.stderr)
    return EXIT_OK


def cmd_tokenize_debug(args) -> int:
    texts = [args.text] if args.text is not None else [line.rstrip("\n") for line in sys.stdin]
    for text in texts:
        seq = tokenize(text)
        print(f"sentences={count_sentences(text) if text.strip() else 0} words={len(seq.words)}")
        for tok in seq:
            syl = count_syllables(tok.text) if tok.is_word else "-"
            print(f"{tok.text}\t{tok.kind.value}\t{syl}")
    return EXIT_OK


def _add_common(p, with_beta: bool):
    p.add_argument("--source", help="source sentences, one per line")
    p.add_argument("--refs", action="append", metavar="PATH", help="reference file (repeatable)")
    p.add_argument("--pred", required=True, help="system predictions, one per line")
    p.add_argument("--max-n", type=int, default=4, help="largest n-gram order (default 4)")
    if with_beta:
        p.add_argument("--beta", type=float, default=0.5, help="F-beta weight (default 0.5)")
        p.add_argument("--gold-m2", help="M2 gold edits; replaces edits derived from --refs")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="also write a flat stage,metric,value CSV")
    p.add_argument("--per-sentence", action="store_true", help="include a per-sentence table")
    p.add_argument("--stoplist", help="override the entity recognizer's stoplist")
    p.add_argument("--recognizer-cmd", help="external entity recognizer command (stdin/stdout lines)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rewrite-eval", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-gec", help="GLEU, M2 P/R/F0.5 and entity rate for grammar correction")
    _add_common(p, with_beta=True)
    p.set_defaults(func=cmd_eval_gec)

    p = sub.add_parser("eval-simp", help="SARI, FRE/FKGL, lengths and entity rate for simplification")
    _add_common(p, with_beta=False)
    p.set_defaults(func=cmd_eval_simp)

    p = sub.add_parser("cascade", help="run a 1-3 stage rewriting cascade from a config file")
    p.add_argument("config")
    p.add_argument("--backend-config", help="extra backend declarations (YAML/JSON)")
    p.add_argument("--max-workers", type=int, help="cap on concurrent backend requests")
    p.add_argument("--report", help="override output.report")
    p.add_argument("--csv", help="override output.csv")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("tokenize-debug", help="show tokens, kinds and syllable counts")
    p.add_argument("text", nargs="?", help="text to tokenize (default: lines from stdin)")
    p.set_defaults(func=cmd_tokenize_debug)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CorpusError, ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MetricError as exc:
        print(f"metric error: {exc}", file=sys.stderr)
        return EXIT_METRIC
    except (BackendError, PipelineError, RewriteEvalError) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
