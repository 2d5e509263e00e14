"""Command-line entry point: ``extrofit {extrofit,retrofit,eval,neighbors}``.

Results go to stdout or the ``--output`` file; diagnostics and the run
manifest (one JSON object) go to stderr. Exit status is 0 on success, 1 on a
runtime error and 2 on bad usage.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .embeddings import DEFAULT_PRECISION, load_embeddings, save_embeddings
from .errors import DegenerateInput, ExtrofitError
from .evaluation import (
    FORMATS,
    EvalReport,
    evaluate,
    format_neighbors,
    format_reports,
    load_dataset_files,
    nearest_neighbors,
)
from .extrofit import ExtrofitConfig, extrofit
from .lexicon import build_classes, load_lexicon_file
from .linalg import DEFAULT_SHRINKAGE, WEIGHTINGS
from .retrofit import BETA_MODES, RetrofitConfig, retrofit

logger = logging.getLogger("extrofitting")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class Manifest:
    """Collects one run's provenance and writes it once at exit."""

    def __init__(self, command: str, options: dict[str, Any]):
        self.record: dict[str, Any] = {
            "command": command,
            "options": options,
            "inputs": {},
            "counts": {},
            "version": __version__,
            "started_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        self._t0 = time.perf_counter()

    def add_input(self, path: str | Path) -> None:
        self.record["inputs"][str(path)] = sha256_file(path)

    def count(self, **counts: Any) -> None:
        self.record["counts"].update(counts)

    def emit(self, status: str, append_to: str | None) -> None:
        self.record["status"] = status
        self.record["duration_s"] = round(time.perf_counter() - self._t0, 3)
        line = json.dumps(self.record, sort_keys=True)
        print(f"manifest: {line}", file=sys.stderr)
        if append_to:
            with open(append_to, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _unit_float(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _dataset_spec(text: str) -> tuple[str, list[str]]:
    tag, sep, paths = text.partition("=")
    if not sep or not paths:
        raise argparse.ArgumentTypeError(f"expected TAG=PATH[,PATH...], got {text!r}")
    if tag not in FORMATS:
        raise argparse.ArgumentTypeError(f"unknown dataset tag {tag!r}; choose from {', '.join(FORMATS)}")
    return tag, paths.split(",")


def _add_io(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="pretrained vectors (text, optionally .gz)")
    p.add_argument("--lexicon", required=True, help="synonym lexicon, one 'head syn1 syn2 ...' per line")
    p.add_argument("--output", required=True, help="where to write the enriched vectors")
    p.add_argument("--lowercase", action="store_true", help="lowercase vector and lexicon tokens")
    p.add_argument("--precision", type=_positive_int, default=DEFAULT_PRECISION,
                   help="decimal places in the output (default %(default)s)")
    p.add_argument("--full-precision", action="store_true",
                   help="write shortest exact float representations instead")
    p.add_argument("--manifest", help="also append the run manifest as a JSON line to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extrofit", description="Extrofitting and retrofitting of word vectors, with evaluation."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extrofit", help="expand, transfer synonym means, LDA-project")
    _add_io(p)
    p.add_argument("--expand", type=_positive_int, default=1, help="dimensions to add (default 1)")
    p.add_argument("--components", type=_positive_int, default=None,
                   help="output dimension (default: input dimension)")
    p.add_argument("--shrinkage", type=_unit_float, default=DEFAULT_SHRINKAGE)
    p.add_argument("--weighting", choices=WEIGHTINGS, default="class-size")

    p = sub.add_parser("retrofit", help="retrofitting baseline")
    _add_io(p)
    p.add_argument("--iters", type=_positive_int, default=10)
    p.add_argument("--alpha", type=_positive_float, default=1.0)
    p.add_argument("--beta", choices=BETA_MODES, default="inverse-degree")

    p = sub.add_parser("eval", help="Spearman correlation on word-similarity datasets")
    p.add_argument("--vectors", required=True)
    p.add_argument("--dataset", type=_dataset_spec, action="append", required=True,
                   metavar="TAG=PATH[,PATH...]",
                   help=f"repeatable; TAG is one of {', '.join(FORMATS)}")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--format", choices=("tsv", "table"), default="tsv")
    p.add_argument("--manifest")

    p = sub.add_parser("neighbors", help="top-k cosine neighbours of a word, as TSV")
    p.add_argument("--vectors", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--top", type=_positive_int, default=10)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--manifest")
    return parser


def _load_inputs(args, manifest: Manifest):
    manifest.add_input(args.input)
    manifest.add_input(args.lexicon)
    m = load_embeddings(args.input, lowercase=args.lowercase)
    graph = load_lexicon_file(args.lexicon, m.vocab, lowercase=args.lowercase)
    manifest.count(
        vocab_size=len(m),
        dim=m.dim,
        duplicates_skipped=m.n_duplicates_skipped,
        edges_kept=len(graph),
        edges_dropped_oov=graph.n_dropped_oov,
    )
    return m, graph


def _precision(args) -> int | None:
    return None if args.full_precision else args.precision


def cmd_extrofit(args, manifest: Manifest) -> int:
    m, graph = _load_inputs(args, manifest)
    classes = build_classes(graph, m.vocab)
    manifest.count(
        n_classes=classes.n_classes,
        n_nonsingleton_classes=classes.n_nonsingleton_classes,
        n_extrofitted=classes.n_covered_words,
    )
    cfg = ExtrofitConfig(args.expand, args.components, args.shrinkage, args.weighting)
    out, model = extrofit(m, classes, cfg)
    manifest.count(out_dim=model.out_dim, ridge=model.ridge)
    save_embeddings(out, args.output, _precision(args))
    return 0


def cmd_retrofit(args, manifest: Manifest) -> int:
    m, graph = _load_inputs(args, manifest)
    cfg = RetrofitConfig(alpha=args.alpha, beta_mode=args.beta, iterations=args.iters)
    save_embeddings(retrofit(m, graph, cfg), args.output, _precision(args))
    return 0


def cmd_eval(args, manifest: Manifest) -> int:
    manifest.add_input(args.vectors)
    m = load_embeddings(args.vectors, lowercase=args.lowercase)
    manifest.count(vocab_size=len(m), dim=m.dim)
    reports: list[EvalReport] = []
    for tag, paths in args.dataset:
        for path in paths:
            manifest.add_input(path)
        dataset = load_dataset_files(paths, tag, lowercase=args.lowercase, name=tag)
        try:
            reports.append(evaluate(m, dataset))
        except DegenerateInput as exc:
            reports.append(EvalReport(tag, None, 0, 0, error=f"DegenerateInput: {exc}"))
    sys.stdout.write(format_reports(reports, args.format))
    manifest.count(**{f"{r.dataset}_n_scored": r.n_scored for r in reports})
    return 0


def cmd_neighbors(args, manifest: Manifest) -> int:
    manifest.add_input(args.vectors)
    m = load_embeddings(args.vectors, lowercase=args.lowercase)
    sys.stdout.write(format_neighbors(nearest_neighbors(m, args.word, args.top)))
    return 0


COMMANDS = {
    "extrofit": cmd_extrofit,
    "retrofit": cmd_retrofit,
    "eval": cmd_eval,
    "neighbors": cmd_neighbors,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    options = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "verbose")}
    manifest = Manifest(args.command, options)
    try:
        status = COMMANDS[args.command](args, manifest)
    except (ExtrofitError, OSError, UnicodeDecodeError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else ""
        print(f"error: {type(exc).__name__}: {message}", file=sys.stderr)
        manifest.emit("error", getattr(args, "manifest", None))
        return 1
    manifest.emit("ok", getattr(args, "manifest", None))
    return status


if __name__ == "__main__":
    sys.exit(main())
