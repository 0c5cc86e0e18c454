"""``sc2tc`` command line: train, convert, tokenize, eval, zipf.

Text I/O is UTF-8 with LF line endings; a trailing CR is stripped from
every input line. Any path argument may be ``-`` for stdin/stdout. All
randomness comes from one ``random.Random(--seed)`` per invocation.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import itertools
import random
import sys
from collections import Counter
from typing import Iterator

from .augment import augment_corpus, sample_segmentation
from .convert import ConvertConfig, convert_stream, max_match_convert
from .lm import SMOOTHINGS, load_model, perplexity, serialize_model, train_ngram
from .mapping import read_mapping_table
from .metrics import EvalAccumulator, format_report, zipf_slope
from .segment import as_dictionary, load_dictionary, max_match, viterbi_segment

__all__ = ["build_parser", "main"]


class CliError(Exception):
    """Runtime failure reported as ``sc2tc: error: ...`` with exit status 1."""


# -- I/O helpers -----------------------------------------------------------

@contextlib.contextmanager
def _std_stream(buffer, **kwargs):
    # detach on exit so the wrapper never closes the process's own stream
    stream = io.TextIOWrapper(buffer, encoding="utf-8", **kwargs)
    try:
        yield stream
    finally:
        stream.flush()
        stream.detach()


def _open_text_in(path: str):
    if path == "-":
        return _std_stream(sys.stdin.buffer, newline="")
    return open(path, encoding="utf-8", newline="")


def _open_text_out(path: str):
    if path == "-":
        return _std_stream(sys.stdout.buffer, newline="\n")
    return open(path, "w", encoding="utf-8", newline="\n")


def _lines(stream) -> Iterator[str]:
    for line in stream:
        if line.endswith("\n"):
            line = line[:-1]
        if line.endswith("\r"):
            line = line[:-1]
        yield line


def _check_readable(*paths: str | None) -> None:
    for path in paths:
        if path is None or path == "-":
            continue
        try:
            with open(path, "rb"):
                pass
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _read_corpus(path: str) -> list[list[str]]:
    with _open_text_in(path) as fh:
        return [line.split() for line in _lines(fh) if line.strip()]


def _smoothing(text: str) -> tuple[str, float]:
    name, _, k = text.partition(":")
    if name not in SMOOTHINGS or (k and name != "add_k"):
        raise argparse.ArgumentTypeError(f"expected one of {', '.join(SMOOTHINGS)} (add_k:K for a custom k)")
    try:
        value = float(k) if k else 1.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k in {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("k must be >= 0")
    return name, value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _weight(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


# -- commands --------------------------------------------------------------

def cmd_train(args) -> None:
    _check_readable(args.corpus, args.dict)
    corpus = _read_corpus(args.corpus)
    if not corpus:
        raise CliError(f"{args.corpus}: no sentences")
    dictionary = load_dictionary(args.dict) if args.dict else None
    if dictionary is not None:
        # break words into dictionary subwords, as the decoders will see them
        corpus = [[sub for tok in sent for sub in max_match(tok, dictionary).tokens] for sent in corpus]
    smoothing, k = args.smoothing
    train = corpus
    if args.augment_epochs:
        rng = random.Random(args.seed)
        bootstrap = train_ngram(corpus, args.order, smoothing, k) if dictionary is not None else None
        train = corpus + augment_corpus(
            corpus, args.augment_epochs, rng, lm=bootstrap, dictionary=dictionary, n=args.nbest, num_splits=args.splits
        )
    model = train_ngram(train, args.order, smoothing, k)
    data = serialize_model(model)
    if args.out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    print(f"sentences: {len(train)}", file=sys.stderr)
    print(f"events: {model.counts.num_events}", file=sys.stderr)
    print(f"vocabulary: {len(model.vocabulary)}", file=sys.stderr)
    print(f"train_perplexity: {perplexity(model, corpus)!r}", file=sys.stderr)


def cmd_convert(args) -> None:
    table_paths = args.table
    _check_readable(*table_paths, args.sc_lm, args.tc_lm, args.input)
    table = read_mapping_table(*table_paths)
    if args.baseline:
        sc_lm = tc_lm = config = None
    else:
        if args.sc_lm is None or args.tc_lm is None:
            raise CliError("--sc-lm and --tc-lm are required unless --baseline is given")
        sc_lm, tc_lm = load_model(args.sc_lm), load_model(args.tc_lm)
        config = ConvertConfig(args.beam, args.aggregation, args.sc_weight, args.tc_weight)
    with _open_text_in(args.input) as src, _open_text_out(args.output) as out:
        lines = _lines(src)
        if args.baseline:
            results = (max_match_convert(line, table) for line in lines)
        else:
            results = convert_stream(lines, table, sc_lm, tc_lm, config, jobs=args.jobs)
        for line in results:
            out.write(line + "\n")


def cmd_tokenize(args, parser) -> None:
    if args.mode == "max-match" and args.dict is None:
        parser.error("--mode max-match needs --dict")
    if args.mode != "max-match" and args.lm is None:
        parser.error(f"--mode {args.mode} needs --lm")
    _check_readable(args.lm, args.dict, args.input)
    lm = load_model(args.lm) if args.lm else None
    trie = load_dictionary(args.dict) if args.dict else as_dictionary(lm.vocabulary)
    rng = random.Random(args.seed)
    with _open_text_in(args.input) as src, _open_text_out(args.output) as out:
        for line in _lines(src):
            if not line:
                tokens = ()
            elif args.mode == "max-match":
                tokens = max_match(line, trie).tokens
            elif args.mode == "viterbi":
                tokens = viterbi_segment(line, lm, trie, args.max_states).tokens
            else:
                tokens = sample_segmentation(line, lm, trie, args.n, rng, args.max_states)
            out.write(args.sep.join(tokens) + "\n")


def cmd_eval(args) -> None:
    _check_readable(args.src, args.pred, args.ref, *args.table)
    table = read_mapping_table(*args.table)
    acc = EvalAccumulator(table)
    with _open_text_in(args.src) as s, _open_text_in(args.pred) as p, _open_text_in(args.ref) as r:
        for lineno, (src, pred, ref) in enumerate(itertools.zip_longest(_lines(s), _lines(p), _lines(r)), 1):
            if src is None or pred is None or ref is None:
                short = [name for name, v in ((args.src, src), (args.pred, pred), (args.ref, ref)) if v is None]
                raise CliError(
                    f"line-count mismatch among --src {args.src}, --pred {args.pred}, --ref {args.ref}: "
                    f"{', '.join(short)} ended before line {lineno}"
                )
            acc.add(pred, ref, src)
    sys.stdout.write(format_report(acc.report()))


def cmd_zipf(args) -> None:
    _check_readable(args.corpus)
    counts: Counter = Counter()
    with _open_text_in(args.corpus) as fh:
        for line in _lines(fh):
            counts.update(line.split())
    try:
        stats = zipf_slope(counts, args.top_k)
    except ValueError as exc:
        raise CliError(f"{args.corpus}: {exc}") from None
    out = [format_report(stats)]
    out.extend(f"{rank}\t{freq}\t{tok}\n" for rank, (tok, freq) in enumerate(stats.ranked, 1))
    sys.stdout.write("".join(out))


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sc2tc", description="Simplified-to-Traditional Chinese conversion toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an n-gram subword LM")
    p.add_argument("--corpus", required=True, help="space-segmented corpus, one sentence per line")
    p.add_argument("--order", type=_positive, default=3)
    p.add_argument("--smoothing", type=_smoothing, default=("kneser_ney", 1.0), help="kneser_ney, witten_bell, add_k or add_k:K")
    p.add_argument("--augment-epochs", type=_non_negative, default=0, help="sampled corpus copies to add")
    p.add_argument("--dict", help="subword dictionary: a word list or a mapping table")
    p.add_argument("--nbest", type=_positive, default=4, help="n-best size for segmentation sampling")
    p.add_argument("--splits", type=_non_negative, default=1, help="subsequence split points per sentence")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("convert", help="convert SC lines to TC")
    p.add_argument("--table", required=True, action="append", help="mapping table (repeatable, merged in order)")
    p.add_argument("--sc-lm")
    p.add_argument("--tc-lm")
    p.add_argument("--beam", type=_positive, default=8)
    p.add_argument("--aggregation", choices=("logsumexp", "max"), default="logsumexp")
    p.add_argument("--sc-weight", type=_weight, default=1.0)
    p.add_argument("--tc-weight", type=_weight, default=1.0)
    p.add_argument("--baseline", action="store_true", help="greedy max-match, first candidate; no LMs")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out", dest="output", default="-")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("tokenize", help="segment raw lines")
    p.add_argument("--mode", choices=("max-match", "viterbi", "sample"), default="viterbi")
    p.add_argument("--lm")
    p.add_argument("--dict")
    p.add_argument("--n", type=_positive, default=4, help="n-best size in sample mode")
    p.add_argument("--max-states", type=_positive, default=8)
    p.add_argument("--sep", default=" ")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out", dest="output", default="-")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval", help="DED and SA of predictions against references")
    p.add_argument("--src", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--table", required=True, action="append")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("zipf", help="rank/frequency table and Zipf slope")
    p.add_argument("--corpus", required=True)
    p.add_argument("--top-k", type=_positive, default=10000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "train":
            cmd_train(args)
        elif args.command == "convert":
            cmd_convert(args)
        elif args.command == "tokenize":
            cmd_tokenize(args, parser)
        elif args.command == "eval":
            cmd_eval(args)
        else:
            cmd_zipf(args)
    except BrokenPipeError:
        return 1
    except (CliError, OSError, ValueError) as exc:
        print(f"sc2tc: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
