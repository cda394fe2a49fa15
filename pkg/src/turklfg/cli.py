"""Command-line driver.

    turklfg parse "Küçük kırmızı top gittikçe hızlandı." [--ctree] [--dot]
    turklfg analyze çocukları
    turklfg batch corpus.txt

Exit codes: 0 success, 1 unknown word, 2 ungrammatical, 3 usage/config error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import avm, glr
from .grammar import GrammarError
from .lexdb import LexiconError, UnknownVerbError
from .morph import format_analysis, to_ascii
from .pipeline import Parser, UnknownWordError

EXIT_OK, EXIT_UNKNOWN_WORD, EXIT_UNGRAMMATICAL, EXIT_USAGE = 0, 1, 2, 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", help="root lexicon file")
    common.add_argument("--suffixes", help="suffix table file")
    common.add_argument("--subcat", help="subcategorisation frame file")
    common.add_argument("--grammar", help="backbone grammar file")
    common.add_argument("--format", choices=("figure3", "json"), default="figure3")
    common.add_argument("--ascii", action="store_true", help="transliterate Turkish letters on output")
    common.add_argument("--max-readings", type=int, default=glr.DEFAULT_CAP, metavar="N")

    ap = _ArgumentParser(prog="turklfg", description="Parse Turkish sentences into c- and f-structures.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    p = sub.add_parser("parse", parents=[common], help="parse one sentence")
    p.add_argument("sentence")
    p.add_argument("--ctree", action="store_true", help="also print constituent trees")
    p.add_argument("--dot", action="store_true", help="print constituent trees as DOT")
    a = sub.add_parser("analyze", parents=[common], help="morphological analyses of a word")
    a.add_argument("word")
    b = sub.add_parser("batch", parents=[common], help="parse one sentence per line")
    b.add_argument("file")
    b.add_argument("--jobs", type=int, default=1)
    return ap


@dataclass
class StatsReport:
    sentences: int = 0
    parsed: int = 0
    failed: int = 0
    parses: list[int] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)

    @property
    def parses_per_sentence(self) -> float:
        return sum(self.parses) / len(self.parses) if self.parses else 0.0

    @property
    def seconds_per_sentence(self) -> float:
        return sum(self.seconds) / len(self.seconds) if self.seconds else 0.0

    def table(self) -> str:
        head = f"{'#S':>5} {'parsed':>7} {'failed':>7} {'#P per Sent.':>13} {'Secs per Sent.':>15}"
        row = (f"{self.sentences:>5} {self.parsed:>7} {self.failed:>7} "
               f"{self.parses_per_sentence:>13.2f} {self.seconds_per_sentence:>15.4f}")
        return head + "\n" + row


def _out(text: str, args) -> str:
    return to_ascii(text) if args.ascii else text


def format_readings(readings, args, sentence: str = "") -> str:
    if args.format == "json":
        payload = {
            "sentence": sentence,
            "ambiguity": len(readings),
            "readings": [{"fstruct": avm.to_json(r.fstruct), "ctree": r.ctree.simplify().bracketed()}
                         for r in readings],
        }
        return _out(json.dumps(payload, ensure_ascii=False, indent=2), args)
    blocks = [f";;; {len(readings)} readings"]
    for n, r in enumerate(readings, 1):
        block = [f";**** ambiguity {n} ***", avm.pretty(r.fstruct)]
        if getattr(args, "dot", False):
            block.append(r.ctree.simplify().dot(f"reading{n}"))
        elif getattr(args, "ctree", False):
            block.append(r.ctree.simplify().pretty())
        blocks.append("\n".join(block))
    return _out("\n\n".join(blocks), args)


def _cmd_parse(parser: Parser, args) -> int:
    try:
        readings = parser.parse(args.sentence)
    except UnknownWordError as exc:
        print(_out(str(exc), args), file=sys.stderr)
        return EXIT_UNKNOWN_WORD
    print(format_readings(readings, args, args.sentence))
    return EXIT_OK if readings else EXIT_UNGRAMMATICAL


def _cmd_analyze(parser: Parser, args) -> int:
    analyses = parser.analyze(args.word)
    if not analyses:
        print(_out(f"unknown word: {args.word}", args), file=sys.stderr)
        return EXIT_UNKNOWN_WORD
    if args.format == "json":
        rows = [{"root": a.root, "features": [list(f) for f in a.features], "suffixes": list(a.suffixes)}
                for a in analyses]
        print(_out(json.dumps(rows, ensure_ascii=False, indent=2), args))
    else:
        for n, a in enumerate(analyses, 1):
            print(_out(f"{n}. {format_analysis(a)}", args))
    return EXIT_OK


def run_batch(parser: Parser, sentences: list[str], jobs: int = 1):
    def one(sentence):
        start = time.perf_counter()
        try:
            readings = parser.parse(sentence)
            status = "ok" if readings else "ungrammatical"
        except UnknownWordError as exc:
            readings, status = [], f"unknown word {exc.word}"
        return sentence, status, len(readings), time.perf_counter() - start

    parser.tables  # build once before any worker starts
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(one, sentences))
    else:
        results = [one(s) for s in sentences]
    report = StatsReport(sentences=len(results))
    for _, status, count, secs in results:
        if count:
            report.parsed += 1
            report.parses.append(count)
            report.seconds.append(secs)
        else:
            report.failed += 1
    return results, report


def _cmd_batch(parser: Parser, args) -> int:
    lines = Path(args.file).read_text(encoding="utf-8").splitlines()
    sentences = [line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#")]
    results, report = run_batch(parser, sentences, args.jobs)
    for n, (sentence, status, count, secs) in enumerate(results, 1):
        print(_out(f"{n:>4} {count:>3} {status:<14} {sentence}", args))
    print()
    print(report.table())
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        parser = Parser.default(args.lexicon, args.suffixes, args.subcat, args.grammar,
                                cap=args.max_readings)
        command = {"parse": _cmd_parse, "analyze": _cmd_analyze, "batch": _cmd_batch}[args.command]
        return command(parser, args)
    except (LexiconError, GrammarError, UnknownVerbError, OSError) as exc:
        print(f"turklfg: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
