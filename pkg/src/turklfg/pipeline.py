"""Sentence pipeline: tokenise, analyse every word, then parse."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from . import glr, lexdb
from .grammar import Grammar, load_grammar
from .morph import MorphAnalysis, normalize, project

_PUNCT = re.compile(r"^[\"'“”‘’(]+|[\"'“”‘’).,;:!?]+$")


class UnknownWordError(LookupError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"unknown word: {word}")

    def __str__(self):
        return self.args[0]


def tokenize(sentence: str) -> list[str]:
    """Whitespace split with surrounding punctuation stripped."""
    tokens = []
    for raw in sentence.split():
        tok = _PUNCT.sub("", raw)
        if tok:
            tokens.append(tok)
    return tokens


@dataclass
class Parser:
    db: lexdb.LexDB
    grammar: Grammar
    cap: int = glr.DEFAULT_CAP

    @classmethod
    def default(cls, roots=None, suffixes=None, subcat=None, grammar=None, cap=glr.DEFAULT_CAP) -> Parser:
        return cls(lexdb.load(roots, suffixes, subcat), load_grammar(grammar), cap)

    @cached_property
    def tables(self) -> glr.Tables:
        return glr.compile(self.grammar)

    def analyze(self, word: str) -> list[MorphAnalysis]:
        found = []
        for candidate in normalize(word):
            found.extend(self.db.analyzer.analyze(candidate))
        return found

    def lattice(self, sentence: str | list[str]) -> glr.Lattice:
        words = tokenize(sentence) if isinstance(sentence, str) else list(sentence)
        positions = []
        for word in words:
            analyses = self.analyze(word)
            if not analyses:
                raise UnknownWordError(word)
            alts = []
            for a in analyses:
                cat, fs = project(a)
                alts.append(glr.Alternative(glr.terminal_for(cat, fs), cat, fs, a))
            positions.append(glr.Position(analyses[0].surface, tuple(alts)))
        return glr.Lattice.of(positions)

    def parse(self, sentence: str | list[str]) -> list[glr.Reading]:
        return glr.parse(self.lattice(sentence), self.tables, self.db.subcat_of, self.cap)
