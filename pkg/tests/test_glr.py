from __future__ import annotations

from collections import Counter
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_sentences
from turklfg import glr
from turklfg.grammar import GrammarError, load_grammar, make_grammar
from turklfg.morph import RootEntry
from turklfg.pipeline import Parser


def toy(*rules, start="S"):
    return make_grammar([(f"r{i}", lhs, rhs.split(), "lift") for i, (lhs, rhs) in enumerate(rules)],
                        start)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def test_single_rule_tables():
    tables = glr.compile(toy(("S", "a")))
    assert len(tables.states) == 2
    assert tables.shift(0, "a") == 1
    assert tables.reductions(1, glr.END) == [0]
    assert tables.conflicts() == []


def test_ambiguous_grammar_has_multivalued_cell():
    tables = glr.compile(toy(("S", "S S"), ("S", "a")))
    conflicts = tables.conflicts()
    assert conflicts
    state, terminal = conflicts[0]
    kinds = {a[0] for a in tables.action[state][terminal]}
    assert kinds == {"shift", "reduce"}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_catalan_counts(n):
    g = toy(("S", "S S"), ("S", "a"))
    lattice = glr.Lattice.from_terminals([["a"]] * n)
    trees = glr.backbone_parses(lattice, glr.compile(g))
    assert len(trees) == catalan(n - 1)
    assert len(set(trees)) == len(trees)


def test_rejection():
    tables = glr.compile(toy(("S", "a b")))
    assert glr.parse_forest(glr.Lattice.from_terminals([["a"]]), tables) is None
    assert glr.parse_forest(glr.Lattice.from_terminals([["b"], ["a"]]), tables) is None
    assert glr.parse_forest(glr.Lattice.from_terminals([]), tables) is None


@pytest.mark.parametrize("rules,start", [
    ([("S", "")], "S"),
    ([("S", "a")], "T"),
    ([("S", "a"), ("T", "b")], "S"),
    ([("S", "T"), ("T", "T b")], "S"),
    ([("S", "T"), ("T", "S"), ("S", "a")], "S"),
])
def test_bad_grammars(rules, start):
    g = make_grammar([(f"r{i}", lhs, rhs.split(), "lift") for i, (lhs, rhs) in enumerate(rules)], start)
    with pytest.raises(GrammarError):
        glr.compile(g)


def test_oracle_trivial_cases():
    g = toy(("S", "NP"), ("NP", "N"))
    assert len(glr.oracle_parse(glr.Lattice.from_terminals([["N"]]), g)) == 1
    assert glr.oracle_parse(glr.Lattice.from_terminals([[]]), g) == []
    assert glr.backbone_parses(glr.Lattice.from_terminals([[]]), glr.compile(g)) == []


def test_yields_match_input():
    g = toy(("S", "S S"), ("S", "a"), ("S", "b"))
    lattice = glr.Lattice.from_terminals([["a", "b"], ["a"], ["b"]], ["x", "y", "z"])
    for tree in glr.backbone_parses(lattice, glr.compile(g)):
        assert tree.words() == ["x", "y", "z"]
        assert [leaf.position for leaf in tree.leaves()] == [0, 1, 2]


TOY_RULES = [("S", "S S"), ("S", "A"), ("A", "a"), ("A", "A b"), ("S", "b a")]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.sampled_from("ab"), min_size=1, max_size=2, unique=True),
                min_size=1, max_size=6))
def test_glr_matches_oracle_on_toy_grammar(rows):
    g = toy(*TOY_RULES)
    lattice = glr.Lattice.from_terminals(rows)
    glr_trees = Counter(glr.backbone_parses(lattice, glr.compile(g)))
    oracle = Counter(glr.oracle_parse(lattice, g))
    assert glr_trees == oracle


def test_corpus_counts(parser, corpus):
    expected = {"their_children": 1, "possessed_children": 2, "canonical_order": 1, "subject_emphasis": 1, "object_emphasis": 1, "indef_object": 1, "stranded_indef_object": 0,
                "object_then_adverb": 1, "adverb_then_object": 1, "adjective_or_adverb": 2, "little_red_ball": 4, "inverted": 1}
    got = {label: len(parser.parse(sentence)) for label, sentence in corpus.items()}
    assert got == expected


@pytest.mark.parametrize("label,sentence", corpus_sentences())
def test_oracle_equivalence_on_corpus(parser, label, sentence):
    lattice = parser.lattice(sentence)
    assert Counter(glr.backbone_parses(lattice, parser.tables)) == \
        Counter(glr.oracle_parse(lattice, parser.grammar))


@pytest.mark.parametrize("label,sentence", corpus_sentences())
def test_readings_are_filtered_derivations(parser, label, sentence):
    lattice = parser.lattice(sentence)
    backbone = set(glr.backbone_parses(lattice, parser.tables))
    for reading in parser.parse(sentence):
        assert reading.ctree in backbone
        assert "VERB" in reading.fstruct
        assert reading.ctree.words() == lattice.words


def test_parsing_is_deterministic(parser, corpus):
    first = [r.fstruct for r in parser.parse(corpus["little_red_ball"])]
    again = Parser.default().parse(corpus["little_red_ball"])
    assert [r.fstruct for r in again] == first


def test_reading_order_little_red_ball(parser, corpus):
    shapes = [r.ctree.simplify().shape() for r in parser.parse(corpus["little_red_ball"])]
    assert shapes[0] == ("S", ("NP", "ADJ", ("NP", "ADJ", "N")), "GER", "V")
    assert len(set(shapes)) == 4


def test_reading_cap(parser, corpus):
    capped = Parser(parser.db, parser.grammar, cap=2)
    assert len(capped.parse(corpus["little_red_ball"])) == 2


def test_extra_root_adds_a_reading(parser, corpus):
    extended = Parser(parser.db.with_roots([RootEntry("kırmız", "N")]), parser.grammar)
    assert len(extended.parse(corpus["little_red_ball"])) == 5


def test_terminal_for_gerund():
    from turklfg.avm import AVM
    assert glr.terminal_for("ADVP", AVM(CONV=AVM(CAT="V"))) == "GER"
    assert glr.terminal_for("ADVP", AVM()) == "ADVP"
    assert glr.terminal_for("N", AVM()) == "N"


def test_seed_table_size():
    tables = glr.compile(load_grammar())
    assert len(tables.states) == 29
    assert len(tables.conflicts()) == 56


def test_ctree_rendering(parser, corpus):
    tree = parser.parse(corpus["canonical_order"])[0].ctree.simplify()
    assert tree.bracketed().startswith("(S ")
    assert "ver" in tree.pretty()
    dot = tree.dot("t")
    assert dot.startswith("digraph t {") and dot.endswith("}")
