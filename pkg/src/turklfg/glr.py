"""Generalized LR parsing over lexically ambiguous input.

The backbone grammar is compiled into SLR(1) tables whose cells may hold
several actions.  Parsing runs all alternatives in lock-step on a
graph-structured stack and records derivations in a shared packed forest;
constraint programs are evaluated afterwards, bottom-up over the forest.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

from .avm import AVM
from .grammar import Grammar, GrammarError, Violation, eval_rule

log = logging.getLogger(__name__)

END = "$"
DEFAULT_CAP = 256


# -- input -----------------------------------------------------------------

@dataclass(frozen=True)
class Alternative:
    terminal: str
    category: str
    fs: AVM
    analysis: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Position:
    word: str
    alternatives: tuple[Alternative, ...]


class Lattice(tuple):
    """A sentence as a tuple of :class:`Position`."""

    @classmethod
    def of(cls, positions: Iterable[Position]) -> Lattice:
        return cls(positions)

    @classmethod
    def from_terminals(cls, rows: Sequence[Sequence[str]], words: Sequence[str] | None = None) -> Lattice:
        """Feature-less lattice, handy for backbone-only work."""
        words = words or [f"w{i}" for i in range(len(rows))]
        return cls(Position(w, tuple(Alternative(t, t, AVM()) for t in row))
                   for w, row in zip(words, rows))

    @property
    def words(self) -> list[str]:
        return [p.word for p in self]


def terminal_for(category: str, fs: AVM) -> str:
    """Backbone terminal for a lexical category; gerunds get their own."""
    if category == "ADVP" and fs.path("CONV", "CAT") == "V":
        return "GER"
    return category


# -- tables ----------------------------------------------------------------

@dataclass
class Tables:
    grammar: Grammar
    states: list[frozenset]
    action: list[dict[str, list[tuple]]]
    goto: list[dict[str, int]]

    def conflicts(self) -> list[tuple[int, str]]:
        return [(s, t) for s, row in enumerate(self.action)
                for t, acts in row.items() if len(acts) > 1]

    def reductions(self, state: int, lookahead: str) -> list[int]:
        return [a[1] for a in self.action[state].get(lookahead, ()) if a[0] == "reduce"]

    def shift(self, state: int, terminal: str) -> int | None:
        for a in self.action[state].get(terminal, ()):
            if a[0] == "shift":
                return a[1]
        return None


def _check_grammar(grammar: Grammar) -> None:
    nts = grammar.nonterminals
    if grammar.start not in nts:
        raise GrammarError(f"start symbol {grammar.start} has no rules")
    for r in grammar.rules:
        if not r.rhs:
            raise GrammarError(f"{r.id}: empty right-hand sides are not supported")
    reachable = {grammar.start}
    todo = [grammar.start]
    while todo:
        sym = todo.pop()
        for r in grammar.rules_for(sym):
            for s in r.rhs:
                if s in nts and s not in reachable:
                    reachable.add(s)
                    todo.append(s)
    if nts - reachable:
        raise GrammarError(f"unreachable nonterminals: {sorted(nts - reachable)}")
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for r in grammar.rules:
            if r.lhs not in productive and all(s not in nts or s in productive for s in r.rhs):
                productive.add(r.lhs)
                changed = True
    if nts - productive:
        raise GrammarError(f"unproductive nonterminals: {sorted(nts - productive)}")
    # unit-rule cycles (A -> B -> A) would give infinitely many derivations
    units: dict[str, set[str]] = {n: set() for n in nts}
    for r in grammar.rules:
        if len(r.rhs) == 1 and r.rhs[0] in nts:
            units[r.lhs].add(r.rhs[0])
    for n in nts:
        seen, todo = set(), list(units[n])
        while todo:
            m = todo.pop()
            if m == n:
                raise GrammarError(f"cyclic unit derivation through {n}")
            if m not in seen:
                seen.add(m)
                todo.extend(units[m])


def _follow_sets(grammar: Grammar) -> dict[str, set[str]]:
    nts = grammar.nonterminals
    first = {t: {t} for t in grammar.terminals}
    for n in nts:
        first[n] = set()
    changed = True
    while changed:
        changed = False
        for r in grammar.rules:
            new = first[r.rhs[0]] - first[r.lhs]
            if new:
                first[r.lhs] |= new
                changed = True
    follow = {n: set() for n in nts}
    follow[grammar.start].add(END)
    changed = True
    while changed:
        changed = False
        for r in grammar.rules:
            for i, sym in enumerate(r.rhs):
                if sym not in nts:
                    continue
                new = first[r.rhs[i + 1]] if i + 1 < len(r.rhs) else follow[r.lhs]
                if new - follow[sym]:
                    follow[sym] |= new
                    changed = True
    return follow


def compile(grammar: Grammar) -> Tables:
    """SLR(1) tables; conflicts become multi-valued cells."""
    _check_grammar(grammar)
    rules = grammar.rules
    by_lhs: dict[str, list[int]] = {}
    for i, r in enumerate(rules):
        by_lhs.setdefault(r.lhs, []).append(i)

    def closure(items):
        todo = list(items)
        result = set(todo)
        while todo:
            ri, dot = todo.pop()
            rhs = rules[ri].rhs
            if dot < len(rhs):
                for rj in by_lhs.get(rhs[dot], ()):
                    item = (rj, 0)
                    if item not in result:
                        result.add(item)
                        todo.append(item)
        return frozenset(result)

    start = closure((ri, 0) for ri in by_lhs[grammar.start])
    states = [start]
    index = {start: 0}
    transitions: list[dict[str, int]] = []
    i = 0
    while i < len(states):
        state = states[i]
        moves: dict[str, set] = {}
        for ri, dot in state:
            rhs = rules[ri].rhs
            if dot < len(rhs):
                moves.setdefault(rhs[dot], set()).add((ri, dot + 1))
        row = {}
        for sym in sorted(moves):
            target = closure(moves[sym])
            if target not in index:
                index[target] = len(states)
                states.append(target)
            row[sym] = index[target]
        transitions.append(row)
        i += 1

    follow = _follow_sets(grammar)
    nts = grammar.nonterminals
    action: list[dict[str, list[tuple]]] = []
    goto: list[dict[str, int]] = []
    for s, state in enumerate(states):
        acts: dict[str, list[tuple]] = {}
        gt = {}
        for sym, target in transitions[s].items():
            if sym in nts:
                gt[sym] = target
            else:
                acts.setdefault(sym, []).append(("shift", target))
        for ri, dot in sorted(state):
            if dot == len(rules[ri].rhs):
                for t in sorted(follow[rules[ri].lhs]):
                    acts.setdefault(t, []).append(("reduce", ri))
        action.append(acts)
        goto.append(gt)
    return Tables(grammar, states, action, goto)


# -- forest ----------------------------------------------------------------

class ForestNode:
    """All derivations of ``symbol`` over ``[start, end)``."""

    __slots__ = ("symbol", "start", "end", "families", "_seen")

    def __init__(self, symbol, start, end):
        self.symbol = symbol
        self.start = start
        self.end = end
        self.families: list = []
        self._seen: set = set()

    def add(self, family) -> None:
        if family not in self._seen:
            self._seen.add(family)
            self.families.append(family)

    def __repr__(self):
        return f"<{self.symbol} {self.start}:{self.end} x{len(self.families)}>"


class _StackNode:
    __slots__ = ("state", "pos", "edges")

    def __init__(self, state, pos):
        self.state = state
        self.pos = pos
        self.edges: dict = {}  # predecessor -> ForestNode


def _paths(node, length, via):
    """Paths of ``length`` edges back from ``node``: (labels left-to-right, end)."""
    def walk(current, remaining, labels, first):
        if remaining == 0:
            yield tuple(reversed(labels)), current
            return
        for pred, label in list(current.edges.items()):
            if first and via is not None and pred is not via:
                continue
            labels.append(label)
            yield from walk(pred, remaining - 1, labels, False)
            labels.pop()
    yield from walk(node, length, [], True)


def parse_forest(lattice: Lattice, tables: Tables) -> ForestNode | None:
    """Run the GSS over the lattice; the root forest node, or None."""
    grammar = tables.grammar
    rules = grammar.rules
    n = len(lattice)
    if n == 0:
        return None
    nodes: dict[tuple, ForestNode] = {}

    def forest(symbol, start, end):
        key = (symbol, start, end)
        fn = nodes.get(key)
        if fn is None:
            fn = nodes[key] = ForestNode(symbol, start, end)
        return fn

    root = _StackNode(0, 0)
    frontier = {0: root}
    result = None
    for i in range(n + 1):
        lookaheads = [END] if i == n else sorted({a.terminal for a in lattice[i].alternatives})
        queue = deque()

        def schedule(node, via):
            seen = []
            for t in lookaheads:
                for ri in tables.reductions(node.state, t):
                    if ri not in seen:
                        seen.append(ri)
                        queue.append((node, ri, via))

        for node in list(frontier.values()):
            schedule(node, None)
        while queue:
            node, ri, via = queue.popleft()
            rule = rules[ri]
            for labels, base in list(_paths(node, len(rule.rhs), via)):
                fn = forest(rule.lhs, base.pos, i)
                fn.add((ri, labels))
                if i == n and base is root and rule.lhs == grammar.start:
                    result = fn
                target = tables.goto[base.state].get(rule.lhs)
                if target is None:
                    continue
                w = frontier.get(target)
                if w is None:
                    w = frontier[target] = _StackNode(target, i)
                    w.edges[base] = fn
                    schedule(w, None)
                elif base not in w.edges:
                    w.edges[base] = fn
                    schedule(w, base)
        if i == n:
            break
        nxt: dict[int, _StackNode] = {}
        for node in frontier.values():
            for k, alt in enumerate(lattice[i].alternatives):
                target = tables.shift(node.state, alt.terminal)
                if target is None:
                    continue
                leaf = forest(alt.terminal, i, i + 1)
                leaf.add(k)
                w = nxt.get(target)
                if w is None:
                    w = nxt[target] = _StackNode(target, i + 1)
                w.edges[node] = leaf
        if not nxt:
            return None
        frontier = nxt
    return result


# -- trees -----------------------------------------------------------------

@dataclass(frozen=True)
class CTree:
    """Constituent tree; leaves carry the word, its position and alternative."""

    label: str
    children: tuple = ()
    word: str | None = None
    position: int | None = None
    alt: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.word is not None

    def leaves(self) -> list[CTree]:
        if self.is_leaf:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def words(self) -> list[str]:
        return [leaf.word for leaf in self.leaves()]

    def alts(self) -> tuple[int, ...]:
        return tuple(leaf.alt for leaf in self.leaves())

    def shape(self):
        """Labels only: ``(label, child shapes...)``; leaves are bare labels."""
        if self.is_leaf:
            return self.label
        return (self.label,) + tuple(c.shape() for c in self.children)

    def simplify(self) -> CTree:
        """Drop placeholder nodes and unary phrasal wrappers over lexical items."""
        if self.is_leaf:
            return self
        kids = []
        for c in self.children:
            s = c.simplify()
            if s.label == "XP" and not s.is_leaf:
                kids.extend(s.children)
            else:
                kids.append(s)
        if self.label == "XP":
            return CTree("XP", tuple(kids))
        if len(kids) == 1 and kids[0].is_leaf and (self.label, kids[0].label) in _LEXICAL_LIFTS:
            return kids[0]
        return CTree(self.label, tuple(kids))

    def pretty(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.is_leaf:
            return f"{pad}{self.label} {self.word}"
        lines = [f"{pad}{self.label}"]
        lines.extend(c.pretty(indent + 1) for c in self.children)
        return "\n".join(lines)

    def bracketed(self) -> str:
        if self.is_leaf:
            return f"({self.label} {self.word})"
        return f"({self.label} " + " ".join(c.bracketed() for c in self.children) + ")"

    def dot(self, name: str = "ctree") -> str:
        lines = [f"digraph {name} {{", "  node [shape=plaintext];"]
        counter = [0]

        def emit(t):
            me = f"n{counter[0]}"
            counter[0] += 1
            lines.append(f'  {me} [label="{t.label}"];')
            if t.is_leaf:
                word = f"w{counter[0]}"
                counter[0] += 1
                lines.append(f'  {word} [label="{t.word}", fontname="italic"];')
                lines.append(f"  {me} -> {word};")
            for c in t.children:
                lines.append(f"  {me} -> {emit(c)};")
            return me

        emit(self)
        lines.append("}")
        return "\n".join(lines)


_LEXICAL_LIFTS = frozenset({("NP", "N"), ("NP", "PRON"), ("VP", "V"), ("ADVP", "GER"), ("ADVP", "ADV")})


def _leaf(lattice, node, k):
    return CTree(node.symbol, (), lattice[node.start].word, node.start, k)


def _ordered_families(node, grammar):
    if node.families and isinstance(node.families[0], int):
        return sorted(node.families)
    return sorted(node.families, key=lambda fam: (
        grammar.rules[fam[0]].index, tuple(c.start - c.end for c in fam[1])))


def unpack(root: ForestNode, lattice: Lattice, grammar: Grammar,
           cap: int | None = None) -> list[CTree]:
    """Every backbone tree in the forest (at most ``cap``)."""
    memo: dict[int, list[CTree]] = {}

    def trees(node) -> list[CTree]:
        key = id(node)
        if key in memo:
            return memo[key]
        out: list[CTree] = []
        for fam in _ordered_families(node, grammar):
            if cap is not None and len(out) >= cap:
                break
            if isinstance(fam, int):
                out.append(_leaf(lattice, node, fam))
                continue
            ri, kids = fam
            for combo in product(*(trees(k) for k in kids)):
                out.append(CTree(node.symbol, tuple(combo)))
                if cap is not None and len(out) >= cap:
                    break
        memo[key] = out
        return out

    return trees(root) if root is not None else []


# -- readings --------------------------------------------------------------

@dataclass(frozen=True)
class Reading:
    ctree: CTree
    fstruct: AVM

    @property
    def alts(self) -> tuple[int, ...]:
        return self.ctree.alts()


def evaluate(root: ForestNode | None, lattice: Lattice, grammar: Grammar, frames,
             cap: int = DEFAULT_CAP) -> list[Reading]:
    """Run the rule programs over the forest; derivations that violate a constraint are dropped."""
    if root is None:
        return []
    memo: dict[int, list[tuple]] = {}

    def results(node) -> list[tuple]:
        key = id(node)
        if key in memo:
            return memo[key]
        out = []
        for fam in _ordered_families(node, grammar):
            if cap is not None and len(out) >= cap:
                break
            if isinstance(fam, int):
                alt = lattice[node.start].alternatives[fam]
                out.append((_leaf(lattice, node, fam), alt.category, alt.fs))
                continue
            ri, kids = fam
            rule = grammar.rules[ri]
            for combo in product(*(results(k) for k in kids)):
                try:
                    cat, fs = eval_rule(rule, [(c[1], c[2]) for c in combo], frames)
                except Violation:
                    continue
                out.append((CTree(node.symbol, tuple(c[0] for c in combo)), cat, fs))
                if len(out) >= cap:
                    log.warning("reading cap %d reached at %r", cap, node)
                    break
            if len(out) >= cap:
                break
        memo[key] = out
        return out

    readings = [Reading(tree, fs) for tree, _, fs in results(root)]
    readings.sort(key=lambda r: r.alts)
    return readings


def parse(lattice: Lattice, tables: Tables, frames, cap: int = DEFAULT_CAP) -> list[Reading]:
    """All readings that survive the constraint programs, in a deterministic order."""
    root = parse_forest(lattice, tables)
    return evaluate(root, lattice, tables.grammar, frames, cap)


def backbone_parses(lattice: Lattice, tables: Tables) -> list[CTree]:
    return unpack(parse_forest(lattice, tables), lattice, tables.grammar)


# -- oracle ----------------------------------------------------------------

def oracle_parse(lattice: Lattice, grammar: Grammar) -> list[CTree]:
    """Every backbone derivation, by exhaustive enumeration over spans."""
    nts = grammar.nonterminals
    memo: dict[tuple, list[CTree]] = {}
    active: set[tuple] = set()

    def splits(symbols, i, j) -> Iterator[list[CTree]]:
        if not symbols:
            if i == j:
                yield []
            return
        first, rest = symbols[0], symbols[1:]
        for mid in range(i + 1, j - len(rest) + 1):
            heads = derive(first, i, mid)
            if not heads:
                continue
            for tail in splits(rest, mid, j):
                for head in heads:
                    yield [head] + tail

    def derive(symbol, i, j) -> list[CTree]:
        key = (symbol, i, j)
        if key in memo:
            return memo[key]
        if symbol not in nts:
            if j != i + 1:
                return []
            return [CTree(symbol, (), lattice[i].word, i, k)
                    for k, alt in enumerate(lattice[i].alternatives) if alt.terminal == symbol]
        if key in active:
            return []
        active.add(key)
        out = []
        for rule in grammar.rules_for(symbol):
            if len(rule.rhs) > j - i:
                continue
            for kids in splits(rule.rhs, i, j):
                out.append(CTree(symbol, tuple(kids)))
        active.discard(key)
        memo[key] = out
        return out

    if not lattice:
        return []
    return derive(grammar.start, 0, len(lattice))
