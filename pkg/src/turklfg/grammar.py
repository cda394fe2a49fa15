"""Phrase-structure backbone and the constraint programs attached to its rules.

Sentence and gerund-clause rules use the ``XP`` placeholder for every
constituent; the ``sentence`` and ``gerund_clause`` programs then decide what
each constituent is by looking at its category and case.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .avm import AVM, FSet, add_element
from .lexdb import SubcatFrame, data_path

FrameLookup = Callable[[str, str], SubcatFrame]
Constituent = tuple  # (category, AVM)

PLACEHOLDER = "XP"
OBLIQUE_CASES = frozenset({"LOC", "ABL", "INS"})
VERB_CATS = frozenset({"VP", "V"})


class GrammarError(ValueError):
    pass


class Violation(Exception):
    """A constraint failed; names either a sentence-program step or a rule."""

    def __init__(self, message: str, step: int | None = None, rule: str | None = None,
                 constituent=None):
        self.step = step
        self.rule = rule
        self.constituent = constituent
        where = f"step {step}" if step is not None else f"rule {rule}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class Agr:
    person: int
    number: str

    @classmethod
    def parse(cls, text: str) -> Agr:
        m = re.fullmatch(r"([123])(SG|PL)", text or "")
        if not m:
            raise ValueError(f"bad agreement value {text!r}")
        return cls(int(m.group(1)), m.group(2))

    def __str__(self):
        return f"{self.person}{self.number}"


ALL_AGRS = tuple(Agr(p, n) for p in (1, 2, 3) for n in ("SG", "PL"))
_3PL = Agr(3, "PL")
_3SG = Agr(3, "SG")


def _agr(value) -> Agr:
    return value if isinstance(value, Agr) else Agr.parse(value)


def check_agreement(subj, verb) -> bool:
    """Subject-verb agreement; a 3PL subject may take a 3SG verb."""
    subj, verb = _agr(subj), _agr(verb)
    if subj.person != verb.person:
        return False
    return subj.number == verb.number or (subj == _3PL and verb == _3SG)


def check_poss_compound(modifier, possessive) -> bool:
    """Genitive modifier vs possessive of the head; 3PL may pair with 3SG."""
    modifier, possessive = _agr(modifier), _agr(possessive)
    return modifier == possessive or (modifier == _3PL and possessive == _3SG)


@dataclass(frozen=True)
class Rule:
    id: str
    lhs: str
    rhs: tuple[str, ...]
    program: str
    index: int = 0

    def __str__(self):
        return f"{self.id}: {self.lhs} -> {' '.join(self.rhs)} @{self.program}"


def definiteness(fs: AVM) -> str:
    if "DEF" in fs:
        return fs["DEF"]
    if fs.get("CASE") == "ACC" or "POSS" in fs or fs.get("CAT") == "PRON":
        return "+"
    return "-"


def verb_root(verb: AVM) -> str | None:
    return verb.get("R") or verb.path("CONV", "R")


def _frame_for(verb: AVM, frames: FrameLookup) -> SubcatFrame:
    return frames(verb_root(verb), verb.get("VOICE", "ACT"))


def _roles_in(fs: AVM, frame: SubcatFrame) -> list[str]:
    return [a.role for a in frame.args if a.role in fs]


def assign_constituents(children: Sequence[Constituent], frames: FrameLookup) -> AVM:
    """Assign grammatical functions to order-free constituents.

    Exactly one child must be the verb (``VP`` or ``V``).  ADVPs become
    adverbial complements, the nominative NP the subject, other NPs objects
    when the verb's frame licenses their case.  Then required objects,
    role uniqueness and subject-verb agreement are checked.
    """
    if not children:
        raise Violation("no constituents", step=1)
    # 1) find the verb
    verbs = [i for i, (cat, _) in enumerate(children) if cat in VERB_CATS]
    if len(verbs) != 1:
        raise Violation(f"expected one verb, found {len(verbs)}", step=1)
    vcat, vfs = children[verbs[0]]
    base = vfs if vcat == "VP" else AVM(VERB=vfs)
    verb = base["VERB"]
    frame = _frame_for(verb, frames)
    data = dict(base.items())
    objects = [(role, data[role]) for role in _roles_in(base, frame)]
    subject = None

    # 2) the other constituents
    for i, (cat, fs) in enumerate(children):
        if i == verbs[0]:
            continue
        if cat == "ADVP":
            data = dict(add_element(AVM(data), "ADVCOMPLEMENTS", fs).items())
            continue
        if cat != "NP":
            raise Violation(f"unexpected constituent {cat}", step=2, constituent=fs)
        case = fs.get("CASE", "NOM")
        if case == "NOM":
            if subject is not None:
                raise Violation("two nominative subjects", step=2, constituent=fs)
            subject = fs
            continue
        roles = frame.roles_for_case(case)
        if roles:
            taken = {r for r, _ in objects}
            role = next((r for r in roles if r not in taken), roles[0])
            obj = fs.set("DEF", "+") if case == "ACC" else fs
            objects.append((role, obj))
        elif case in OBLIQUE_CASES:
            data = dict(add_element(AVM(data), "ADVCOMPLEMENTS", fs).items())
        else:
            raise Violation(f"{verb_root(verb)} takes no {case} object", step=2, constituent=fs)

    # 3) all required objects present
    have = [r for r, _ in objects]
    for role in frame.required_roles():
        if role not in have:
            raise Violation(f"missing {role} object of {frame.root}", step=3)
    # 4) no thematic role twice
    if len(set(have)) != len(have):
        raise Violation("two objects with the same thematic role", step=4)
    for role, obj in objects:
        data[role] = obj

    # 5) subject-verb agreement, or a covert subject
    verb_agr = verb.get("AGR")
    if subject is not None:
        if verb_agr and not check_agreement(subject.get("AGR", "3SG"), verb_agr):
            raise Violation("subject and verb disagree", step=5, constituent=subject)
        data["SUBJ"] = subject
    elif verb_agr:
        data["SUBJ"] = AVM(AGR=verb_agr, COVERT="+")
    return AVM(data)


# -- rule programs ---------------------------------------------------------

def _lift(rule, children, frames):
    return children[0][1]


def _adj_nominal(rule, children, frames):
    fs = children[0][1]
    return fs.set("CAT", "NP").set("DEF", definiteness(fs))


def _plain_modifier(rule, fs):
    if fs.get("CASE", "NOM") != "NOM" or "POSS" in fs:
        raise Violation("inflected adjective cannot modify", rule=rule.id, constituent=fs)


def _np_modifier(rule, children, frames):
    adj = children[0][1]
    head = children[1][1]
    _plain_modifier(rule, adj)
    if head.get("CAT") == "PRON":
        raise Violation("pronoun cannot be modified", rule=rule.id, constituent=head)
    out = {"CAT": "NP"}
    if head.get("CAT") == "N":
        out["MODIFIER"] = adj
        out["MODIFIED"] = head
        if "LEX" in head:
            out["LEX"] = head["LEX"]
    else:
        out["MODIFIER"] = adj.only("SUB", "CASE", "AGR", "LEX")
        out["MODIFIED"] = head
    for name in ("AGR", "CASE", "POSS"):
        if name in head:
            out[name] = head[name]
    out["DEF"] = definiteness(head)
    return AVM(out)


def _poss_compound(rule, children, frames):
    mod = children[0][1]
    head = children[1][1]
    if mod.get("CASE") != "GEN":
        raise Violation("modifier of a possessive compound must be genitive", rule=rule.id, constituent=mod)
    if "POSS" not in head:
        raise Violation("head of a possessive compound must be possessive", rule=rule.id, constituent=head)
    mod_agr, poss = Agr.parse(mod.get("AGR", "3SG")), Agr.parse(head["POSS"])
    if not check_poss_compound(mod_agr, poss):
        raise Violation(f"{mod_agr} modifier with {poss} possessive", rule=rule.id)
    # the 3PL/3SG exception only for a singular head; a plural head is already 3PL-possessive
    if mod_agr != poss and head.get("AGR", "3SG") != "3SG":
        raise Violation("3SG possessive on a plural head under a 3PL modifier", rule=rule.id)
    return AVM(CAT="NP", MODIFIER=mod, MODIFIED=head, AGR=head.get("AGR", "3SG"),
               CASE=head.get("CASE", "NOM"), DEF="+")


def _indefinite_object(rule, np, verb, frames):
    if np.get("CASE", "NOM") != "NOM" or definiteness(np) == "+":
        raise Violation("preverbal bare object must be nominative and indefinite",
                        rule=rule.id, constituent=np)
    role = _frame_for(verb, frames).indefinite_role()
    if role is None:
        raise Violation(f"{verb_root(verb)} takes no indefinite object", rule=rule.id)
    return role, np.set("DEF", "-")


def _qual_adverb(rule, adj):
    if adj.get("SUB") != "QUAL":
        raise Violation("only qualitative adjectives act as manner adverbs", rule=rule.id, constituent=adj)
    _plain_modifier(rule, adj)
    return adj.set("CAT", "ADVP")


def _vp_verb(rule, children, frames):
    return AVM(VERB=children[-1][1])


def _vp_indef_object(rule, children, frames):
    verb = children[-1][1]
    role, obj = _indefinite_object(rule, children[0][1], verb, frames)
    return AVM({"VERB": verb, role: obj})


def _vp_qual(rule, children, frames):
    verb = children[-1][1]
    return AVM(VERB=verb, ADVCOMPLEMENTS=FSet([_qual_adverb(rule, children[0][1])]))


def _vp_qual_indef_object(rule, children, frames):
    verb = children[-1][1]
    adv = _qual_adverb(rule, children[0][1])
    role, obj = _indefinite_object(rule, children[1][1], verb, frames)
    return AVM({"VERB": verb, role: obj, "ADVCOMPLEMENTS": FSet([adv])})


def _sentence(rule, children, frames):
    return assign_constituents(children, frames)


def _gerund_clause(rule, children, frames):
    gerund = children[-1][1]
    clause = assign_constituents(list(children[:-1]) + [("V", gerund)], frames)
    return clause.set("CAT", "ADVP").set("SUB", "TEMP")


PROGRAMS: dict[str, Callable] = {
    "lift": _lift,
    "constituent": _lift,
    "adj_nominal": _adj_nominal,
    "np_modifier": _np_modifier,
    "poss_compound": _poss_compound,
    "vp_verb": _vp_verb,
    "vp_indef_object": _vp_indef_object,
    "vp_qual": _vp_qual,
    "vp_qual_indef_object": _vp_qual_indef_object,
    "sentence": _sentence,
    "gerund_clause": _gerund_clause,
}


def eval_rule(rule: Rule, children: Sequence[Constituent], frames: FrameLookup) -> Constituent:
    """Run a rule's program; returns (category, f-structure) or raises Violation."""
    if len(children) != len(rule.rhs):
        raise GrammarError(f"{rule.id} expects {len(rule.rhs)} children")
    fs = PROGRAMS[rule.program](rule, children, frames)
    cat = children[0][0] if rule.lhs == PLACEHOLDER else rule.lhs
    return cat, fs


_RULE_LINE = re.compile(r"^\s*([\w.\-]+)\s*:\s*(\w+)\s*->\s*([^@]+?)\s*@(\w+)\s*$")


@dataclass(frozen=True)
class Grammar:
    rules: tuple[Rule, ...]
    start: str = "S"

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(r.lhs for r in self.rules)

    @property
    def terminals(self) -> frozenset:
        nts = self.nonterminals
        return frozenset(s for r in self.rules for s in r.rhs if s not in nts)

    def rules_for(self, lhs: str) -> list[Rule]:
        return [r for r in self.rules if r.lhs == lhs]


def make_grammar(rules: Iterable[tuple], start: str = "S", check_programs: bool = True) -> Grammar:
    """Build a grammar from (id, lhs, rhs, program) tuples."""
    built = []
    ids = set()
    for index, (rid, lhs, rhs, program) in enumerate(rules):
        if rid in ids:
            raise GrammarError(f"duplicate rule id {rid}")
        ids.add(rid)
        if check_programs and program not in PROGRAMS:
            raise GrammarError(f"{rid}: unknown program @{program}")
        built.append(Rule(rid, lhs, tuple(rhs), program, index))
    return Grammar(tuple(built), start)


def parse_grammar(text: str, source: str = "<grammar>", start: str = "S") -> Grammar:
    rules = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RULE_LINE.match(line)
        if not m:
            raise GrammarError(f"{source}:{number}: expected 'id: LHS -> RHS... @program'")
        rules.append((m.group(1), m.group(2), m.group(3).split(), m.group(4)))
    try:
        return make_grammar(rules, start)
    except GrammarError as exc:
        raise GrammarError(f"{source}: {exc}") from None


def load_grammar(path=None) -> Grammar:
    path = Path(path) if path else data_path("grammar.txt")
    return parse_grammar(path.read_text(encoding="utf-8"), str(path))
