"""Attribute-value matrices (f-structures).

Three kinds of value exist:

* atoms are plain ``str`` (``"3SG"``, ``"NOM"``, ``"top"``),
* :class:`AVM` is an immutable mapping from feature names to values,
* :class:`FSet` is an immutable set of values (``ADVCOMPLEMENTS``).

Values are trees; there is no reentrancy.
"""
from __future__ import annotations

import json
import re
from collections.abc import Mapping
from typing import Iterable, Iterator, Union

Value = Union[str, "AVM", "FSet"]

# Printing order for features; anything unlisted follows alphabetically.
CANONICAL_ORDER = (
    "SUBJ", "VERB", "THEME", "GOAL", "LOCATIVE", "SOURCE", "ADVCOMPLEMENTS",
    "SUB", "TYPE", "VOICE", "WITH-SUFFIX", "LEX", "CAT", "R", "ASPECT",
    "AGR", "CASE", "POSS", "DEF", "COVERT", "CONV", "MODIFIER", "MODIFIED",
)
_RANK = {name: i for i, name in enumerate(CANONICAL_ORDER)}

# Features printed starred even though their value is an AVM.
STARRED_AVM_FEATURES = frozenset({"CONV"})
# Features whose values are always quoted strings.
STRING_FEATURES = frozenset({"LEX", "R", "WITH-SUFFIX"})
# Set-valued features; a singleton prints as its bare element.
SET_FEATURES = frozenset({"ADVCOMPLEMENTS"})

_SYMBOL = re.compile(r"^[A-Z0-9+\-]+$")


class Clash(Exception):
    """Raised when two values cannot be unified."""

    def __init__(self, path: tuple[str, ...], left, right):
        self.path = path
        self.left = left
        self.right = right
        where = ".".join(path) or "<root>"
        super().__init__(f"clash at {where}: {_short(left)} vs {_short(right)}")


def _short(v) -> str:
    text = v if isinstance(v, str) else pretty(v, width=10**6)
    return text if len(text) <= 40 else text[:37] + "..."


class AVM(Mapping):
    """Immutable feature structure; equality ignores feature order."""

    __slots__ = ("_data", "_hash")

    def __init__(self, items: Mapping | Iterable[tuple[str, Value]] = (), **features: Value):
        data = dict(items)
        data.update(features)
        for key, value in data.items():
            if not isinstance(key, str):
                raise TypeError(f"feature name must be str, not {type(key).__name__}")
            if not isinstance(value, (str, AVM, FSet)):
                raise TypeError(f"bad value for {key}: {value!r}")
        self._data = data
        self._hash = None

    def __getitem__(self, key: str) -> Value:
        return self._data[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, AVM):
            return self._data == other._data
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __repr__(self):
        return f"AVM({self._data!r})"

    def set(self, feature: str, value: Value) -> AVM:
        """Return a copy with ``feature`` overwritten (no unification)."""
        data = dict(self._data)
        data[feature] = value
        return AVM(data)

    def without(self, *features: str) -> AVM:
        return AVM((k, v) for k, v in self._data.items() if k not in features)

    def only(self, *features: str) -> AVM:
        return AVM((k, self._data[k]) for k in features if k in self._data)

    def path(self, *features: str):
        """Follow a feature path; None if any step is missing."""
        value = self
        for f in features:
            if not isinstance(value, AVM) or f not in value:
                return None
            value = value[f]
        return value


class FSet(frozenset):
    """Set-valued feature content."""

    def __repr__(self):
        return f"FSet({sorted(map(repr, self))})"


EMPTY = AVM()


def unify(a: Value, b: Value, _path: tuple[str, ...] = ()) -> Value:
    """Least structure subsumed by both ``a`` and ``b``; raises :class:`Clash`."""
    if isinstance(a, AVM) and isinstance(b, AVM):
        if not a:
            return b
        if not b:
            return a
        data = dict(a.items())
        for key, bv in b.items():
            if key in data:
                data[key] = unify(data[key], bv, _path + (key,))
            else:
                data[key] = bv
        return AVM(data)
    if type(a) is type(b) and a == b:
        return a
    raise Clash(_path, a, b)


def add_element(fs: AVM, feature: str, element: Value) -> AVM:
    """Add ``element`` to the set held at ``feature`` (created if absent)."""
    current = fs.get(feature)
    if current is None:
        return fs.set(feature, FSet([element]))
    if not isinstance(current, FSet):
        raise TypeError(f"{feature} holds {type(current).__name__}, not a set")
    return fs.set(feature, FSet(current | {element}))


def sort_features(fs: AVM) -> list[str]:
    return sorted(fs, key=lambda f: (_RANK.get(f, len(_RANK)), f))


def _atom_text(feature: str | None, atom: str) -> str:
    if feature in STRING_FEATURES or not _SYMBOL.match(atom):
        return json.dumps(atom, ensure_ascii=False)
    return atom


def _label(feature: str, value: Value) -> str:
    if isinstance(value, str) or feature in STARRED_AVM_FEATURES:
        return f"*{feature}*"
    return feature


def _one_line(fs: AVM) -> str | None:
    if any(not isinstance(v, str) for v in fs.values()):
        return None
    parts = [f"({_label(f, fs[f])} {_atom_text(f, fs[f])})" for f in sort_features(fs)]
    return "(" + " ".join(parts) + ")"


def _render(value: Value, feature: str | None, indent: int, width: int) -> str:
    if isinstance(value, str):
        return _atom_text(feature, value)
    if isinstance(value, FSet):
        if len(value) == 1 and feature in SET_FEATURES:
            return _render(next(iter(value)), None, indent, width)
        items = sorted(_render(v, None, indent + 1, width) for v in value)
        pad = "\n" + " " * (indent + 1)
        return "(*MULTIPLE*" + "".join(pad + item for item in items) + ")"
    if not value:
        return "()"
    flat = _one_line(value)
    if flat is not None and indent + len(flat) <= width:
        return flat
    pad = " " * (indent + 1)
    lines = []
    for f in sort_features(value):
        v = value[f]
        head = f"({_label(f, v)}"
        if isinstance(v, str):
            lines.append(f"{head} {_atom_text(f, v)})")
        else:
            inner = _render(v, f, indent + 3, width)
            lines.append(f"{head}\n{pad}  {inner})")
    body = ("\n" + pad).join(lines)
    return "(" + body + ")"


def pretty(fs: Value, width: int = 72) -> str:
    """Parenthesised output: ``((*AGR* 3SG) (*CASE* NOM))``."""
    return _render(fs, None, 0, width)


def to_json(fs: Value):
    """Plain-data dump; sets become ``{"$set": [...]}``."""
    if isinstance(fs, str):
        return fs
    if isinstance(fs, FSet):
        items = [to_json(v) for v in fs]
        return {"$set": sorted(items, key=lambda x: json.dumps(x, sort_keys=True, ensure_ascii=False))}
    return {f: to_json(fs[f]) for f in sort_features(fs)}


def from_json(data) -> Value:
    if isinstance(data, str):
        return data
    if isinstance(data, dict) and set(data) == {"$set"}:
        return FSet(from_json(v) for v in data["$set"])
    return AVM((k, from_json(v)) for k, v in data.items())


_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"\\]|\\.)*")|([^\s()"]+))')


def read(text: str) -> Value:
    """Read the parenthesised notation back into a value."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"unreadable input at offset {pos}")
        pos = m.end()
        if m.group(1):
            tokens.append("(")
        elif m.group(2):
            tokens.append(")")
        elif m.group(3):
            tokens.append(("str", json.loads(m.group(3))))
        else:
            tokens.append(("sym", m.group(4)))
    try:
        value, rest = _read_value(tokens, 0, None)
    except IndexError:
        raise ValueError("unexpected end of input") from None
    if rest != len(tokens):
        raise ValueError("trailing tokens after structure")
    return value


def _expect(tokens, i, tok):
    if i >= len(tokens) or tokens[i] != tok:
        raise ValueError(f"expected {tok!r} at token {i}")
    return i + 1


def _read_value(tokens, i, feature):
    if i >= len(tokens):
        raise ValueError("unexpected end of input")
    tok = tokens[i]
    if isinstance(tok, tuple):
        return tok[1], i + 1
    if tok != "(":
        raise ValueError(f"unexpected {tok!r}")
    nxt = tokens[i + 1] if i + 1 < len(tokens) else None
    if nxt == ("sym", "*MULTIPLE*"):
        i += 2
        items = []
        while tokens[i] != ")":
            item, i = _read_value(tokens, i, None)
            items.append(item)
        return FSet(items), i + 1
    # an AVM: ( (label value) ... )
    i += 1
    data = {}
    while tokens[i] != ")":
        i = _expect(tokens, i, "(")
        if not isinstance(tokens[i], tuple) or tokens[i][0] != "sym":
            raise ValueError(f"feature name expected at token {i}")
        name = tokens[i][1].strip("*")
        value, i = _read_value(tokens, i + 1, name)
        i = _expect(tokens, i, ")")
        if name in data:
            raise ValueError(f"duplicate feature {name}")
        if name in SET_FEATURES and not isinstance(value, FSet):
            value = FSet([value])
        data[name] = value
    return AVM(data), i + 1


def normalize_whitespace(text: str) -> str:
    """Whitespace-insensitive form used for golden comparisons."""
    text = re.sub(r"\s+", " ", text.strip())
    return re.sub(r"\s*([()])\s*", r"\1", text)
