"""Morphotactic analysis of Turkish word forms.

Words are segmented into a root and a chain of suffixes.  Suffix templates use
metaphonemes that resolve against the stem:

``A``  a/e by backness,  ``I``  ı/i/u/ü by backness and rounding,
``D``  d/t by voicing of the preceding segment,
``(y)`` ``(s)`` ``(n)``  buffer consonants, present only after a vowel,
``(I)`` ``(A)``  linking vowels, present only after a consonant.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .avm import AVM

VOWELS = frozenset("aeıioöuü")
BACK = frozenset("aıou")
ROUNDED = frozenset("oöuü")
VOICELESS = frozenset("çfhkpsşt")
_FRONTED = {"a": "e", "ı": "i", "o": "ö", "u": "ü"}

# ASCII transliteration (I=ı, U=ü, C=ç, S=ş, O=ö, G=ğ).
_FROM_ASCII = {"I": "ı", "U": "ü", "C": "ç", "S": "ş", "O": "ö", "G": "ğ"}
_TO_ASCII = {v: k for k, v in _FROM_ASCII.items()}
_TURKISH_LOWER = {"I": "ı", "İ": "i"}

NOMINAL_CATS = frozenset({"N", "PRON", "ADJ"})


class MorphError(ValueError):
    pass


def turkish_lower(text: str) -> str:
    return "".join(_TURKISH_LOWER.get(ch, ch.lower()) for ch in text)


def from_ascii(text: str) -> str:
    return "".join(_FROM_ASCII.get(ch, ch.lower()) for ch in text)


def to_ascii(text: str) -> str:
    return "".join(_TO_ASCII.get(ch, ch) for ch in text)


def normalize(word: str) -> list[str]:
    """Candidate canonical spellings of ``word``.

    Non-ASCII input is Turkish text and is lowercased with the dotted/dotless
    i distinction.  Pure ASCII input may follow the capital-letter convention
    (``kIrmIzI``); an initial capital may also just be sentence case, so both
    readings are offered.
    """
    if not word:
        return []
    if not word.isascii():
        return [turkish_lower(word)]
    candidates = [from_ascii(word)]
    if word[0].isupper() and (len(word) == 1 or not any(c.isupper() for c in word[1:])):
        candidates.append(turkish_lower(word[0]) + from_ascii(word[1:]))
    candidates.append(turkish_lower(word))
    return list(dict.fromkeys(candidates))


@dataclass(frozen=True)
class Suffix:
    id: str
    template: str
    from_classes: tuple[str, ...]
    to_class: str
    emits: tuple[tuple, ...] = ()


@dataclass(frozen=True)
class RootEntry:
    surface: str
    cat: str
    flags: tuple[str, ...] = ()

    def flag(self, name: str, default=None):
        for f in self.flags:
            key, _, value = f.partition("=")
            if key == name:
                return value or True
        return default

    @property
    def cls(self) -> str:
        explicit = self.flag("class")
        if explicit:
            return explicit
        if self.flag("case"):
            return "CLOSED"
        return {"N": "N_ROOT", "V": "V_ROOT", "PRON": "PRON"}.get(self.cat, "CLOSED")

    def emits(self) -> tuple[tuple, ...]:
        out = [("CAT", self.cat), ("R", self.surface)]
        for name in ("AGR", "CASE"):
            value = self.flag(name.lower())
            if value:
                out.append((name, value))
        return tuple(out)


@dataclass(frozen=True)
class MorphAnalysis:
    surface: str
    root: str
    root_cat: str
    features: tuple[tuple, ...]
    suffixes: tuple[str, ...] = ()
    entry: RootEntry | None = field(default=None, compare=False, repr=False)

    def groups(self) -> list[list[tuple]]:
        """Features split at category conversions; CONV opens a new group."""
        groups: list[list[tuple]] = [[]]
        for feat in self.features:
            if feat[0] == "CONV":
                groups.append([feat])
            else:
                groups[-1].append(feat)
        return groups

    @property
    def category(self) -> str:
        cat = self.root_cat
        for feat in self.features:
            if feat[0] == "CONV":
                cat = feat[1][0]
        return cat

    def with_defaults(self) -> tuple[tuple, ...]:
        """Features with the unmarked CASE NOM / AGR 3SG made explicit."""
        last = self.groups()[-1]
        if self.category not in NOMINAL_CATS:
            return self.features
        extra = []
        if not any(f[0] == "AGR" for f in last):
            extra.append(("AGR", "3SG"))
        if not any(f[0] == "CASE" for f in last):
            extra.append(("CASE", "NOM"))
        return self.features + tuple(extra)

    def get(self, name: str, default=None):
        """Last value of ``name`` in the final inflectional group."""
        for feat in reversed(self.groups()[-1]):
            if feat[0] == name:
                return feat[1]
        return default


def format_analysis(analysis: MorphAnalysis) -> str:
    """One analysis as a parenthesised feature list."""
    parts = []
    for name, value in analysis.features:
        if name == "CONV":
            parts.append(f'(*CONV* {value[0]} "{value[1]}")')
        elif name in ("R",):
            parts.append(f'(*{name}* "{value}")')
        else:
            parts.append(f"(*{name}* {value})")
    return "(" + "".join(parts) + ")"


def _last_vowel(text: str) -> str | None:
    for ch in reversed(text):
        if ch in VOWELS:
            return ch
    return None


def allomorph(suffix: Suffix | str, stem: str, front: bool = False) -> str:
    """Surface realisation of a suffix template after ``stem``."""
    template = suffix.template if isinstance(suffix, Suffix) else suffix
    if not stem:
        raise MorphError("empty stem")
    out = ""
    i = 0

    def harmonic(meta: str) -> str:
        vowel = _last_vowel(out) or _last_vowel(stem)
        if vowel is None:
            raise MorphError(f"stem {stem!r} has no vowel to harmonise with")
        if front and _last_vowel(out) is None:
            vowel = _FRONTED.get(vowel, vowel)
        back = vowel in BACK
        if meta == "A":
            return "a" if back else "e"
        rounded = vowel in ROUNDED
        return ("u" if rounded else "ı") if back else ("ü" if rounded else "i")

    while i < len(template):
        ch = template[i]
        if ch == "(":
            j = template.index(")", i)
            segment = template[i + 1:j]
            i = j + 1
            ends_in_vowel = (stem + out)[-1] in VOWELS
            if segment in ("A", "I"):
                if not ends_in_vowel:
                    out += harmonic(segment)
            elif ends_in_vowel:
                out += segment
            continue
        i += 1
        if ch in "AI":
            out += harmonic(ch)
        elif ch == "D":
            out += "t" if (stem + out)[-1] in VOICELESS else "d"
        else:
            out += ch
    return out


class Analyzer:
    """Segmentation-based analyser over a root lexicon and suffix table."""

    def __init__(self, roots: Iterable[RootEntry], suffixes: Iterable[Suffix],
                 nonfinal: Iterable[str] = ()):
        self.roots = tuple(roots)
        self.suffixes = {s.id: s for s in suffixes}
        self.nonfinal = frozenset(nonfinal)
        self._by_class: dict[str, list[Suffix]] = defaultdict(list)
        for s in self.suffixes.values():
            for cls in s.from_classes:
                self._by_class[cls].append(s)
        self._by_first: dict[str, list[RootEntry]] = defaultdict(list)
        for root in self.roots:
            for stem, _ in self._stems(root):
                self._by_first[stem[0]].append(root)

    @staticmethod
    def _stems(root: RootEntry) -> list[tuple[str, str]]:
        stems = [(root.surface, "plain")]
        if root.flag("alt"):
            stems.append((root.flag("alt"), "alt"))
        if root.flag("oblique"):
            stems.append((root.flag("oblique"), "oblique"))
        return stems

    def suffixes_from(self, cls: str) -> list[Suffix]:
        return self._by_class.get(cls, [])

    def is_final(self, cls: str) -> bool:
        return cls not in self.nonfinal

    @staticmethod
    def _variant_ok(root: RootEntry, kind: str, first: str | None) -> bool:
        """Whether stem variant ``kind`` may precede first suffix realisation ``first``."""
        if kind == "oblique":
            return first is not None
        if root.flag("oblique") and first is not None:
            return False
        vowel_initial = bool(first) and first[0] in VOWELS
        if kind == "alt":
            return vowel_initial
        return not (root.flag("alt") and vowel_initial)

    def analyze(self, word: str) -> list[MorphAnalysis]:
        """Every analysis of an already-normalised word."""
        if not word:
            return []
        found = []
        seen = set()
        for root in dict.fromkeys(self._by_first.get(word[0], ())):
            for stem, kind in self._stems(root):
                if not word.startswith(stem):
                    continue
                for chain in self._search(word, root, kind, stem):
                    key = (root.surface, root.cat, tuple(s.id for s in chain))
                    if key in seen:
                        continue
                    seen.add(key)
                    found.append(self._build(word, root, chain))
        found.sort(key=lambda a: (-len(a.root), a.suffixes))
        return found

    def _search(self, word, root, kind, stem) -> Iterator[list[Suffix]]:
        # depth-first over continuation classes; stack entries carry the text so far
        def walk(cls, text, chain):
            if len(text) == len(word) and self.is_final(cls) and \
                    (chain or self._variant_ok(root, kind, None)):
                yield list(chain)
            for suffix in self.suffixes_from(cls):
                try:
                    real = allomorph(suffix, text, front=bool(root.flag("front")) and not chain)
                except MorphError:
                    continue
                if not chain and not self._variant_ok(root, kind, real):
                    continue
                if not real and suffix.to_class == cls:
                    continue
                if word.startswith(real, len(text)):
                    chain.append(suffix)
                    yield from walk(suffix.to_class, text + real, chain)
                    chain.pop()

        yield from walk(root.cls, stem, [])

    def _build(self, word: str, root: RootEntry, chain: Sequence[Suffix]) -> MorphAnalysis:
        features = list(root.emits())
        for suffix in chain:
            features.extend(suffix.emits)
        return MorphAnalysis(word, root.surface, root.cat, tuple(features),
                             tuple(s.id for s in chain), root)

    def generate(self, root: RootEntry, suffixes: Sequence[Suffix | str]) -> str:
        chain = [self.suffixes[s] if isinstance(s, str) else s for s in suffixes]
        cls = root.cls
        for suffix in chain:
            if cls not in suffix.from_classes:
                raise MorphError(f"{suffix.id} cannot follow class {cls}")
            cls = suffix.to_class
        if not self.is_final(cls):
            raise MorphError(f"word cannot end in class {cls}")
        if not chain:
            return root.surface
        front = bool(root.flag("front"))
        for stem, kind in self._stems(root):
            text = stem
            first = allomorph(chain[0], text, front=front)
            if not self._variant_ok(root, kind, first):
                continue
            text += first
            for suffix in chain[1:]:
                text += allomorph(suffix, text)
            return text
        raise MorphError(f"no stem of {root.surface!r} accepts {chain[0].id}")

    def chains(self, root: RootEntry, max_length: int = 4) -> Iterator[tuple[Suffix, ...]]:
        """All valid suffix chains (up to ``max_length``) for ``root``."""
        def walk(cls, chain):
            if self.is_final(cls):
                yield tuple(chain)
            if len(chain) == max_length:
                return
            for suffix in self.suffixes_from(cls):
                chain.append(suffix)
                yield from walk(suffix.to_class, chain)
                chain.pop()

        yield from walk(root.cls, [])


def project(analysis: MorphAnalysis) -> tuple[str, AVM]:
    """Category and lexical f-structure of one analysis."""
    groups = analysis.groups()
    entry = analysis.entry
    fs = None
    cat = analysis.root_cat
    for index, group in enumerate(groups):
        data: dict = {}
        if index == 0:
            data["CAT"] = cat
        else:
            target, label = group[0][1]
            cat = target
            source = fs.set("WITH-SUFFIX", label)
            data["CAT"] = cat
            data["CONV"] = source
            group = group[1:]
        for name, value in group:
            if name in ("CAT",):
                continue
            data[name] = value
        fs = AVM(data)
    data = dict(fs.items())
    data["LEX"] = analysis.surface
    if cat in NOMINAL_CATS:
        data.setdefault("CASE", "NOM")
        data.setdefault("AGR", "3SG")
        if len(groups) == 1 and entry is not None and entry.flag("qual"):
            data["SUB"] = "QUAL"
    elif cat == "V" and "ASPECT" in data:
        data["TYPE"] = "VERBAL"
        data.setdefault("VOICE", "ACT")
    return cat, AVM(data)
