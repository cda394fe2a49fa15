"""Root lexicon, suffix table and subcategorisation frames.

File formats (UTF-8, ``#`` starts a comment, fields are TAB-separated)::

    roots       surface  category  flag,flag,...
    suffixes    id  template  fromClass[,fromClass]  toClass  FEATURE=value;...
                %nonfinal CLASS CLASS ...
    subcat      root  voice  role:case|case[:opt][:indef];...   ("-" = no objects)
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .morph import Analyzer, RootEntry, Suffix

ROLES = ("THEME", "GOAL", "LOCATIVE", "SOURCE")
CASES = frozenset({"NOM", "ACC", "DAT", "LOC", "ABL", "GEN", "INS"})


class LexiconError(ValueError):
    """Malformed data file; carries the file and line number."""

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class UnknownVerbError(KeyError):
    def __init__(self, root: str, voice: str = "ACT"):
        self.root = root
        self.voice = voice
        super().__init__(f"no subcategorisation frame for {root!r} ({voice})")

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class Argument:
    role: str
    cases: frozenset
    required: bool = True
    indef_allowed: bool = False


@dataclass(frozen=True)
class SubcatFrame:
    root: str
    voice: str = "ACT"
    args: tuple[Argument, ...] = ()

    def roles_for_case(self, case: str) -> list[str]:
        return [a.role for a in self.args if case in a.cases]

    def indefinite_role(self) -> str | None:
        for a in self.args:
            if a.indef_allowed:
                return a.role
        return None

    def required_roles(self) -> list[str]:
        return [a.role for a in self.args if a.required]


def _lines(path):
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield number, line


def read_roots(path) -> list[RootEntry]:
    roots = []
    for number, line in _lines(path):
        cols = line.split("\t")
        if len(cols) < 2 or not cols[0].strip() or not cols[1].strip():
            raise LexiconError(path, number, "expected surface<TAB>category[<TAB>flags]")
        flags = tuple(f.strip() for f in cols[2].split(",") if f.strip()) if len(cols) > 2 else ()
        roots.append(RootEntry(cols[0].strip(), cols[1].strip(), flags))
    return roots


def _parse_emits(path, number, text: str) -> tuple[tuple, ...]:
    if text.strip() in ("", "-"):
        return ()
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        name, eq, value = item.partition("=")
        if not eq or not name or not value:
            raise LexiconError(path, number, f"bad feature spec {item!r}")
        if name == "CONV":
            target, colon, label = value.partition(":")
            if not colon:
                raise LexiconError(path, number, "CONV needs TARGET:label")
            out.append(("CONV", (target, label)))
        else:
            out.append((name, value))
    return tuple(out)


def read_suffixes(path) -> tuple[list[Suffix], set[str]]:
    suffixes = []
    nonfinal: set[str] = set()
    ids = set()
    for number, line in _lines(path):
        if line.startswith("%nonfinal"):
            nonfinal.update(line.split()[1:])
            continue
        cols = line.split("\t")
        if len(cols) < 4 or not all(c.strip() for c in cols[:4]):
            raise LexiconError(path, number, "expected id<TAB>template<TAB>from<TAB>to[<TAB>features]")
        sid = cols[0].strip()
        if sid in ids:
            raise LexiconError(path, number, f"duplicate suffix id {sid}")
        ids.add(sid)
        template = cols[1].strip()
        if template == "0":
            template = ""
        from_classes = tuple(c.strip() for c in cols[2].split(",") if c.strip())
        emits = _parse_emits(path, number, cols[4] if len(cols) > 4 else "")
        suffixes.append(Suffix(sid, template, from_classes, cols[3].strip(), emits))
    return suffixes, nonfinal


def read_frames(path) -> dict[tuple[str, str], SubcatFrame]:
    frames: dict[tuple[str, str], SubcatFrame] = {}
    for number, line in _lines(path):
        cols = line.split("\t")
        if len(cols) != 3 or not all(c.strip() for c in cols):
            raise LexiconError(path, number, "expected root<TAB>voice<TAB>args")
        root, voice, spec = (c.strip() for c in cols)
        key = (root, voice)
        if key in frames:
            raise LexiconError(path, number, f"duplicate frame for {root} {voice}")
        args = []
        if spec != "-":
            for item in spec.split(";"):
                parts = item.strip().split(":")
                if len(parts) < 2:
                    raise LexiconError(path, number, f"bad argument {item!r}")
                role, cases = parts[0], frozenset(parts[1].split("|"))
                opts = set(parts[2:])
                if role not in ROLES:
                    raise LexiconError(path, number, f"unknown role {role}")
                if not cases <= CASES or opts - {"opt", "indef"}:
                    raise LexiconError(path, number, f"bad argument {item!r}")
                if any(a.role == role for a in args):
                    raise LexiconError(path, number, f"role {role} repeated")
                args.append(Argument(role, cases, "opt" not in opts, "indef" in opts))
        frames[key] = SubcatFrame(root, voice, tuple(args))
    return frames


class LexDB:
    """Immutable bundle of the analyser and the frame database."""

    def __init__(self, roots: Iterable[RootEntry], suffixes: Iterable[Suffix],
                 frames: dict[tuple[str, str], SubcatFrame], nonfinal: Iterable[str] = ()):
        self.analyzer = Analyzer(roots, suffixes, nonfinal)
        self._frames = dict(frames)

    @property
    def roots(self) -> tuple[RootEntry, ...]:
        return self.analyzer.roots

    @property
    def frames(self) -> dict[tuple[str, str], SubcatFrame]:
        return dict(self._frames)

    def subcat_of(self, root: str, voice: str = "ACT") -> SubcatFrame:
        try:
            return self._frames[(root, voice)]
        except KeyError:
            raise UnknownVerbError(root, voice) from None

    def with_roots(self, extra: Iterable[RootEntry]) -> LexDB:
        """A copy with additional roots (used for lexicon fixtures)."""
        return LexDB(self.roots + tuple(extra), self.analyzer.suffixes.values(),
                     self._frames, self.analyzer.nonfinal)


def data_path(name: str) -> Path:
    return Path(str(resources.files("turklfg") / "data" / name))


def load(roots=None, suffixes=None, subcat=None) -> LexDB:
    """Load the three data files; defaults are the bundled seed files."""
    roots = read_roots(roots or data_path("roots.tsv"))
    suffix_list, nonfinal = read_suffixes(suffixes or data_path("suffixes.tsv"))
    frames = read_frames(subcat or data_path("subcat.tsv"))
    return LexDB(roots, suffix_list, frames, nonfinal)
