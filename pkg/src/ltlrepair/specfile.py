"""Line-oriented specification files.

::

    # mine pump
    name: minepump
    aps: h m p
    dom: G((p && X p) -> X X !h)
    goal: G(m -> X !p)
    goal: G(h -> X p)
    bc: F(h && m)

``aps`` must come before any formula. Blank lines and ``#`` comments are
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .ltl import Formula, LTLSyntaxError, UnknownAtomError, parse, to_text
from .objectives import Specification

_KEYS = ("name", "aps", "dom", "goal", "bc")


class SpecFileError(ValueError):
    def __init__(self, message: str, source: str = "<spec>", line: int | None = None):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.line = line


@dataclass
class SpecFile:
    alphabet: tuple[str, ...]
    dom: list[Formula] = field(default_factory=list)
    goals: list[Formula] = field(default_factory=list)
    bcs: list[Formula] = field(default_factory=list)
    name: str = ""

    @property
    def spec(self) -> Specification:
        return Specification(self.alphabet, tuple(self.dom), tuple(self.goals), self.name)

    def dumps(self) -> str:
        lines = []
        if self.name:
            lines.append(f"name: {self.name}")
        lines.append("aps: " + " ".join(self.alphabet))
        lines += [f"dom: {to_text(f)}" for f in self.dom]
        lines += [f"goal: {to_text(f)}" for f in self.goals]
        lines += [f"bc: {to_text(f)}" for f in self.bcs]
        return "\n".join(lines) + "\n"


def loads(text: str, source: str = "<spec>") -> SpecFile:
    alphabet: tuple[str, ...] | None = None
    out = SpecFile(alphabet=())
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip().lower(), value.strip()
        if not sep or key not in _KEYS:
            raise SpecFileError(f"expected one of {', '.join(_KEYS)} followed by ':'", source, lineno)
        if key == "name":
            out.name = value
            continue
        if key == "aps":
            if alphabet is not None:
                raise SpecFileError("duplicate 'aps' declaration", source, lineno)
            names = value.replace(",", " ").split()
            if not names or len(set(names)) != len(names):
                raise SpecFileError("'aps' needs distinct proposition names", source, lineno)
            alphabet = tuple(names)
            out.alphabet = alphabet
            continue
        if alphabet is None:
            raise SpecFileError("'aps' must be declared before formulas", source, lineno)
        try:
            f = parse(value, alphabet)
        except (LTLSyntaxError, UnknownAtomError) as exc:
            raise SpecFileError(str(exc), source, lineno) from exc
        {"dom": out.dom, "goal": out.goals, "bc": out.bcs}[key].append(f)
    if alphabet is None:
        raise SpecFileError("missing 'aps' declaration", source)
    if not out.goals:
        raise SpecFileError("a specification needs at least one goal", source)
    return out


def load(path: str | Path) -> SpecFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError(f"cannot read file: {exc.strerror}", str(path)) from exc
    return loads(text, str(path))
