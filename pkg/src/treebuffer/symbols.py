"""Character predicates labelling finite automaton transitions."""

from __future__ import annotations

import dataclasses
from typing import FrozenSet, Tuple

MAX_RANGE = 0x3000

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r"}


class SymbolSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclasses.dataclass(frozen=True)
class SymbolMatcher:
    """A literal character, a (possibly negated) character class, or a wildcard."""

    kind: str  # "lit" | "class" | "any"
    chars: FrozenSet[str] = frozenset()
    negated: bool = False

    @classmethod
    def literal(cls, c: str) -> "SymbolMatcher":
        return cls("lit", frozenset(c))

    @classmethod
    def wildcard(cls) -> "SymbolMatcher":
        return cls("any")

    def matches(self, c) -> bool:
        if self.kind == "any":
            return True
        return (c in self.chars) != self.negated

    def to_token(self) -> str:
        """Render in the automaton-file syntax (space written as ``_``)."""
        if self.kind == "any":
            return "."
        if self.kind == "lit":
            (c,) = self.chars
            return _tok_char(c, "._[\\#")
        body = "".join(_tok_char(c, "]\\^-_[") for c in sorted(self.chars))
        return "[" + ("^" if self.negated else "") + body + "]"

    def __str__(self):
        return self.to_token()


def _tok_char(c: str, special: str) -> str:
    if c == " ":
        return "_"
    if c in ("\n", "\t", "\r"):
        return "\\" + {"\n": "n", "\t": "t", "\r": "r"}[c]
    if c in special:
        return "\\" + c
    return c


def parse_class(s: str, i: int, space_alias: bool) -> Tuple[SymbolMatcher, int]:
    """Parse ``[...]`` starting at ``s[i] == '['``; return (matcher, next index)."""
    start = i
    i += 1
    negated = False
    if i < len(s) and s[i] == "^":
        negated = True
        i += 1
    chars = set()
    first = True
    while True:
        if i >= len(s):
            raise SymbolSyntaxError("unterminated character class", start)
        c = s[i]
        if c == "]" and not first:
            i += 1
            break
        first = False
        lo, i = _class_char(s, i, space_alias)
        if i + 1 < len(s) and s[i] == "-" and s[i + 1] != "]":
            hi, i = _class_char(s, i + 1, space_alias)
            if ord(hi) < ord(lo):
                raise SymbolSyntaxError("bad character range", i)
            if ord(hi) - ord(lo) > MAX_RANGE:
                raise SymbolSyntaxError("character range too large", i)
            chars.update(chr(k) for k in range(ord(lo), ord(hi) + 1))
        else:
            chars.add(lo)
    return SymbolMatcher("class", frozenset(chars), negated), i


def _class_char(s: str, i: int, space_alias: bool) -> Tuple[str, int]:
    c = s[i]
    if c == "\\":
        if i + 1 >= len(s):
            raise SymbolSyntaxError("dangling escape", i)
        return unescape(s[i + 1], i), i + 2
    if c == "_" and space_alias:
        return " ", i + 1
    return c, i + 1


def unescape(c: str, pos: int) -> str:
    if c in _ESCAPES:
        return _ESCAPES[c]
    if c.isalnum():
        raise SymbolSyntaxError(f"unsupported escape \\{c}", pos)
    return c


def parse_symbol(tok: str) -> SymbolMatcher:
    """Parse one automaton-file symbol: a character, ``.``, ``_`` or a class."""
    if tok == ".":
        return SymbolMatcher.wildcard()
    if tok == "_":
        return SymbolMatcher.literal(" ")
    if tok.startswith("["):
        m, end = parse_class(tok, 0, space_alias=True)
        if end != len(tok):
            raise SymbolSyntaxError("trailing characters after class", end)
        return m
    if tok.startswith("\\") and len(tok) == 2:
        return SymbolMatcher.literal(unescape(tok[1], 1))
    if len(tok) != 1:
        raise SymbolSyntaxError(f"bad symbol {tok!r}", 0)
    return SymbolMatcher.literal(tok)
