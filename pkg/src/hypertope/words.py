"""Words over abstract generators and a small relator-expression parser.

A word is a tuple of nonzero integers. Letter ``i + 1`` stands for generator
``i`` and ``-(i + 1)`` for its formal inverse, so ``(1, -2)`` is ``g0 g1^-1``.

Grammar accepted by :func:`parse_word`::

    expr    := term (['*'] term)*
    term    := factor ('^' suffix)*
    suffix  := ['-'] INT | '(' ['-'] INT ')' | factor      # power or conjugation
    factor  := GEN | '1' | '(' expr ')' | '[' expr ',' expr ']'

``[x, y]`` expands to ``x^-1 y^-1 x y`` and ``x^y`` to ``y^-1 x y``. Generator
names may be juxtaposed without spaces (``r0r1``) when the split is unambiguous
by longest match against the declared names.
"""

from __future__ import annotations

import re
from typing import Sequence

Word = tuple[int, ...]

__all__ = [
    "Word",
    "WordSyntaxError",
    "UnknownGenerator",
    "free_reduce",
    "inverse",
    "power",
    "commutator",
    "conjugate",
    "parse_word",
    "render",
]


class WordSyntaxError(ValueError):
    """Malformed relator expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


class UnknownGenerator(WordSyntaxError):
    pass


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def power(word: Sequence[int], k: int) -> Word:
    if k < 0:
        return free_reduce(inverse(word) * -k)
    return free_reduce(tuple(word) * k)


def commutator(x: Sequence[int], y: Sequence[int]) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return free_reduce(inverse(x) + inverse(y) + tuple(x) + tuple(y))


def conjugate(x: Sequence[int], y: Sequence[int]) -> Word:
    """``x^y = y^-1 x y``."""
    return free_reduce(inverse(y) + tuple(x) + tuple(y))


def render(word: Sequence[int], names: Sequence[str]) -> str:
    """Space-separated rendering; the empty word renders as ``1``.

    Runs of one letter are collapsed into powers, so the output parses back
    to the same reduced word.
    """
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        x = word[i]
        j = i
        while j < len(word) and word[j] == x:
            j += 1
        k = (j - i) * (1 if x > 0 else -1)
        name = names[abs(x) - 1]
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[()\[\]*^,\-]))")


class _Parser:
    def __init__(self, text: str, generators: Sequence[str]):
        self.text = text
        self.index = {name: i + 1 for i, name in enumerate(generators)}
        self.names = sorted(generators, key=len, reverse=True)
        self.tokens = self._tokenize()
        self.i = 0

    def _tokenize(self) -> list[tuple[str, object, int]]:
        text = self.text
        tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise WordSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            start = m.start(m.lastgroup)
            kind = m.lastgroup
            value = m.group(kind)
            if kind == "name":
                for letter, offset in self._split_name(value, start):
                    tokens.append(("gen", letter, offset))
            elif kind == "int":
                tokens.append(("int", int(value), start))
            else:
                tokens.append((value, value, start))
            pos = m.end()
        tokens.append(("end", None, len(text)))
        return tokens

    def _split_name(self, ident: str, start: int) -> list[tuple[int, int]]:
        if ident in self.index:
            return [(self.index[ident], start)]
        out = []
        rest, offset = ident, start
        while rest:
            for name in self.names:
                if rest.startswith(name):
                    out.append((self.index[name], offset))
                    rest = rest[len(name):]
                    offset += len(name)
                    break
            else:
                raise UnknownGenerator(f"unknown generator {ident!r}", self.text, start)
        return out

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, object, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise WordSyntaxError(f"expected {kind!r}, found {found}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Word:
        if self.peek()[0] == "end":
            raise WordSyntaxError("empty expression", self.text, 0)
        w = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise WordSyntaxError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return w

    def expr(self) -> Word:
        w = self.term()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.i += 1
                w = w + self.term()
            elif kind in ("gen", "int", "(", "["):
                w = w + self.term()
            else:
                return free_reduce(w)

    def term(self) -> Word:
        w = self.factor()
        while self.peek()[0] == "^":
            self.i += 1
            kind = self.peek()[0]
            if kind in ("int", "-"):
                w = power(w, self.signed_int())
            elif kind == "(" and self._parenthesized_int():
                self.i += 1
                k = self.signed_int()
                self.take(")")
                w = power(w, k)
            else:
                w = conjugate(w, self.factor())
        return w

    def _parenthesized_int(self) -> bool:
        j = self.i + 1
        if self.tokens[j][0] == "-":
            j += 1
        return self.tokens[j][0] == "int" and self.tokens[j + 1][0] == ")"

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.i += 1
            sign = -1
        return sign * self.take("int")[1]

    def factor(self) -> Word:
        kind, value, pos = self.peek()
        if kind == "gen":
            self.i += 1
            return (value,)
        if kind == "int":
            if value != 1:
                raise WordSyntaxError(f"bare integer {value} (only 1 denotes the identity)", self.text, pos)
            self.i += 1
            return ()
        if kind == "(":
            self.i += 1
            w = self.expr()
            self.take(")")
            return w
        if kind == "[":
            self.i += 1
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]")
            return commutator(x, y)
        found = "end of input" if kind == "end" else repr(value)
        raise WordSyntaxError(f"expected a generator or '(' or '[', found {found}", self.text, pos)


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse a relator expression into a flat, freely reduced word.

    >>> parse_word("[(r0*r1)^2, r2]", ["r0", "r1", "r2"])
    (-2, -1, -2, -1, -3, 1, 2, 1, 2, 3)
    """
    return free_reduce(_Parser(text, generators).parse())
