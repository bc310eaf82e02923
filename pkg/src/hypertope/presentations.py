"""Finite presentations, the built-in group families, and the text file format.

File format (one presentation per file)::

    # comment
    gens: r0 r1 r2
    rel: r0^2
    rel: [(r0 r1)^2, r2]^4

The ``gens:`` line comes first; each ``rel:`` line holds one relator in the
grammar of :mod:`hypertope.words`. Blank lines and ``#`` comments are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .words import Word, WordSyntaxError, free_reduce, parse_word, render

__all__ = [
    "Presentation",
    "ParameterError",
    "PresentationFormatError",
    "FAMILIES",
    "build_paper_presentation",
    "theorem_branch",
    "parse_presentation",
    "load_presentation",
]

RHO = ("r0", "r1", "r2")


class ParameterError(ValueError):
    """Family parameters violate a stated inequality."""


class PresentationFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    params: Mapping[str, int] = field(default_factory=dict)
    kind: str | None = None
    # Source expressions, kept only for readable dumps.
    relator_texts: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = len(self.generator_names)
        reduced = []
        for w in self.relators:
            if any(x == 0 or abs(x) > gens for x in w):
                raise ValueError(f"relator {w} references an undeclared generator")
            reduced.append(free_reduce(w))
        object.__setattr__(self, "generator_names", tuple(self.generator_names))
        object.__setattr__(self, "relators", tuple(reduced))
        object.__setattr__(self, "params", dict(self.params))

    @property
    def ngens(self) -> int:
        return len(self.generator_names)

    @classmethod
    def from_strings(cls, generators: Sequence[str], relators: Sequence[str], **kw) -> "Presentation":
        words = tuple(parse_word(r, generators) for r in relators)
        return cls(tuple(generators), words, relator_texts=tuple(relators), **kw)

    def with_relators(self, *extra: str) -> "Presentation":
        """A new presentation with additional relators (params are dropped)."""
        texts = list(self.relator_texts or (render(w, self.generator_names) for w in self.relators))
        return Presentation.from_strings(self.generator_names, texts + list(extra))

    def render_relators(self) -> list[str]:
        return [render(w, self.generator_names) for w in self.relators]

    def to_text(self) -> str:
        lines = []
        if self.kind:
            desc = " ".join(f"{k}={v}" for k, v in self.params.items())
            lines.append(f"# {self.kind} {desc}".rstrip())
        lines.append("gens: " + " ".join(self.generator_names))
        texts = self.relator_texts or tuple(self.render_relators())
        lines.extend(f"rel: {t}" for t in texts)
        return "\n".join(lines) + "\n"


def _involutions() -> list[str]:
    return ["r0^2", "r1^2", "r2^2"]


def theorem_branch(n: int, s: int, t: int, l: int) -> str:
    return "even" if (n - s - t - l) % 2 == 0 else "odd"


def _extra_relator(n: int, s: int, t: int, l: int) -> str:
    d = n - s - t - l
    if d % 2 == 0:
        return f"[(r0 r1)^2, r2]^{2 ** (d // 2)}"
    return f"[(r0 r1)^2, (r1 r2)^2]^{2 ** ((d - 1) // 2)}"


def _check_theorem_params(n, s, t, l):
    if n < 10:
        raise ParameterError(f"n ≥ 10 violated (n={n})")
    if s < 2:
        raise ParameterError(f"s ≥ 2 violated (s={s})")
    if t < 2:
        raise ParameterError(f"t ≥ 2 violated (t={t})")
    if l < 1:
        raise ParameterError(f"l ≥ 1 violated (l={l})")
    if n < s + t + l:
        raise ParameterError(f"n ≥ s+t+l violated ({n} < {s + t + l})")


def _m1(b):
    return _involutions() + ["(r0 r1)^4", "(r1 r2)^4", "(r0 r2)^2", f"(r2 r1 r0)^{2 * b}"]


def _m2(b):
    return _involutions() + ["(r0 r1)^4", "(r1 r2)^4", "(r0 r2)^2", f"(r1 r2 r1 r0)^{b}"]


def _g(n, s, t, l):
    return _involutions() + [
        f"(r0 r1)^{2 ** s}",
        f"(r1 r2)^{2 ** t}",
        f"(r0 r2)^{2 ** l}",
        "[(r0 r1)^4, r2]",
        "[r0, (r1 r2)^4]",
        "[(r0 r2)^2, r1]",
        _extra_relator(n, s, t, l),
    ]


def _g1(n, s, t, l):
    # G/C: (r0 r2)^2 becomes a relator, the C-normality relator is dropped.
    return _involutions() + [
        f"(r0 r1)^{2 ** s}",
        f"(r1 r2)^{2 ** t}",
        "(r0 r2)^2",
        "[(r0 r1)^4, r2]",
        "[r0, (r1 r2)^4]",
        _extra_relator(n, s, t, l),
    ]


def _g2(n, s, t, l):
    return _involutions() + [
        "(r0 r1)^4",
        f"(r1 r2)^{2 ** t}",
        "(r0 r2)^2",
        "[r0, (r1 r2)^4]",
        _extra_relator(n, s, t, l),
    ]


def _g3(n, s, t, l):
    return _involutions() + ["(r0 r1)^4", "(r1 r2)^4", "(r0 r2)^2", _extra_relator(n, s, t, l)]


def _l1(s):
    return ["r0^2", "r1^2", "r2", f"(r0 r1)^{2 ** s}"]


def _l2(t):
    return ["r0", "r1^2", "r2^2", f"(r1 r2)^{2 ** t}"]


def _l3(l):
    return ["r0^2", "r2^2", "r1", f"(r0 r2)^{2 ** l}"]


def _need_b(b):
    if b < 2:
        raise ParameterError(f"b ≥ 2 violated (b={b})")


def _need_positive(name, v):
    if v < 1:
        raise ParameterError(f"{name} ≥ 1 violated ({name}={v})")


FAMILIES = {
    "M1": (("b",), _m1, _need_b),
    "M2": (("b",), _m2, _need_b),
    "L1": (("s",), _l1, lambda s: _need_positive("s", s)),
    "L2": (("t",), _l2, lambda t: _need_positive("t", t)),
    "L3": (("l",), _l3, lambda l: _need_positive("l", l)),
    "G": (("n", "s", "t", "l"), _g, _check_theorem_params),
    "G1": (("n", "s", "t", "l"), _g1, _check_theorem_params),
    "G2": (("n", "s", "t", "l"), _g2, _check_theorem_params),
    "G3": (("n", "s", "t", "l"), _g3, _check_theorem_params),
}


def build_paper_presentation(kind: str, **params: int) -> Presentation:
    """Return one of the named families, e.g. ``build_paper_presentation("G", n=10, s=2, t=2, l=2)``.

    ``G`` is the main family; ``G1``, ``G2`` and ``G3`` are its quotients by
    ``C``, ``AC`` and ``K``; ``L1``..``L3`` are the dihedral images used to
    pin down the orders of the rotations; ``M1``/``M2`` are the type {4,4}
    groups.
    """
    try:
        names, relators, check = FAMILIES[kind]
    except KeyError:
        raise ValueError(f"unknown family {kind!r}; expected one of {sorted(FAMILIES)}") from None
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise ParameterError(f"{kind} takes parameters {names}, got {tuple(params)}")
    args = [int(params[k]) for k in names]
    check(*args)
    return Presentation.from_strings(RHO, relators(*args), params=dict(zip(names, args)), kind=kind)


def parse_presentation(text: str) -> Presentation:
    gens: list[str] | None = None
    texts: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        key, sep, body = line.strip().partition(":")
        if not sep:
            raise PresentationFormatError("expected 'gens:' or 'rel:'", lineno, indent + 1)
        key = key.strip()
        body_start = line.index(":") + 1 + len(body) - len(body.lstrip())
        body_col = body_start + 1
        if key == "gens":
            if gens is not None:
                raise PresentationFormatError("duplicate 'gens:' line", lineno, indent + 1)
            gens = body.split()
            if not gens or len(set(gens)) != len(gens):
                raise PresentationFormatError("generator list must be nonempty and distinct", lineno, body_col)
            for g in gens:
                if not g.isidentifier():
                    raise PresentationFormatError(f"bad generator name {g!r}", lineno, body_col)
        elif key == "rel":
            if gens is None:
                raise PresentationFormatError("'rel:' before 'gens:'", lineno, indent + 1)
            expr = body.strip()
            try:
                parse_word(expr, gens)
            except WordSyntaxError as exc:
                raise PresentationFormatError(str(exc).split(" at column")[0], lineno, body_start + exc.pos + 1) from None
            texts.append(expr)
        else:
            raise PresentationFormatError(f"unknown key {key!r}", lineno, indent + 1)
    if gens is None:
        raise PresentationFormatError("missing 'gens:' line", 1)
    return Presentation.from_strings(gens, texts)


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
