"""Todd-Coxeter coset enumeration (HLT strategy with coincidence processing).

Columns of the table are ordered ``g0, g0^-1, g1, g1^-1, ...``; letter ``x`` of
a word maps to column ``2(|x|-1)`` or ``2(|x|-1)+1`` for inverses. Coset 0 is
the subgroup coset. After enumeration the live cosets are renumbered in
increasing order of definition, so the output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .presentations import Presentation
from .words import Word

__all__ = [
    "DEFAULT_CAPACITY",
    "CapacityExceeded",
    "CosetTable",
    "enumerate_cosets",
    "regular_representation",
    "group_order",
]

DEFAULT_CAPACITY = 1 << 20


class CapacityExceeded(RuntimeError):
    """The enumeration defined more cosets than allowed without closing."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        super().__init__(f"coset enumeration exceeded capacity of {capacity} cosets")


def _columns(word: Sequence[int]) -> list[int]:
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in word]


@dataclass(frozen=True, eq=False)
class CosetTable:
    """A closed, compacted coset table.

    ``table[c, col]`` is the coset reached from ``c`` by the generator (even
    ``col``) or inverse (odd ``col``) in column ``col``.
    """

    presentation: Presentation
    subgroup_words: tuple[Word, ...]
    table: np.ndarray
    defined: int  # total cosets ever defined, a cost measure

    @property
    def degree(self) -> int:
        return self.table.shape[0]

    def action(self, gen: int, inverse: bool = False) -> np.ndarray:
        return self.table[:, 2 * gen + int(inverse)]

    def trace(self, coset: int, word: Sequence[int]) -> int:
        t = self.table
        for col in _columns(word):
            coset = int(t[coset, col])
        return coset

    def check(self) -> None:
        """Full post-hoc scan of the closure invariants; raises AssertionError."""
        t = self.table
        n = self.degree
        if (t < 0).any() or (t >= n).any():
            raise AssertionError("table has undefined or out-of-range entries")
        idx = np.arange(n)
        for g in range(self.presentation.ngens):
            fwd, back = t[:, 2 * g], t[:, 2 * g + 1]
            if not (np.array_equal(back[fwd], idx) and np.array_equal(fwd[back], idx)):
                raise AssertionError(f"columns of generator {g} are not mutually inverse")
        for rel in self.presentation.relators:
            pts = idx.copy()
            for col in _columns(rel):
                pts = t[pts, col]
            if not np.array_equal(pts, idx):
                raise AssertionError(f"relator {rel} does not close at every coset")
        for w in self.subgroup_words:
            if self.trace(0, w) != 0:
                raise AssertionError(f"subgroup generator {w} does not fix coset 0")


def enumerate_cosets(
    presentation: Presentation,
    subgroup: Sequence[Word] = (),
    capacity: int = DEFAULT_CAPACITY,
) -> CosetTable:
    """Enumerate the cosets of ``<subgroup>`` in the group of ``presentation``.

    Raises :class:`CapacityExceeded` if more than ``capacity`` cosets would be
    defined; this is the only failure mode.
    """
    if capacity < 1:
        raise ValueError("capacity must be positive")
    ncols = 2 * presentation.ngens
    relators = [_columns(r) for r in presentation.relators if r]
    # Short relators first; sort is stable so equal lengths keep their order.
    relators.sort(key=len)
    subgroup = tuple(tuple(w) for w in subgroup)

    table: list[list[int]] = [[-1] * ncols]
    parent: list[int] = [0]

    def rep(c: int) -> int:
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def define(c: int, col: int) -> int:
        d = len(table)
        if d >= capacity:
            raise CapacityExceeded(capacity)
        row = [-1] * ncols
        row[col ^ 1] = c
        table.append(row)
        parent.append(d)
        table[c][col] = d
        return d

    def merge(a: int, b: int, queue: list[int]) -> None:
        a, b = rep(a), rep(b)
        if a != b:
            if a > b:
                a, b = b, a
            parent[b] = a
            queue.append(b)

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for col in range(ncols):
                f = row[col]
                if f < 0:
                    continue
                inv = col ^ 1
                if table[f][inv] == e:
                    table[f][inv] = -1
                e1, f1 = rep(e), rep(f)
                g = table[e1][col]
                if g >= 0:
                    merge(f1, g, queue)
                    continue
                g = table[f1][inv]
                if g >= 0:
                    merge(e1, g, queue)
                    continue
                table[e1][col] = f1
                table[f1][inv] = e1

    def scan_and_fill(c: int, word: list[int]) -> None:
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j:
                nxt = table[f][word[i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                nxt = table[b][word[j] ^ 1]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                col = word[i]
                table[f][col] = b
                table[b][col ^ 1] = f
                return
            define(f, word[i])

    for w in subgroup:
        scan_and_fill(0, _columns(w))
        # A coincidence may have merged coset 0; its representative stays 0.

    c = 0
    while c < len(table):
        if parent[c] == c:
            for rel in relators:
                scan_and_fill(c, rel)
                if parent[c] != c:
                    break
            if parent[c] == c:
                row = table[c]
                for col in range(ncols):
                    if row[col] < 0:
                        define(c, col)
        c += 1

    live = [c for c in range(len(table)) if parent[c] == c]
    renumber = {c: k for k, c in enumerate(live)}
    out = np.empty((len(live), ncols), dtype=np.int64)
    for k, c in enumerate(live):
        out[k] = [renumber[x] for x in table[c]]
    return CosetTable(presentation, subgroup, out, len(table))


def regular_representation(presentation: Presentation, capacity: int = DEFAULT_CAPACITY,
                           element_ceiling: int | None = None):
    """Concretize ``presentation`` as a permutation group on its own elements."""
    from .permgroup import DEFAULT_ELEMENT_CEILING, PermGroup

    table = enumerate_cosets(presentation, (), capacity)
    return PermGroup.from_coset_table(table, element_ceiling or DEFAULT_ELEMENT_CEILING)


def group_order(presentation: Presentation, capacity: int = DEFAULT_CAPACITY) -> int:
    return enumerate_cosets(presentation, (), capacity).degree
