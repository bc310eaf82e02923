"""C-group checks on groups generated by distinguished involutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .coset_enum import DEFAULT_CAPACITY, regular_representation
from .permgroup import (
    PermGroup,
    Subgroup,
    closure,
    product_mask,
    subgroup_intersection,
)
from .presentations import Presentation

__all__ = [
    "GeneratedGroup",
    "CGroupReport",
    "TitsResult",
    "NotAHomomorphism",
    "TitsInconsistency",
    "check_intersection_property",
    "check_string_property",
    "tits_condition",
    "flag_transitivity_rank3",
    "quotient_criterion",
    "type_orders",
]


class NotAHomomorphism(ValueError):
    pass


class TitsInconsistency(AssertionError):
    """The two equivalent forms of the Tits condition disagreed."""


@dataclass(eq=False)
class GeneratedGroup:
    """A finite group together with ordered distinguished generators ``rho_0..rho_{r-1}``.

    With ``check=True`` the generators must be involutions generating the group.
    """

    group: PermGroup
    involutions: tuple[int, ...]
    presentation: Presentation | None = None
    names: tuple[str, ...] | None = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.involutions = tuple(int(x) for x in self.involutions)
        if self.names is None:
            if tuple(self.involutions) == tuple(self.group.generator_ids):
                self.names = self.group.generator_names
            else:
                self.names = tuple(f"r{i}" for i in range(self.rank))
        if self.check:
            for i, x in enumerate(self.involutions):
                if self.group.element_order(x) != 2:
                    raise ValueError(f"distinguished generator {i} is not an involution")
            if closure(self.group, self.involutions).order != self.group.order:
                raise ValueError("distinguished generators do not generate the group")
        self._parabolics: dict[frozenset[int], Subgroup] = {}

    @classmethod
    def from_presentation(cls, presentation: Presentation, capacity: int = DEFAULT_CAPACITY,
                          element_ceiling: int | None = None) -> "GeneratedGroup":
        group = regular_representation(presentation, capacity, element_ceiling)
        return cls(group, tuple(group.generator_ids), presentation)

    @property
    def rank(self) -> int:
        return len(self.involutions)

    @property
    def order(self) -> int:
        return self.group.order

    def parabolic(self, indices) -> Subgroup:
        """``G_I = <rho_i : i in I>``."""
        key = frozenset(indices)
        sub = self._parabolics.get(key)
        if sub is None:
            sub = closure(self.group, [self.involutions[i] for i in sorted(key)])
            self._parabolics[key] = sub
        return sub

    def maximal_parabolic(self, i: int) -> Subgroup:
        """``G_i = <rho_j : j != i>``, the stabilizer of the type-``i`` base element."""
        return self.parabolic(j for j in range(self.rank) if j != i)

    def element(self, word: Sequence[int]) -> int:
        """Evaluate a word whose letter ``k+1`` means ``rho_k``."""
        g = self.group
        x = 0
        for letter in word:
            rho = self.involutions[abs(letter) - 1]
            x = g.mul(x, rho if letter > 0 else g.inv(rho))
        return x

    @cached_property
    def _word_tree(self) -> tuple[np.ndarray, np.ndarray]:
        g = self.group
        n = g.order
        parent = np.full(n, -1, dtype=np.int64)
        via = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        perms = [g.right_perm(x) for x in self.involutions]
        frontier = np.array([0])
        while frontier.size:
            found = []
            for k, p in enumerate(perms):
                nxt = p[frontier]
                fresh = ~seen[nxt]
                cand, first = np.unique(nxt[fresh], return_index=True)
                seen[cand] = True
                parent[cand] = frontier[fresh][first]
                via[cand] = k
                found.append(cand[np.argsort(first, kind="stable")])
            frontier = np.concatenate(found)
        return parent, via

    def shortest_word(self, a: int) -> tuple[int, ...]:
        """A shortest word for ``a`` in the distinguished generators (positive letters)."""
        parent, via = self._word_tree
        if parent[a] < 0 and a != 0:
            raise ValueError(f"element {a} is not generated by the distinguished generators")
        letters = []
        while a != 0:
            letters.append(int(via[a]) + 1)
            a = int(parent[a])
        return tuple(reversed(letters))

    def render(self, a: int) -> str:
        w = self.shortest_word(a)
        return " ".join(self.names[x - 1] for x in w) if w else "1"

    def pair_order(self, i: int, j: int) -> int:
        g = self.group
        return g.element_order(g.mul(self.involutions[i], self.involutions[j]))


@dataclass
class CGroupReport:
    is_c_group: bool
    failures: list[tuple[tuple[int, ...], tuple[int, ...], str]]
    type_orders: list[int]
    is_string: bool


def _subsets(r: int):
    for k in range(r + 1):
        yield from itertools.combinations(range(r), k)


def check_intersection_property(g: GeneratedGroup) -> CGroupReport:
    """Check ``G_I ∩ G_J = G_{I∩J}`` over all pairs of index subsets.

    Each failure carries one witness in ``G_I ∩ G_J`` but outside ``G_{I∩J}``,
    rendered as a shortest word.
    """
    if g.rank > 4:
        raise ValueError("intersection property check is limited to rank <= 4")
    failures = []
    subsets = list(_subsets(g.rank))
    for a, b in itertools.combinations(subsets, 2):
        I, J = set(a), set(b)
        if I <= J or J <= I:
            continue
        both = g.parabolic(I).mask & g.parabolic(J).mask
        extra = np.flatnonzero(both & ~g.parabolic(I & J).mask)
        if extra.size:
            failures.append((a, b, g.render(int(extra[0]))))
    orders = [g.pair_order(i, j) for i, j in itertools.combinations(range(g.rank), 2)]
    return CGroupReport(not failures, failures, orders, check_string_property(g))


def check_string_property(g: GeneratedGroup) -> bool:
    return all(g.pair_order(i, j) <= 2
               for i, j in itertools.combinations(range(g.rank), 2) if j - i > 1)


@dataclass
class TitsResult:
    holds: bool
    lhs: frozenset[int]
    rhs: frozenset[int]
    condition1: bool
    condition2: bool


def _ids(mask: np.ndarray) -> frozenset[int]:
    return frozenset(np.flatnonzero(mask).tolist())


def tits_condition(g: GeneratedGroup) -> TitsResult:
    """Evaluate both forms of the rank-3 Tits condition.

    (1) ``G0 G1 ∩ G0 G2 = G0 (G1 ∩ G2)``
    (2) ``(G0 ∩ G1)(G0 ∩ G2) = (G1 G2) ∩ G0``

    The sides of (2) are returned. The forms are equivalent, so a disagreement
    raises :class:`TitsInconsistency`.
    """
    if g.rank != 3:
        raise ValueError("Tits condition needs rank 3")
    G0, G1, G2 = (g.maximal_parabolic(i) for i in range(3))
    lhs1 = product_mask(G0, G1) & product_mask(G0, G2)
    rhs1 = product_mask(G0, subgroup_intersection(G1, G2))
    lhs2 = product_mask(subgroup_intersection(G0, G1), subgroup_intersection(G0, G2))
    rhs2 = product_mask(G1, G2) & G0.mask
    c1 = bool(np.array_equal(lhs1, rhs1))
    c2 = bool(np.array_equal(lhs2, rhs2))
    if c1 != c2:
        raise TitsInconsistency(f"Tits conditions disagree: (1)={c1}, (2)={c2}")
    return TitsResult(c2, _ids(lhs2), _ids(rhs2), c1, c2)


def flag_transitivity_rank3(g: GeneratedGroup) -> bool:
    """Flag-transitivity of the coset geometry; in rank 3 this is the Tits condition."""
    return tits_condition(g).holds


def quotient_criterion(source: GeneratedGroup, target: GeneratedGroup) -> bool:
    """Does ``rho_j -> sigma_j`` give a map that is injective on ``<rho0, rho1>`` or ``<rho1, rho2>``?

    ``source`` must carry its presentation; every relator is evaluated at the
    ``sigma_j`` and :class:`NotAHomomorphism` is raised if one is not the
    identity. The conclusion also needs the ``sigma_j`` to be involutions, so
    a target with a collapsed generator returns False. Whether the target is
    a string C-group is left to the caller.
    """
    if source.rank != 3 or target.rank != 3:
        raise ValueError("quotient criterion needs rank 3 on both sides")
    if source.presentation is None:
        raise ValueError("source must carry its presentation")
    for rel in source.presentation.relators:
        if target.element(rel) != 0:
            raise NotAHomomorphism(
                f"relator {' '.join(map(str, rel))} does not map to the identity")
    if any(target.group.element_order(x) != 2 for x in target.involutions):
        return False
    for pair in ((0, 1), (1, 2)):
        if source.parabolic(pair).order == target.parabolic(pair).order:
            return True
    return False


def type_orders(g: GeneratedGroup) -> tuple[int, int, int]:
    """``(o(rho0 rho1), o(rho1 rho2), o(rho0 rho2))``."""
    if g.rank != 3:
        raise ValueError("type needs rank 3")
    return g.pair_order(0, 1), g.pair_order(1, 2), g.pair_order(0, 2)
