"""Concrete finite groups given by permutations.

Every :class:`PermGroup` enumerates its elements once and assigns them integer
identifiers, with the identity at 0. All arithmetic then happens on the
right Cayley table ``table[id, col]`` (columns ``g0, g0^-1, g1, g1^-1, ...``),
so membership is O(1) and products cost one table lookup per letter of a
shortest word. Groups coming from a coset table of the trivial subgroup
already are such a table and skip the enumeration.

Products follow the right-action convention: ``a * b`` means "apply a, then
b", matching coset tables; ``x^y = y^-1 x y`` and ``[x, y] = x^-1 y^-1 x y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_ELEMENT_CEILING",
    "ElementCeilingExceeded",
    "NotA2Group",
    "Permutation",
    "PermGroup",
    "Subgroup",
    "element_order",
    "closure",
    "subgroup_intersection",
    "is_normal",
    "commute_check",
    "product_set",
    "frattini_rank",
    "direct_product_witness",
    "minimal_generating_subset",
]

DEFAULT_ELEMENT_CEILING = 1 << 14


class ElementCeilingExceeded(RuntimeError):
    pass


class NotA2Group(ValueError):
    pass


class Permutation:
    """A bijection of ``range(degree)``; ``(p * q)[i] == q[p[i]]``."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        arr = np.asarray(list(images) if not isinstance(images, np.ndarray) else images, dtype=np.int64)
        if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise ValueError("not a permutation")
        arr.setflags(write=False)
        self.images = arr
        self._hash = None

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(np.arange(degree))

    @property
    def degree(self) -> int:
        return self.images.size

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(other.images[self.images])

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** -k
        result = np.arange(self.degree)
        base = self.images
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return Permutation(result)

    def inverse(self) -> "Permutation":
        return Permutation(np.argsort(self.images))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def cycle_lengths(self) -> list[int]:
        seen = np.zeros(self.degree, dtype=bool)
        img = self.images
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            n, i = 0, start
            while not seen[i]:
                seen[i] = True
                i = img[i]
                n += 1
            out.append(n)
        return out

    def order(self) -> int:
        return math.lcm(*self.cycle_lengths()) if self.degree else 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({self.images.tolist()})"


def element_order(g: Permutation) -> int:
    """Least ``k >= 1`` with ``g^k`` the identity."""
    return g.order()


class PermGroup:
    """A finite group with numbered elements.

    Use :meth:`from_permutations` for a group generated by explicit
    permutations and :meth:`from_coset_table` for a regular representation.
    """

    def __init__(self, table: np.ndarray, generator_names: Sequence[str], perms=None, regular=False):
        self.table = np.ascontiguousarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        self.generator_names = tuple(generator_names)
        self._perms = perms
        self.regular = regular
        self.presentation = None
        self._cols = [self.table[:, c].tolist() for c in range(self.table.shape[1])]
        self._word_cache: dict[int, list[int]] = {}
        self._right_cache: dict[int, np.ndarray] = {}

    # -- construction -------------------------------------------------

    @classmethod
    def from_permutations(cls, generators: Sequence, names: Sequence[str] | None = None,
                          element_ceiling: int = DEFAULT_ELEMENT_CEILING) -> "PermGroup":
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if not gens:
            raise ValueError("need at least one generator")
        degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators have different degrees")
        names = tuple(names) if names else tuple(f"g{i}" for i in range(len(gens)))
        moves = []
        for g in gens:
            moves.append(g.images)
            moves.append(np.argsort(g.images))
        ident = np.arange(degree)
        elements = [ident]
        index = {ident.tobytes(): 0}
        rows: list[list[int]] = []
        i = 0
        while i < len(elements):
            cur = elements[i]
            row = []
            for m in moves:
                nxt = m[cur]
                key = nxt.tobytes()
                j = index.get(key)
                if j is None:
                    j = len(elements)
                    if j >= element_ceiling:
                        raise ElementCeilingExceeded(f"group has more than {element_ceiling} elements")
                    index[key] = j
                    elements.append(nxt)
                row.append(j)
            rows.append(row)
            i += 1
        group = cls(np.array(rows, dtype=np.int64), names, perms=elements)
        group._gen_perms = gens
        return group

    @classmethod
    def from_coset_table(cls, coset_table, element_ceiling: int = DEFAULT_ELEMENT_CEILING) -> "PermGroup":
        """Regular representation read off a coset table of the trivial subgroup."""
        if coset_table.subgroup_words and any(coset_table.subgroup_words):
            raise ValueError("coset table must be for the trivial subgroup")
        if coset_table.degree > element_ceiling:
            raise ElementCeilingExceeded(
                f"group order {coset_table.degree} exceeds element ceiling {element_ceiling}")
        group = cls(coset_table.table, coset_table.presentation.generator_names, regular=True)
        group.presentation = coset_table.presentation
        return group

    # -- basic data ---------------------------------------------------

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def ngens(self) -> int:
        return self.table.shape[1] // 2

    @property
    def degree(self) -> int:
        return self.order if self._perms is None else self._perms[0].size

    @property
    def generator_ids(self) -> list[int]:
        return [self._cols[2 * i][0] for i in range(self.ngens)]

    @property
    def generators(self) -> list[Permutation]:
        return [self.permutation(g) for g in self.generator_ids]

    def permutation(self, a: int) -> Permutation:
        """The permutation of element ``a`` on the group's own points."""
        if self._perms is not None:
            return Permutation(self._perms[a])
        return Permutation(self.right_perm(a))

    def element_id(self, perm: Permutation) -> int:
        if self._perms is not None:
            ids = self._perm_index
            try:
                return ids[perm.images.tobytes()]
            except KeyError:
                raise ValueError("permutation is not in the group") from None
        a = int(perm.images[0])
        if not np.array_equal(self.right_perm(a), perm.images):
            raise ValueError("permutation is not in the group")
        return a

    @cached_property
    def _perm_index(self) -> dict[bytes, int]:
        return {p.tobytes(): i for i, p in enumerate(self._perms)}

    # -- words ----------------------------------------------------------

    @cached_property
    def _tree(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Breadth-first spanning tree of the Cayley graph: (order, parent, column)."""
        n = self.order
        parent = np.full(n, -1, dtype=np.int64)
        pcol = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        order = [np.array([0])]
        frontier = np.array([0])
        while frontier.size:
            found = []
            for col in range(self.table.shape[1]):
                nxt = self.table[frontier, col]
                fresh = ~seen[nxt]
                # keep the first occurrence of each newly reached element
                cand, first = np.unique(nxt[fresh], return_index=True)
                src = frontier[fresh][first]
                seen[cand] = True
                parent[cand] = src
                pcol[cand] = col
                found.append(cand[np.argsort(first, kind="stable")])
            frontier = np.concatenate(found) if found else np.array([], dtype=np.int64)
            if frontier.size:
                order.append(frontier)
        return np.concatenate(order), parent, pcol

    def word_columns(self, a: int) -> list[int]:
        """Columns of a shortest word for ``a`` in the group generators."""
        cached = self._word_cache.get(a)
        if cached is not None:
            return cached
        _, parent, pcol = self._tree
        cols = []
        x = a
        while x != 0:
            cols.append(int(pcol[x]))
            x = int(parent[x])
        cols.reverse()
        self._word_cache[a] = cols
        return cols

    def word(self, a: int) -> tuple[int, ...]:
        return tuple((c // 2 + 1) * (-1 if c & 1 else 1) for c in self.word_columns(a))

    def evaluate(self, word: Sequence[int], start: int = 0) -> int:
        """Element reached from ``start`` by multiplying letters of ``word`` on the right."""
        cols = self._cols
        x = start
        for letter in word:
            c = 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1
            x = cols[c][x]
        return x

    # -- arithmetic -------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        cols = self._cols
        for c in self.word_columns(b):
            a = cols[c][a]
        return a

    def product(self, *elements: int) -> int:
        x = 0
        for e in elements:
            x = self.mul(x, e)
        return x

    def inv(self, a: int) -> int:
        cols = self._cols
        x = 0
        for c in reversed(self.word_columns(a)):
            x = cols[c ^ 1][x]
        return x

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        x = 0
        for _ in range(k):
            x = self.mul(x, a)
        return x

    def conj(self, x: int, y: int) -> int:
        """``x^y = y^-1 x y``."""
        return self.mul(self.mul(self.inv(y), x), y)

    def comm(self, x: int, y: int) -> int:
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def right_perm(self, b: int) -> np.ndarray:
        """``p -> p * b`` over all element ids (cached)."""
        r = self._right_cache.get(b)
        if r is None:
            r = np.arange(self.order)
            for c in self.word_columns(b):
                r = self.table[r, c]
            r.setflags(write=False)
            self._right_cache[b] = r
        return r

    def right_apply(self, points: np.ndarray, b: int) -> np.ndarray:
        """``points * b`` elementwise, without caching a full permutation."""
        for c in self.word_columns(b):
            points = self.table[points, c]
        return points

    def left_perm(self, h: int) -> np.ndarray:
        """``x -> h * x`` over all element ids."""
        order, parent, pcol = self._tree
        out = np.empty(self.order, dtype=np.int64)
        out[0] = h
        # h * (p * x) = (h * p) * x, filled in layer by layer
        for layer in self._layers:
            out[layer] = self.table[out[parent[layer]], pcol[layer]]
        return out

    @cached_property
    def _depth(self) -> np.ndarray:
        order, parent, _ = self._tree
        depth = np.zeros(self.order, dtype=np.int64)
        for x in order[1:]:
            depth[x] = depth[parent[x]] + 1
        return depth

    @cached_property
    def _layers(self) -> list[np.ndarray]:
        order, _, _ = self._tree
        depth = self._depth[order]
        return [order[depth == d] for d in range(1, int(depth.max()) + 1)] if self.order > 1 else []

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        return closure(self, gens)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), tuple(self.generator_ids))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, np.array([0]), ())

    # -- quotients ----------------------------------------------------------

    def coset_labels(self, normal: "Subgroup") -> np.ndarray:
        """Label each element by the smallest id in its coset ``N x`` (= ``x N``)."""
        labels = np.arange(self.order)
        changed = True
        perms = [self.right_perm(h) for h in normal.generator_ids]
        while changed:
            changed = False
            for p in perms:
                new = np.minimum(labels, labels[p])
                new = np.minimum(new, new[np.argsort(p)])
                if not np.array_equal(new, labels):
                    labels = new
                    changed = True
            labels = labels[labels]
        return labels

    def quotient(self, normal: "Subgroup") -> "PermGroup":
        """Regular representation of ``G / N``; ``N`` must be normal."""
        if not is_normal(normal):
            raise ValueError("quotient by a non-normal subgroup")
        labels = self.coset_labels(normal)
        reps = np.unique(labels)
        index = np.full(self.order, -1, dtype=np.int64)
        index[reps] = np.arange(reps.size)
        table = index[labels[self.table[reps]]]
        group = PermGroup(table, self.generator_names, regular=True)
        return group

    def __repr__(self) -> str:
        return f"PermGroup(order={self.order}, generators={list(self.generator_names)})"


@dataclass(eq=False)
class Subgroup:
    parent: PermGroup
    members: np.ndarray
    _generators: tuple[int, ...] | None = field(default=None, repr=False)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    @cached_property
    def member_ids(self) -> frozenset[int]:
        return frozenset(self.members.tolist())

    @property
    def order(self) -> int:
        return int(self.members.size)

    @property
    def generator_ids(self) -> tuple[int, ...]:
        if self._generators is None:
            self._generators = _small_generating_set(self)
        return self._generators

    def __contains__(self, a: int) -> bool:
        return bool(self.mask[a])

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.order == self.order and bool(self.mask[other.members].all()))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.members].all())

    def __hash__(self):
        return hash((id(self.parent), self.member_ids))

    def is_trivial(self) -> bool:
        return self.order == 1


def _small_generating_set(s: Subgroup) -> tuple[int, ...]:
    gens: list[int] = []
    current = s.parent.trivial
    for a in s.members.tolist():
        if current.order == s.order:
            break
        if a not in current:
            gens.append(a)
            current = closure(s.parent, gens)
    return tuple(gens)


def _orbit_under(parent: PermGroup, start: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    """Closure of the id set ``start`` under right multiplication by ``gens``."""
    seen = np.zeros(parent.order, dtype=bool)
    seen[start] = True
    out = [np.asarray(start)]
    frontier = np.asarray(start)
    perms = [parent.right_perm(h) for h in gens]
    while frontier.size:
        found = []
        for p in perms:
            nxt = p[frontier]
            nxt = nxt[~seen[nxt]]
            if nxt.size:
                uniq, first = np.unique(nxt, return_index=True)
                uniq = uniq[np.argsort(first, kind="stable")]
                seen[uniq] = True
                found.append(uniq)
        frontier = np.concatenate(found) if found else np.array([], dtype=np.int64)
        if frontier.size:
            out.append(frontier)
    return np.concatenate(out)


def closure(parent: PermGroup, gens: Iterable[int]) -> Subgroup:
    """Subgroup generated by ``gens``, members listed in breadth-first order."""
    gens = tuple(int(g) for g in gens)
    for g in gens:
        if not 0 <= g < parent.order:
            raise ValueError(f"element {g} not in the group")
    members = _orbit_under(parent, np.array([0]), gens)
    if members.size > parent.order or parent.order % members.size:
        raise AssertionError("closure violates Lagrange; the element table is corrupt")
    return Subgroup(parent, members, gens)


def _same_parent(*subgroups: Subgroup) -> PermGroup:
    parent = subgroups[0].parent
    if any(s.parent is not parent for s in subgroups):
        raise ValueError("subgroups belong to different groups")
    return parent


def subgroup_intersection(s1: Subgroup, s2: Subgroup) -> Subgroup:
    _same_parent(s1, s2)
    return Subgroup(s1.parent, s1.members[s2.mask[s1.members]])


def is_normal(s: Subgroup) -> bool:
    g = s.parent
    return all(g.conj(a, x) in s for a in s.generator_ids for x in g.generator_ids)


def commute_check(s1: Subgroup, s2: Subgroup) -> bool:
    g = _same_parent(s1, s2)
    return all(g.mul(a, b) == g.mul(b, a) for a in s1.generator_ids for b in s2.generator_ids)


def product_mask(s1: Subgroup, s2: Subgroup) -> np.ndarray:
    parent = _same_parent(s1, s2)
    m = np.zeros(parent.order, dtype=bool)
    m[_orbit_under(parent, s1.members, s2.generator_ids)] = True
    return m


def product_set(s1: Subgroup, s2: Subgroup) -> frozenset[int]:
    """``{a * b : a in s1, b in s2}`` as element ids (not necessarily a subgroup)."""
    return frozenset(np.flatnonzero(product_mask(s1, s2)).tolist())


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def frattini_rank(group: PermGroup) -> tuple[Subgroup, int]:
    """Frattini subgroup of a 2-group (generated by all squares) and its rank.

    The rank is ``log2 |G : Phi(G)|``, the size of every minimal generating
    set. Every element order of a group of order ``2^k`` is a power of 2, so
    the group order is the 2-group test.
    """
    if not _is_power_of_two(group.order):
        raise NotA2Group(f"group order {group.order} is not a power of 2")
    squares = sorted({group.mul(a, a) for a in range(group.order)})
    gens: list[int] = []
    phi = group.trivial
    for sq in squares:
        if sq not in phi:
            gens.append(sq)
            phi = closure(group, gens)
    index = group.order // phi.order
    return phi, index.bit_length() - 1


def minimal_generating_subset(group: PermGroup, gens: Sequence[int]) -> list[int]:
    """Greedily drop generators while the rest still generate ``group``."""
    kept = list(gens)
    i = 0
    while i < len(kept):
        trial = kept[:i] + kept[i + 1:]
        if closure(group, trial).order == group.order:
            kept = trial
        else:
            i += 1
    return kept


def direct_product_witness(parts: Sequence[Subgroup]) -> bool:
    """True iff the parts pairwise commute, meet the join of the others
    trivially, and their product set has size equal to the product of orders."""
    if not parts:
        return True
    parent = _same_parent(*parts)
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if not commute_check(a, b):
                return False
    for i, a in enumerate(parts):
        others = [g for j, b in enumerate(parts) if j != i for g in b.generator_ids]
        if subgroup_intersection(a, closure(parent, others)).order != 1:
            return False
    prod = parts[0]
    for p in parts[1:]:
        members = np.flatnonzero(product_mask(prod, p))
        prod = Subgroup(parent, members, prod.generator_ids + p.generator_ids)
    return prod.order == math.prod(p.order for p in parts)
