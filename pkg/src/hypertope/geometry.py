"""Tits coset geometries of rank 3 and the hypertope axioms.

Elements of type ``i`` are the right cosets ``G_i x``, numbered by their
smallest element id. Two cosets of different types are incident when they
intersect, which happens iff ``x y^-1 ∈ G_i G_j``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .cgroups import (
    GeneratedGroup,
    check_intersection_property,
    flag_transitivity_rank3,
    type_orders,
)
from .permgroup import Subgroup, product_mask, subgroup_intersection

__all__ = [
    "CosetGeometry",
    "build_geometry",
    "coset_labels",
    "enumerate_chambers",
    "count_chambers",
    "is_thin",
    "is_residually_connected",
    "check_regular_action",
    "transitivity_by_orbits",
    "HypertopeVerdict",
    "hypertope_verdict",
    "dump_incidence",
]


@dataclass(eq=False)
class CosetGeometry:
    """A rank-``r`` incidence system given by per-type element counts and
    cross-type incidence lists.

    ``incident[(i, j)][a]`` is the set of type-``j`` elements incident to the
    type-``i`` element ``a``. ``labels[i][g]`` (coset geometries only) is the
    type-``i`` element containing group element ``g``.
    """

    type_sizes: list[int]
    incident: dict[tuple[int, int], list[set[int]]]
    labels: list[np.ndarray] | None = None
    subgroups: list[Subgroup] | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.type_sizes)

    def elements(self) -> Iterator[tuple[int, int]]:
        for i, n in enumerate(self.type_sizes):
            for a in range(n):
                yield i, a

    def is_incident(self, x: tuple[int, int], y: tuple[int, int]) -> bool:
        if x[0] == y[0]:
            return x == y
        return y[1] in self.incident[(x[0], y[0])][x[1]]

    def incident_pairs(self, i: int, j: int) -> Iterator[tuple[int, int]]:
        for a, nbrs in enumerate(self.incident[(i, j)]):
            for b in sorted(nbrs):
                yield a, b

    def disjoint_union(self, other: "CosetGeometry") -> "CosetGeometry":
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        sizes = [a + b for a, b in zip(self.type_sizes, other.type_sizes)]
        inc = {}
        for (i, j), lists in self.incident.items():
            shift = self.type_sizes[j]
            inc[(i, j)] = [set(s) for s in lists] + [{b + shift for b in s} for s in other.incident[(i, j)]]
        return CosetGeometry(sizes, inc)


def _left_labels(g: GeneratedGroup, sub: Subgroup) -> np.ndarray:
    """Smallest element id of the right coset ``sub * x``, for every ``x``."""
    group = g.group
    perms = [group.left_perm(h) for h in sub.generator_ids]
    labels = np.arange(group.order)
    changed = True
    while changed:
        changed = False
        for p in perms:
            new = np.minimum(labels, labels[p])
            inv = np.empty_like(p)
            inv[p] = np.arange(p.size)
            new = np.minimum(new, new[inv])
            if not np.array_equal(new, labels):
                labels, changed = new, True
        labels = labels[labels]
    return labels


def coset_labels(g: GeneratedGroup, sub: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """Number the right cosets of ``sub`` by smallest member.

    Returns ``(labels, reps)``: ``labels[x]`` is the index of ``sub * x`` and
    ``reps[k]`` the smallest element id of coset ``k``.
    """
    mins = _left_labels(g, sub)
    reps = np.unique(mins)
    index = np.empty(g.order, dtype=np.int64)
    index[reps] = np.arange(reps.size)
    return index[mins], reps


def _transpose(lists: list[set[int]], size: int) -> list[set[int]]:
    out: list[set[int]] = [set() for _ in range(size)]
    for b, nbrs in enumerate(lists):
        for a in nbrs:
            out[a].add(b)
    return out


def build_geometry(g: GeneratedGroup, subgroups: Sequence[Subgroup] | None = None,
                   verify: bool = False) -> CosetGeometry:
    """Coset geometry of ``g`` on ``subgroups`` (default ``G_i = <rho_j : j != i>``).

    Incidence comes from membership in the product sets ``G_i G_j``. With
    ``verify=True`` it is recomputed by intersecting cosets explicitly and
    any disagreement raises AssertionError.
    """
    if subgroups is None:
        if g.rank != 3:
            raise ValueError("coset geometries are built in rank 3 only")
        subgroups = [g.maximal_parabolic(i) for i in range(g.rank)]
    subgroups = list(subgroups)
    group = g.group
    labels, reps = zip(*(coset_labels(g, s) for s in subgroups))
    sizes = [r.size for r in reps]

    incident: dict[tuple[int, int], list[set[int]]] = {}
    for i, j in itertools.combinations(range(len(subgroups)), 2):
        # G_i x meets G_j y  iff  x ∈ G_i G_j y
        prod = np.flatnonzero(product_mask(subgroups[i], subgroups[j]))
        lists = [set(np.unique(labels[i][group.right_apply(prod, y)]).tolist())
                 for y in reps[j].tolist()]
        incident[(j, i)] = lists
        incident[(i, j)] = _transpose(lists, sizes[i])

    geom = CosetGeometry(sizes, incident, list(labels), subgroups)
    if verify:
        oracle = _incidence_by_intersection(list(labels), sizes)
        for key, lists in incident.items():
            if lists != oracle[key]:
                raise AssertionError(f"product-set incidence disagrees with coset intersection for types {key}")
    return geom


def _incidence_by_intersection(labels: list[np.ndarray], sizes: list[int]) -> dict:
    """Cosets ``G_i x`` and ``G_j y`` meet iff some element lies in both."""
    out = {}
    for i, j in itertools.permutations(range(len(labels)), 2):
        lists = [set() for _ in range(sizes[i])]
        for a, b in zip(labels[i].tolist(), labels[j].tolist()):
            lists[a].add(b)
        out[(i, j)] = lists
    return out


def _require_rank3(geom: CosetGeometry) -> None:
    if geom.rank != 3:
        raise ValueError("rank-3 geometry expected")


def enumerate_chambers(geom: CosetGeometry) -> Iterator[tuple[int, int, int]]:
    """All pairwise-incident triples, without assuming any transitivity."""
    _require_rank3(geom)
    inc01, inc02, inc12 = geom.incident[(0, 1)], geom.incident[(0, 2)], geom.incident[(1, 2)]
    for a in range(geom.type_sizes[0]):
        for b in sorted(inc01[a]):
            for c in sorted(inc02[a] & inc12[b]):
                yield a, b, c


def count_chambers(geom: CosetGeometry) -> int:
    return sum(1 for _ in enumerate_chambers(geom))


def is_thin(geom: CosetGeometry) -> bool:
    """Every flag of cotype ``{i}`` lies in exactly two chambers."""
    _require_rank3(geom)
    for i in range(3):
        j, k = (t for t in range(3) if t != i)
        for b, c in geom.incident_pairs(j, k):
            if len(geom.incident[(j, i)][b] & geom.incident[(k, i)][c]) != 2:
                return False
    return True


def _connected(nodes: list[tuple[int, int]], geom: CosetGeometry) -> bool:
    if not nodes:
        return False
    node_set = set(nodes)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        t, a = queue.popleft()
        for u in range(geom.rank):
            if u == t:
                continue
            for b in geom.incident[(t, u)][a]:
                y = (u, b)
                if y in node_set and y not in seen:
                    seen.add(y)
                    queue.append(y)
    return len(seen) == len(node_set)


def is_residually_connected(geom: CosetGeometry) -> bool:
    """The incidence graph and every element's rank-2 residue are connected."""
    _require_rank3(geom)
    if not _connected(list(geom.elements()), geom):
        return False
    for t, a in geom.elements():
        residue = [(u, b) for u in range(3) if u != t for b in geom.incident[(t, u)][a]]
        if not _connected(residue, geom):
            return False
        # a rank-2 residue must contain both remaining types
        if len({u for u, _ in residue}) != 2:
            return False
    return True


def check_regular_action(g: GeneratedGroup, geom: CosetGeometry) -> bool:
    """Right multiplication by ``G`` is regular on chambers.

    Checks that the base chamber ``(G_0, G_1, G_2)`` has trivial stabilizer
    ``G_0 ∩ G_1 ∩ G_2``, that its orbit has ``|G|`` chambers, and that every
    chamber lies in that orbit.
    """
    if geom.labels is None or geom.subgroups is None:
        raise ValueError("geometry was not built from a group")
    stab = geom.subgroups[0]
    for s in geom.subgroups[1:]:
        stab = subgroup_intersection(stab, s)
    if stab.order != 1:
        return False
    orbit = set(zip(*(lab.tolist() for lab in geom.labels)))
    if len(orbit) != g.order:
        return False
    chambers = 0
    for ch in enumerate_chambers(geom):
        if ch not in orbit:
            return False
        chambers += 1
    return chambers == g.order


def transitivity_by_orbits(geom: CosetGeometry) -> tuple[bool, bool]:
    """(flag-transitive, chamber-transitive) under right multiplication.

    The orbit of the base flag of type ``J`` is ``{(G_j g)_{j in J} : g ∈ G}``;
    the action is transitive on type-``J`` flags iff that orbit contains all
    of them.
    """
    _require_rank3(geom)
    if geom.labels is None:
        raise ValueError("geometry was not built from a group")
    flags = {
        (0,): geom.type_sizes[0],
        (1,): geom.type_sizes[1],
        (2,): geom.type_sizes[2],
        (0, 1): sum(len(s) for s in geom.incident[(0, 1)]),
        (0, 2): sum(len(s) for s in geom.incident[(0, 2)]),
        (1, 2): sum(len(s) for s in geom.incident[(1, 2)]),
        (0, 1, 2): count_chambers(geom),
    }
    transitive = {}
    for J, total in flags.items():
        stacked = np.stack([geom.labels[j] for j in J], axis=1)
        transitive[J] = len(np.unique(stacked, axis=0)) == total
    return all(transitive.values()), transitive[(0, 1, 2)]


def dump_incidence(geom: CosetGeometry, path) -> None:
    """Write the incidence graph as lines ``i:a j:b`` (types ``i < j``)."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in itertools.combinations(range(geom.rank), 2):
            for a, b in geom.incident_pairs(i, j):
                fh.write(f"{i}:{a} {j}:{b}\n")


@dataclass
class HypertopeVerdict:
    ok: bool
    failed: str | None
    type: tuple[int, int, int] | None = None
    chambers: int | None = None
    type_sizes: list[int] | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    witness: str | None = None
    geometry: CosetGeometry | None = field(default=None, repr=False)

    def describe(self) -> str:
        if self.ok:
            a, b, c = self.type
            return f"regular hypertope of type ({a}, {b}, {c}) with {self.chambers} chambers"
        msg = f"not a regular hypertope: {self.failed} fails"
        return msg + (f" (witness {self.witness})" if self.witness else "")


def hypertope_verdict(g: GeneratedGroup, verify: bool = False) -> HypertopeVerdict:
    """Run the C-group, flag-transitivity and geometry checks in order and stop
    at the first failure."""
    if g.rank != 3:
        raise ValueError("hypertope verdict is for rank 3")
    verdict = HypertopeVerdict(False, None, type=type_orders(g))
    report = check_intersection_property(g)
    verdict.checks["intersection_property"] = report.is_c_group
    if not report.is_c_group:
        I, J, w = report.failures[0]
        span = lambda idx: "<" + ", ".join(g.names[i] for i in idx) + ">"
        verdict.failed = "intersection_property"
        verdict.witness = f"{span(I)} ∩ {span(J)} contains {w}"
        return verdict
    ft = flag_transitivity_rank3(g)
    verdict.checks["flag_transitivity"] = ft
    if not ft:
        verdict.failed = "flag_transitivity"
        return verdict
    geom = build_geometry(g, verify=verify)
    verdict.geometry = geom
    verdict.type_sizes = list(geom.type_sizes)
    for name, check in (("thin", is_thin), ("residually_connected", is_residually_connected)):
        ok = check(geom)
        verdict.checks[name] = ok
        if not ok:
            verdict.failed = name
            return verdict
    verdict.chambers = count_chambers(geom)
    regular = check_regular_action(g, geom)
    verdict.checks["regular_action"] = regular
    if not regular:
        verdict.failed = "regular_action"
        return verdict
    verdict.ok = True
    return verdict
