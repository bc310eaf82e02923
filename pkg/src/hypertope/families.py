"""End-to-end verification pipelines for the type {4,4} groups M1/M2 and the
2-group family G(n, s, t, l)."""

from __future__ import annotations

import itertools
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


from .cgroups import (
    GeneratedGroup,
    check_intersection_property,
    check_string_property,
    quotient_criterion,
    tits_condition,
    type_orders,
)
from .coset_enum import DEFAULT_CAPACITY, group_order
from .geometry import hypertope_verdict
from .permgroup import (
    DEFAULT_ELEMENT_CEILING,
    ElementCeilingExceeded,
    Subgroup,
    closure,
    commute_check,
    direct_product_witness,
    frattini_rank,
    is_normal,
    product_mask,
    subgroup_intersection,
)
from .presentations import Presentation, build_paper_presentation, theorem_branch

__all__ = [
    "Stage",
    "Prop23Report",
    "Lemma31Report",
    "TheoremReport",
    "AnalysisReport",
    "verify_prop23",
    "verify_lemma31",
    "lemma31_witnesses",
    "verify_theorem32",
    "analyze_presentation",
    "admissible",
]


def admissible(n: int, s: int, t: int, l: int) -> bool:
    return n >= 10 and s >= 2 and t >= 2 and l >= 1 and n >= s + t + l


def _need_ceiling(order: int, ceiling: int) -> None:
    if order > ceiling:
        raise ElementCeilingExceeded(f"group of order {order} exceeds element ceiling {ceiling}")


@dataclass
class Stage:
    name: str
    passed: bool
    witness: Any = None
    elapsed_ms: float = 0.0

    def as_dict(self, timings: bool = True) -> dict:
        d = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        d["elapsed_ms"] = round(self.elapsed_ms, 1) if timings else None
        return d


@dataclass
class Prop23Report:
    b: int
    m1_order: int
    m2_order: int
    m1_rotation_order: int
    m2_rotation_order: int

    @property
    def passed(self) -> bool:
        b = self.b
        return (self.m1_order == 16 * b * b and self.m2_order == 8 * b * b
                and self.m1_rotation_order == 2 * b and self.m2_rotation_order == b)

    def as_dict(self) -> dict:
        return {"b": self.b, "m1_order": self.m1_order, "m2_order": self.m2_order,
                "m1_rotation_order": self.m1_rotation_order,
                "m2_rotation_order": self.m2_rotation_order, "pass": self.passed}


def verify_prop23(b: int, capacity: int = DEFAULT_CAPACITY,
                  element_ceiling: int = DEFAULT_ELEMENT_CEILING) -> Prop23Report:
    """Orders of M1(b), M2(b) and of ``rho2 rho1 rho0`` in M1, ``rho1 rho2 rho1 rho0`` in M2."""
    _need_ceiling(16 * b * b, element_ceiling)
    m1 = GeneratedGroup.from_presentation(build_paper_presentation("M1", b=b), capacity, element_ceiling)
    m2 = GeneratedGroup.from_presentation(build_paper_presentation("M2", b=b), capacity, element_ceiling)
    rot1 = m1.group.element_order(m1.element((3, 2, 1)))
    rot2 = m2.group.element_order(m2.element((2, 3, 2, 1)))
    return Prop23Report(b, m1.order, m2.order, rot1, rot2)


def _conjugate_subgroup(sub: Subgroup, x: int) -> Subgroup:
    g = sub.parent
    return closure(g, [g.conj(a, x) for a in sub.generator_ids])


def lemma31_witnesses(g: GeneratedGroup, kind: str, b: int) -> dict[str, bool]:
    """Witness checks for the decompositions of M1 (``kind="M1"``) or M2.

    M1 = (A x B) ⋊ <rho0, rho2> with A = <rho1^rho0, rho1^rho2>, B = <rho1, rho1^(rho0 rho2)>;
    M2 = (C x D) ⋊ <rho1> with C = <rho0, rho2^rho1>, D = <rho0^rho1, rho2>.
    Each factor is dihedral of order ``2b``. The check names say which identity failed.
    """
    G = g.group
    r0, r1, r2 = g.involutions
    if kind == "M1":
        X = closure(G, [G.conj(r1, r0), G.conj(r1, r2)])
        Y = closure(G, [r1, G.conj(r1, G.mul(r0, r2))])
        complement = closure(G, [r0, r2])
        swappers = [("rho0", r0), ("rho2", r2)]
        rotation = G.mul(G.conj(r1, r2), G.conj(r1, r0))
        names = ("A", "B")
    elif kind == "M2":
        X = closure(G, [r0, G.conj(r2, r1)])
        Y = closure(G, [G.conj(r0, r1), r2])
        complement = closure(G, [r1])
        swappers = [("rho1", r1)]
        rotation = G.mul(G.conj(r2, r1), r0)
        names = ("C", "D")
    else:
        raise ValueError("kind must be 'M1' or 'M2'")
    p, q = names
    checks = {
        f"|{p}| = 2b": X.order == 2 * b,
        f"|{q}| = 2b": Y.order == 2 * b,
        "rotation order = b": G.element_order(rotation) == b,
        f"[{p},{q}] = 1": commute_check(X, Y),
        f"{p} ∩ {q} = 1": subgroup_intersection(X, Y).order == 1,
    }
    XY = closure(G, X.generator_ids + Y.generator_ids)
    checks[f"{p}{q} = {p} x {q}"] = direct_product_witness([X, Y])
    checks[f"complement ∩ {p}{q} = 1"] = subgroup_intersection(complement, XY).order == 1
    checks["complement.{}{} = group".format(p, q)] = int(product_mask(complement, XY).sum()) == G.order
    for label, x in swappers:
        checks[f"{p}^{label} = {q}"] = _conjugate_subgroup(X, x) == Y
        checks[f"{q}^{label} = {p}"] = _conjugate_subgroup(Y, x) == X
    return checks


@dataclass
class Lemma31Report:
    b: int
    m1: dict[str, bool]
    m2: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.m1.values()) and all(self.m2.values())

    def failures(self) -> list[str]:
        return [f"M1: {k}" for k, v in self.m1.items() if not v] + \
               [f"M2: {k}" for k, v in self.m2.items() if not v]


def verify_lemma31(b: int, capacity: int = DEFAULT_CAPACITY,
                   element_ceiling: int = DEFAULT_ELEMENT_CEILING) -> Lemma31Report:
    _need_ceiling(16 * b * b, element_ceiling)
    m1 = GeneratedGroup.from_presentation(build_paper_presentation("M1", b=b), capacity, element_ceiling)
    m2 = GeneratedGroup.from_presentation(build_paper_presentation("M2", b=b), capacity, element_ceiling)
    return Lemma31Report(b, lemma31_witnesses(m1, "M1", b), lemma31_witnesses(m2, "M2", b))


@dataclass
class TheoremReport:
    params: dict[str, int]
    branch: str
    stages: list[Stage] = field(default_factory=list)
    chambers: int | None = None
    type: tuple[int, int, int] | None = None
    verdict: str = ""
    geometry: Any = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return bool(self.stages) and all(s.passed for s in self.stages)

    def flag(self, name: str) -> bool:
        return any(s.name == name and s.passed for s in self.stages)

    # named flags mirroring the stages
    order_ok = property(lambda self: self.flag("order"))
    type_ok = property(lambda self: self.flag("type"))
    normality_ok = property(lambda self: self.flag("normality"))
    K_structure_ok = property(lambda self: self.flag("K_structure"))
    quotient_order_ok = property(lambda self: self.flag("quotient_order"))
    c_group_ok = property(lambda self: self.flag("c_group"))
    rank_ok = property(lambda self: self.flag("rank"))
    tits_ok = property(lambda self: self.flag("tits"))
    hypertope_ok = property(lambda self: self.flag("hypertope"))

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)


class _StageFailed(Exception):
    pass


class _Runner:
    def __init__(self, report: TheoremReport):
        self.report = report

    @contextmanager
    def stage(self, name: str):
        rec = Stage(name, False)
        start = time.perf_counter()
        try:
            yield rec
        finally:
            rec.elapsed_ms = (time.perf_counter() - start) * 1000
            self.report.stages.append(rec)
        if not rec.passed:
            raise _StageFailed(name)


THEOREM_STAGES = ("order", "type", "normality", "K_structure", "quotient_order",
                  "c_group", "rank", "tits", "hypertope")


def verify_theorem32(n: int, s: int, t: int, l: int, capacity: int = DEFAULT_CAPACITY,
                     element_ceiling: int = DEFAULT_ELEMENT_CEILING, deep: bool = False,
                     verify_incidence: bool = False, keep_geometry: bool = False) -> TheoremReport:
    """Check the structure of ``G(n, s, t, l)`` on its regular representation.

    Stages run in order and the first failure stops the pipeline; its
    ``witness`` says what was observed. ``deep=True`` adds the quotient chain
    ``G/C -> G/AC -> G/K`` checks on the presentations G1, G2, G3.
    """
    presentation = build_paper_presentation("G", n=n, s=s, t=t, l=l)
    _need_ceiling(2 ** n, element_ceiling)
    report = TheoremReport({"n": n, "s": s, "t": t, "l": l}, theorem_branch(n, s, t, l))
    run = _Runner(report)
    try:
        with run.stage("order") as st:
            g = GeneratedGroup.from_presentation(presentation, capacity, element_ceiling)
            st.witness = {"order": g.order, "expected": 2 ** n}
            st.passed = g.order == 2 ** n
        G = g.group
        r0, r1, r2 = g.involutions

        with run.stage("type") as st:
            report.type = type_orders(g)
            expected = (2 ** s, 2 ** t, 2 ** l)
            st.witness = {"type": list(report.type), "expected": list(expected)}
            st.passed = report.type == expected

        A = closure(G, [G.pow(G.mul(r0, r1), 4)])
        B = closure(G, [G.pow(G.mul(r1, r2), 4)])
        C = closure(G, [G.pow(G.mul(r0, r2), 2)])
        with run.stage("normality") as st:
            normal = {"A": is_normal(A), "B": is_normal(B), "C": is_normal(C)}
            st.witness = normal
            st.passed = all(normal.values())

        K = closure(G, A.generator_ids + B.generator_ids + C.generator_ids)
        with run.stage("K_structure") as st:
            orders = {"A": A.order, "B": B.order, "C": C.order, "K": K.order}
            expected = {"A": 2 ** (s - 2), "B": 2 ** (t - 2), "C": 2 ** (l - 1), "K": 2 ** (s + t + l - 5)}
            direct = direct_product_witness([A, B, C])
            st.witness = {"orders": orders, "expected": expected, "direct_product": direct}
            st.passed = direct and orders == expected

        with run.stage("quotient_order") as st:
            quotient = G.quotient(K)
            st.witness = {"order": quotient.order, "expected": 2 ** (n - s - t - l + 5)}
            st.passed = quotient.order == G.order // K.order == 2 ** (n - s - t - l + 5)

        with run.stage("c_group") as st:
            cg = check_intersection_property(g)
            pairs = {}
            for i, j in ((0, 1), (0, 2), (1, 2)):
                meet = subgroup_intersection(g.maximal_parabolic(i), g.maximal_parabolic(j))
                pairs[f"G{i}∩G{j}"] = sorted(g.render(x) for x in meet.members.tolist())
            st.witness = {"intersections": pairs,
                          "failures": [[list(I), list(J), w] for I, J, w in cg.failures]}
            st.passed = cg.is_c_group

        with run.stage("rank") as st:
            _, d = frattini_rank(G)
            st.witness = {"d(G)": d}
            st.passed = d == 3

        with run.stage("tits") as st:
            tits = tits_condition(g)
            expected = {0, r1, r2, G.mul(r2, r1)}
            st.witness = {"lhs": sorted(g.render(x) for x in tits.lhs),
                          "rhs": sorted(g.render(x) for x in tits.rhs)}
            st.passed = tits.holds and set(tits.lhs) == set(tits.rhs) == expected

        if deep:
            with run.stage("deep_quotients") as st:
                st.witness = _deep_checks(g, A, B, C, K, n, s, t, l, capacity, element_ceiling)
                st.passed = all(st.witness.values())

        with run.stage("hypertope") as st:
            v = hypertope_verdict(g, verify=verify_incidence)
            report.verdict = v.describe()
            report.chambers = v.chambers
            st.witness = {"verdict": v.describe(), "checks": v.checks, "type_sizes": v.type_sizes}
            st.passed = (v.ok and v.chambers == 2 ** n and v.type == (2 ** s, 2 ** t, 2 ** l))
            if keep_geometry:
                report.geometry = v.geometry
    except _StageFailed as exc:
        report.verdict = report.verdict or f"failed at stage {exc}"
    return report


def _deep_checks(g, A, B, C, K, n, s, t, l, capacity, ceiling) -> dict[str, bool]:
    """Check the quotient chain ``G/C -> G/AC -> G/K`` against the presentations G1, G2, G3."""
    G = g.group
    params = dict(n=n, s=s, t=t, l=l)
    g1 = GeneratedGroup.from_presentation(build_paper_presentation("G1", **params), capacity, ceiling)
    g2 = GeneratedGroup.from_presentation(build_paper_presentation("G2", **params), capacity, ceiling)
    g3 = GeneratedGroup.from_presentation(build_paper_presentation("G3", **params), capacity, ceiling)
    AC = closure(G, A.generator_ids + C.generator_ids)
    out = {
        "|G1| = |G/C|": g1.order == G.order // C.order,
        "|G2| = |G/AC|": g2.order == G.order // AC.order,
        "|G3| = |G/K|": g3.order == G.order // K.order,
        "G/C order via cosets": G.quotient(C).order == g1.order,
        "o(r0 r1) = 2^s in G/C": g1.pair_order(0, 1) == 2 ** s,
        "o(r1 r2) = 2^t in G/AC": g2.pair_order(1, 2) == 2 ** t,
    }
    for name, h in (("G1", g1), ("G2", g2), ("G3", g3)):
        rep = check_intersection_property(h)
        out[f"{name} string C-group"] = rep.is_c_group and rep.is_string
    out["G/AC -> G/K quotient criterion"] = quotient_criterion(g2, g3)
    out["G/C -> G/AC quotient criterion"] = quotient_criterion(g1, g2)
    out["d(G/C) = 3"] = frattini_rank(g1.group)[1] == 3
    # G/K is M2 (even branch) or M1 (odd branch) with a power-of-two parameter
    d = n - s - t - l
    if d % 2 == 0:
        kind, b = "M2", 2 ** ((d + 2) // 2)
    else:
        kind, b = "M1", 2 ** ((d + 1) // 2)
    m = group_order(build_paper_presentation(kind, b=b), capacity)
    out[f"|G/K| = |{kind}({b})|"] = m == g3.order
    out[f"G/K {kind}-style witnesses"] = all(lemma31_witnesses(g3, kind, b).values())
    return out


@dataclass
class AnalysisReport:
    order: int
    expected_order: int | None
    involutions: bool
    type: tuple[int, int, int] | None
    c_group: bool | None
    c_group_failures: list
    string_orderings: list[tuple[int, int, int]]
    tits: bool | None
    verdict: str
    hypertope: bool
    geometry: Any = field(default=None, repr=False)

    @property
    def order_matches(self) -> bool | None:
        return None if self.expected_order is None else self.order == self.expected_order

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "expected_order": self.expected_order,
            "order_matches": self.order_matches,
            "involutions": self.involutions,
            "type": list(self.type) if self.type else None,
            "c_group": self.c_group,
            "c_group_failures": [[list(I), list(J), w] for I, J, w in self.c_group_failures],
            "string_orderings": [list(o) for o in self.string_orderings],
            "tits": self.tits,
            "hypertope": self.hypertope,
            "verdict": self.verdict,
        }


def analyze_presentation(p: Presentation, capacity: int = DEFAULT_CAPACITY,
                         element_ceiling: int = DEFAULT_ELEMENT_CEILING,
                         expected_order: int | None = None, verify_incidence: bool = False,
                         keep_geometry: bool = False) -> AnalysisReport:
    """Full pipeline on an arbitrary rank-3 presentation.

    ``expected_order`` defaults to ``2^n`` when the presentation carries a
    parameter ``n``. Orderings of the generators that satisfy the string
    property are listed as well.
    """
    if p.ngens != 3:
        raise ValueError(f"expected 3 generators, got {p.ngens}")
    if expected_order is None and "n" in p.params:
        expected_order = 2 ** p.params["n"]
    from .coset_enum import regular_representation

    group = regular_representation(p, capacity, element_ceiling)
    g = GeneratedGroup(group, tuple(group.generator_ids), p, check=False)
    involutions = all(group.element_order(x) == 2 for x in g.involutions)
    report = AnalysisReport(group.order, expected_order, involutions, None, None, [], [], None, "", False)
    if not involutions:
        bad = [g.names[i] for i, x in enumerate(g.involutions) if group.element_order(x) != 2]
        report.verdict = f"not a regular hypertope: generators {', '.join(bad)} are not involutions"
        return report
    report.type = type_orders(g)
    for perm in itertools.permutations(range(3)):
        h = GeneratedGroup(group, tuple(g.involutions[i] for i in perm), check=False)
        if check_string_property(h):
            report.string_orderings.append(perm)
    v = hypertope_verdict(g, verify=verify_incidence)
    report.c_group = v.checks.get("intersection_property")
    if not report.c_group:
        report.c_group_failures = check_intersection_property(g).failures
    report.tits = v.checks.get("flag_transitivity")
    report.hypertope = v.ok
    report.verdict = v.describe()
    if keep_geometry:
        report.geometry = v.geometry
    if report.order_matches is False:
        report.verdict += f"; order {report.order} does not match expected {expected_order}"
    return report
