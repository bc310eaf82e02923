import itertools

import numpy as np
import pytest

from conftest import family, g_group
from hypertope import GeneratedGroup
from hypertope.geometry import (
    build_geometry,
    check_regular_action,
    count_chambers,
    dump_incidence,
    enumerate_chambers,
    hypertope_verdict,
    is_residually_connected,
    is_thin,
    transitivity_by_orbits,
)
from hypertope.permgroup import PermGroup


def test_c2_cubed_geometry(c2cubed):
    geom = build_geometry(c2cubed, verify=True)
    assert geom.type_sizes == [2, 2, 2]
    assert count_chambers(geom) == 8
    assert is_thin(geom) and is_residually_connected(geom)
    assert check_regular_action(c2cubed, geom)
    assert transitivity_by_orbits(geom) == (True, True)
    # brute force: cosets meet iff they share an element
    for (i, a), (j, b) in itertools.combinations(geom.elements(), 2):
        if i != j:
            share = bool(np.any((geom.labels[i] == a) & (geom.labels[j] == b)))
            assert geom.is_incident((i, a), (j, b)) == share


@pytest.mark.parametrize("params,sizes", [((10, 2, 2, 2), [128, 128, 128]), ((10, 2, 2, 1), [128, 256, 128])])
def test_type_sizes(params, sizes):
    g = g_group(*params)
    assert build_geometry(g, verify=True).type_sizes == sizes


@pytest.mark.parametrize("params", [(10, 2, 2, 2), (11, 2, 2, 2)])
def test_chamber_count(params):
    g = g_group(*params)
    geom = build_geometry(g)
    assert count_chambers(geom) == g.order
    assert is_thin(geom) and is_residually_connected(geom)
    assert check_regular_action(g, geom)


def test_residually_connected_large():
    assert is_residually_connected(build_geometry(g_group(12, 3, 3, 2)))


def test_disjoint_union_is_disconnected(c2cubed):
    geom = build_geometry(c2cubed)
    assert not is_residually_connected(geom.disjoint_union(geom))


def test_non_minimal_subgroup_breaks_thinness(g10):
    G = g10.group
    subs = [G.whole, g10.maximal_parabolic(1), g10.maximal_parabolic(2)]
    geom = build_geometry(g10, subs, verify=True)
    assert not is_thin(geom)


def test_redundant_generator_breaks_regularity():
    v = PermGroup.from_permutations([[1, 0, 3, 2], [2, 3, 0, 1]], ["a", "b"])
    a, b = v.generator_ids
    g = GeneratedGroup(v, (a, b, v.mul(a, b)))
    geom = build_geometry(g, verify=True)
    assert not check_regular_action(g, geom)
    verdict = hypertope_verdict(g)
    assert not verdict.ok and verdict.failed == "intersection_property" and verdict.witness


def test_verdicts():
    v = hypertope_verdict(g_group(10, 2, 2, 2), verify=True)
    assert v.ok and v.type == (4, 4, 4) and v.chambers == 1024
    assert v.describe() == "regular hypertope of type (4, 4, 4) with 1024 chambers"
    v = hypertope_verdict(g_group(13, 4, 3, 2))
    assert v.ok and v.type == (16, 8, 4) and v.chambers == 8192
    v = hypertope_verdict(family("M1", b=2))
    assert v.ok and v.chambers == 64


def test_enumerated_chambers_are_flags(m1b2):
    geom = build_geometry(m1b2)
    for a, b, c in enumerate_chambers(geom):
        assert geom.is_incident((0, a), (1, b))
        assert geom.is_incident((0, a), (2, c))
        assert geom.is_incident((1, b), (2, c))


def test_dump_incidence(tmp_path, c2cubed):
    geom = build_geometry(c2cubed)
    path = tmp_path / "inc.txt"
    dump_incidence(geom, path)
    lines = path.read_text().splitlines()
    assert len(lines) == sum(len(s) for (i, j), lists in geom.incident.items() if i < j for s in lists)
    assert lines[0] == "0:0 1:0"
