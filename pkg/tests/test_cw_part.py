from __future__ import annotations

import dataclasses
import itertools

import pytest

from src.cw_part import (
    build_part,
    check_boundary_spheres,
    check_cellular_acyclicity,
    check_label_lcm,
    check_meets,
    label_joins,
    meet,
    to_json,
)
from src.graph import parse_graph
from src.partitions import PartitionError
from tests.conftest import CORPUS, graph_id


@pytest.fixture
def part(kite):
    return build_part(kite)


def test_cells_are_the_higher_partitions(part):
    assert [len(layer) for layer in part.cells] == [6, 9, 4]
    assert part.dimension == 2
    assert all(c.k == d + 2 for d, layer in enumerate(part.cells) for c in layer)


def test_augmentation_signs(part):
    assert len(part.incidence[0]) == 6
    assert set(part.incidence[0].values()) <= {1, -1}


def test_facets_and_down_sets(part):
    for cell in part.all_cells():
        below = part.down(cell)
        assert cell in below
        for facet in part.facets(cell):
            assert facet[0] == cell[0] - 1
            assert part.down(facet) <= below
    assert part.facets((0, 0)) == []


def assert_part_checks(p) -> None:
    assert check_label_lcm(p)
    assert check_cellular_acyclicity(p).ok
    assert check_boundary_spheres(p).ok
    assert check_meets(p)


@pytest.mark.parametrize("name", ["kite", "k4", "triangle", "path3", "fat_triangle"])
def test_part_checks(name, request):
    assert_part_checks(build_part(request.getfixturevalue(name)))


@pytest.mark.slow
@pytest.mark.parametrize("g", CORPUS, ids=graph_id)
def test_part_checks_on_the_corpus(g):
    assert_part_checks(build_part(g))


def test_acyclicity_covers_every_label_join(part):
    joins = label_joins(part)
    assert check_cellular_acyclicity(part).checked == len(joins)
    assert all(tuple(part.labels[cell]) in joins for cell in part.all_cells())


def test_wrong_label_is_caught(part):
    labels = dict(part.labels)
    labels[(1, 0)] = tuple(x + 1 for x in labels[(1, 0)])
    assert not check_label_lcm(dataclasses.replace(part, labels=labels))


def test_meet_of_a_cell_with_itself(part):
    for cell in part.all_cells():
        assert meet(part, cell, cell) == cell


def test_meet_of_adjacent_facets(part):
    checked = 0
    for top in [(2, i) for i in range(len(part.cells[2]))]:
        for a, b in itertools.combinations(part.facets(top), 2):
            common = part.down(a) & part.down(b)
            if not common:
                assert meet(part, a, b) is None
                continue
            m = meet(part, a, b)
            assert m is not None and part.down(m) == common
            checked += 1
    assert checked


def test_json_document(part):
    doc = to_json(part)
    assert len(doc["cells"]) == 19
    assert len(doc["incidences"]) == sum(len(inc) for inc in part.incidence[1:])
    first = doc["cells"][0]
    assert first["dimension"] == 0
    assert sorted(v for block in first["blocks"] for v in block) == [1, 2, 3, 4]


def test_single_edge_is_a_point(single_edge):
    p = build_part(single_edge)
    assert [len(layer) for layer in p.cells] == [1]
    assert check_boundary_spheres(p).checked == 0
    assert check_cellular_acyclicity(p).ok


def test_one_vertex_has_no_part():
    with pytest.raises(PartitionError):
        build_part(parse_graph("n 1"))
