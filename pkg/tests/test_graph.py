from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

import config.settings as cfg
from src.graph import (
    GraphError,
    Multigraph,
    fire,
    is_superstable,
    laplacian,
    linearly_equivalent,
    parse_graph,
    q_reduce,
    reduced_solution,
    relabel_sink,
    sandpile_group,
)
from tests.conftest import CORPUS, graph_id

KITE = parse_graph("1 2 1 / 1 3 1 / 1 4 1 / 2 4 1 / 3 4 1")

divisors = st.lists(st.integers(-6, 6), min_size=4, max_size=4).map(tuple)


def in_laplacian_lattice(g: Multigraph, d) -> bool:
    """d = Λx for some integer x with x_n = 0."""
    if sum(d):
        return False
    reduced = g.laplacian[:-1, :-1].astype(float)
    x = np.rint(np.linalg.solve(reduced, np.array(d[:-1], dtype=float))).astype(np.int64)
    return bool(np.array_equal(g.laplacian[:, :-1] @ x, np.array(d)))


# ── Parsing ──────────────────────────────────────────────────────────────────

class TestParse:
    def test_edge_list(self):
        g = parse_graph("1 2 1\n2 3 2\n")
        assert g.n == 3
        assert g.edges() == [(0, 1, 1), (1, 2, 2)]

    def test_separators_comments_and_header(self):
        g = parse_graph("n 4 # four vertices\n1 2 1 ; 2 3 1 / 3 4 1")
        assert g.n == 4
        assert len(g.edges()) == 3

    def test_header_counts_isolated_vertices(self):
        with pytest.raises(GraphError, match="disconnected"):
            parse_graph("n 4 / 1 2 1 / 2 3 1")

    def test_json_with_declared_sink(self):
        g = parse_graph('{"n": 3, "edges": [[1, 2, 1], [2, 3, 2]], "sink": 2}')
        # old order 1, 3, 2: the old sink 2 becomes vertex 3
        assert g.weight(0, 2) == 1
        assert g.weight(1, 2) == 2
        assert g.weight(0, 1) == 0

    def test_sink_argument_overrides(self):
        g = parse_graph("1 2 1 / 2 3 1", sink=1)
        assert g.weight(0, 2) == 1
        assert g.weight(0, 1) == 1
        assert g.weight(1, 2) == 0

    def test_single_vertex(self):
        g = parse_graph("n 1")
        assert g.n == 1
        assert g.edges() == []

    @pytest.mark.parametrize(
        "text, message",
        [
            ("1 1 1", "self-loop"),
            ("1 2 1 / 2 1 1", "duplicate"),
            ("1 2 0", "nonpositive"),
            ("n 2 / 1 3 1", "out of range"),
            ("1 2", "expected"),
            ("1 2 x", "integer"),
            ("", "empty"),
            ('{"edges": []}', "'n'"),
            ("{not json", "invalid JSON"),
            ('{"n": 2, "edges": [7]}', "expected"),
            ('{"n": 2, "edges": null}', "must be a list"),
        ],
    )
    def test_rejects(self, text, message):
        with pytest.raises(GraphError, match=message):
            parse_graph(text)

    def test_bad_sink(self):
        with pytest.raises(GraphError, match="sink"):
            parse_graph("1 2 1", sink=3)

    def test_vertex_limit(self, monkeypatch):
        monkeypatch.setattr(cfg, "MAX_VERTICES", 3)
        with pytest.raises(GraphError, match="limit"):
            parse_graph("1 2 1 / 2 3 1 / 3 4 1")


class TestMultigraph:
    def test_rejects_asymmetric_weights(self):
        with pytest.raises(GraphError, match="symmetric"):
            Multigraph(2, ((0, 1), (2, 0)))

    def test_from_edges_sums_repeats(self):
        g = Multigraph.from_edges(2, [(0, 1, 1), (1, 0, 2)])
        assert g.weight(0, 1) == 3

    def test_tree_and_saturated(self, path3, triangle, kite):
        assert path3.is_tree() and not path3.is_saturated()
        assert triangle.is_saturated() and not triangle.is_tree()
        assert not kite.is_tree() and not kite.is_saturated()

    def test_relabel_sink_moves_vertex_last(self, kite):
        g = relabel_sink(kite, 1)
        # vertex 2 had degree 2 and is now the sink
        assert g.degree(g.sink) == 2
        assert sorted(g.degree(v) for v in range(4)) == sorted(kite.degree(v) for v in range(4))


# ── Laplacian and firing ─────────────────────────────────────────────────────

def test_laplacian_rows_sum_to_zero(kite):
    lap = laplacian(kite)
    assert (lap.sum(axis=1) == 0).all()
    assert (lap == lap.T).all()
    assert list(np.diag(lap)) == [3, 2, 2, 3]


def test_laplacian_copy_is_independent(kite):
    lap = laplacian(kite)
    lap[0, 0] = 99
    assert kite.laplacian[0, 0] == 3


def test_firing_everything_changes_nothing(kite):
    d = (1, 2, 3, -6)
    assert fire(kite, d, range(4)) == d
    assert fire(kite, d, []) == d


def test_fire_single_vertex(kite):
    assert fire(kite, (3, 0, 0, -3), [0]) == (0, 1, 1, -2)


@pytest.mark.parametrize(
    "edges, n, expected",
    [
        ("1 2 1 / 1 3 1 / 1 4 1 / 2 4 1 / 3 4 1", 4, ((1, 1, 1, 0), 1)),
        ("1 2 1 / 2 3 1 / 1 3 1", 3, ((1, 1, 0), 1)),
        ("1 2 1 / 2 3 1", 3, ((3, 2, 0), 1)),
        ("1 2 2", 2, ((1, 0), 2)),
    ],
)
def test_reduced_solution(edges, n, expected):
    g = parse_graph(edges)
    lam, m = reduced_solution(g)
    assert (lam, m) == expected
    y = g.laplacian @ np.array(lam)
    assert list(y) == [m] * (n - 1) + [-m * (n - 1)]


# ── q-reduction ──────────────────────────────────────────────────────────────

def test_reduced_solution_cache_is_bounded():
    assert reduced_solution.cache_info().maxsize == cfg.CACHE_SIZE


def test_q_reduce_fires_the_unburnt_set(kite):
    assert q_reduce(kite, (3, 0, 0, -3)) == (0, 1, 1, -2)


def test_q_reduce_lifts_negative_entries(kite):
    assert q_reduce(kite, (-1, 0, 0, 1)) == (0, 1, 1, -2)
    assert linearly_equivalent(kite, (-1, 0, 0, 1), (3, 0, 0, -3))


def test_q_reduce_rejects_wrong_length(kite):
    with pytest.raises(GraphError):
        q_reduce(kite, (0, 0))


def test_different_degrees_are_not_equivalent(kite):
    assert not linearly_equivalent(kite, (1, 0, 0, 0), (0, 0, 0, 0))


# Divisors in a box are compared with firing vectors in a wider box.
DIVISOR_BOX = range(-2, 3)
FIRING_BOX = range(-4, 5)


def firing_differences(g: Multigraph) -> set[tuple[int, ...]]:
    """Λv over firing vectors v in FIRING_BOX^n, limited to differences of two box divisors."""
    vs = np.array(list(itertools.product(FIRING_BOX, repeat=g.n)), dtype=np.int64)
    images = vs @ g.laplacian
    images = images[np.abs(images).max(axis=1) <= 2 * max(DIVISOR_BOX)]
    return {tuple(int(x) for x in row) for row in images}


def exact_lattice_test(g: Multigraph):
    """d is in the Laplacian lattice iff adj(L~)·d' vanishes mod det(L~)."""
    reduced = Matrix(g.laplacian[:-1, :-1].tolist())
    det = int(reduced.det())
    adj = np.array([[int(x) for x in row] for row in reduced.adjugate().tolist()], dtype=np.int64)

    def member(d) -> bool:
        return sum(d) == 0 and not ((adj @ np.array(d[:-1], dtype=np.int64)) % det).any()

    return member


@pytest.mark.slow
@pytest.mark.parametrize("g", [g for g in CORPUS if g.n <= 4], ids=graph_id)
def test_linear_equivalence_against_firing_search(g):
    member = exact_lattice_test(g)
    box = list(itertools.product(DIVISOR_BOX, repeat=g.n))
    reduced = {d: q_reduce(g, d) for d in box}
    # a firing vector in range always means equivalence
    for diff in firing_differences(g):
        for d in box:
            e = tuple(a - b for a, b in zip(d, diff))
            if e in reduced:
                assert reduced[d] == reduced[e], (d, e)
    # and the classes are exactly the cosets of the lattice
    reps: dict = {}
    for d in box:
        rep = reps.setdefault(reduced[d], d)
        assert linearly_equivalent(g, d, rep)
        assert member(tuple(a - b for a, b in zip(d, rep)))
    for a, b in itertools.combinations(reps.values(), 2):
        assert not member(tuple(x - y for x, y in zip(a, b)))


def test_firing_search_misses_far_equivalences(path4):
    # the witness has spread 16, beyond any vector in FIRING_BOX
    d, e = (2, 2, -2, -2), (-2, -2, 2, 2)
    assert linearly_equivalent(path4, d, e)
    assert tuple(a - b for a, b in zip(d, e)) not in firing_differences(path4)


@settings(max_examples=60, deadline=None)
@given(divisors)
def test_q_reduce_is_superstable_and_equivalent(d):
    q = q_reduce(KITE, d)
    assert sum(q) == sum(d)
    assert is_superstable(KITE, q)
    assert in_laplacian_lattice(KITE, tuple(a - b for a, b in zip(d, q)))
    assert q_reduce(KITE, q) == q


@settings(max_examples=40, deadline=None)
@given(divisors, st.sets(st.integers(0, 3)))
def test_firing_preserves_the_class(d, s):
    assert q_reduce(KITE, fire(KITE, d, s)) == q_reduce(KITE, d)


def test_is_superstable(kite):
    assert is_superstable(kite, (0, 1, 1, 0))
    assert not is_superstable(kite, (3, 0, 0, 0))
    with pytest.raises(GraphError):
        is_superstable(kite, (-1, 0, 0, 0))


# ── Sandpile group ───────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "edges, expected",
    [
        ("1 2 1 / 1 3 1 / 1 4 1 / 2 4 1 / 3 4 1", (8,)),
        ("1 2 1 / 2 3 1 / 1 3 1", (3,)),
        ("1 2 1 / 1 3 1 / 1 4 1 / 2 3 1 / 2 4 1 / 3 4 1", (4, 4)),
        ("1 2 1 / 2 3 1", ()),
        ("1 2 3", (3,)),
    ],
)
def test_sandpile_group(edges, expected):
    assert sandpile_group(parse_graph(edges)) == expected
