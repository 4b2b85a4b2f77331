from __future__ import annotations

import networkx as nx
import numpy as np
import pytest

from src.graph import Multigraph, parse_graph


def from_nx(graph: nx.Graph) -> Multigraph:
    return Multigraph.from_edges(graph.number_of_nodes(), [(u, v, 1) for u, v in graph.edges()])


def atlas_graphs(max_n: int = 5) -> list[Multigraph]:
    """Connected simple graphs of the networkx atlas with 2..max_n vertices."""
    return [
        from_nx(graph)
        for graph in nx.graph_atlas_g()
        if 2 <= graph.number_of_nodes() <= max_n and nx.is_connected(graph)
    ]


def random_multigraphs(count: int = 20, seed: int = 7) -> list[Multigraph]:
    """Random spanning tree plus extra edges, weights 1..3, on 2..4 vertices."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, 5))
        edges = [(int(rng.integers(0, v)), v, int(rng.integers(1, 4))) for v in range(1, n)]
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.4:
                    edges.append((u, v, int(rng.integers(1, 3))))
        out.append(Multigraph.from_edges(n, edges))
    return out


CORPUS = atlas_graphs() + random_multigraphs()


@pytest.fixture
def kite() -> Multigraph:
    return parse_graph("1 2 1 / 1 3 1 / 1 4 1 / 2 4 1 / 3 4 1")


@pytest.fixture
def triangle() -> Multigraph:
    return parse_graph("1 2 1 / 2 3 1 / 1 3 1")


@pytest.fixture
def path3() -> Multigraph:
    return parse_graph("1 2 1 / 2 3 1")


@pytest.fixture
def single_edge() -> Multigraph:
    return parse_graph("1 2 1")


@pytest.fixture
def double_edge() -> Multigraph:
    return parse_graph("1 2 2")


@pytest.fixture
def k4() -> Multigraph:
    return parse_graph("1 2 1 / 1 3 1 / 1 4 1 / 2 3 1 / 2 4 1 / 3 4 1")


@pytest.fixture
def star4() -> Multigraph:
    """Three leaves around the sink."""
    return parse_graph("1 4 1 / 2 4 1 / 3 4 1")


@pytest.fixture
def fat_triangle() -> Multigraph:
    return parse_graph("1 2 2 / 2 3 1 / 1 3 3")


def graph_id(g: Multigraph) -> str:
    return f"n{g.n}-" + "-".join(f"{u + 1}{v + 1}x{w}" for u, v, w in g.edges())


@pytest.fixture
def path4() -> Multigraph:
    return parse_graph("1 2 1 / 2 3 1 / 3 4 1")
