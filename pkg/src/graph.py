"""
Graph core – multigraphs with a sink, Laplacians, divisors and chip-firing.

Conventions:
  - Vertices are indices 0..n-1 internally; the sink is always n-1.
    Text output and the input formats use 1..n.
  - Edge multiplicity is an integer weight, never parallel edge objects.
  - A divisor is a plain tuple of ints, one entry per vertex.

Linear equivalence is decided by q-reduction: first push chips off the sink
with an integral multiple of the reduced-Laplacian solution, then run Dhar's
burning algorithm from the sink, firing the unburnt set until it is empty.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import networkx as nx
import numpy as np
from sympy import Matrix, ZZ, ilcm
from sympy.matrices.normalforms import smith_normal_form

import config.settings as cfg

logger = logging.getLogger(__name__)

Divisor = tuple[int, ...]


class GraphError(ValueError):
    """Raised when a graph cannot be parsed or violates the multigraph invariants."""


@dataclass(frozen=True)
class Multigraph:
    n: int
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.weights) != self.n or any(len(row) != self.n for row in self.weights):
            raise GraphError(f"weight matrix must be {self.n}x{self.n}")
        for i in range(self.n):
            if self.weights[i][i] != 0:
                raise GraphError(f"self-loop at vertex {i + 1}")
            for j in range(self.n):
                w = self.weights[i][j]
                if w < 0:
                    raise GraphError(f"negative weight between {i + 1} and {j + 1}")
                if w != self.weights[j][i]:
                    raise GraphError(f"weights not symmetric at ({i + 1}, {j + 1})")
        if not nx.is_connected(self.nx_graph):
            raise GraphError("graph is disconnected")

    @classmethod
    def from_edges(cls, n: int, edges: list[tuple[int, int, int]]) -> "Multigraph":
        """Build from 0-based (u, v, w) triples; weights of repeated pairs are summed."""
        rows = [[0] * n for _ in range(n)]
        for u, v, w in edges:
            rows[u][v] += w
            rows[v][u] += w
        return cls(n, tuple(tuple(r) for r in rows))

    # ── Basic queries ────────────────────────────────────────────────────────

    @property
    def sink(self) -> int:
        return self.n - 1

    def weight(self, u: int, v: int) -> int:
        return self.weights[u][v]

    def edges(self) -> list[tuple[int, int, int]]:
        """Positive-weight pairs (u, v, w) with u < v, in lexicographic order."""
        return [
            (u, v, self.weights[u][v])
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if self.weights[u][v] > 0
        ]

    def degree(self, v: int) -> int:
        return sum(self.weights[v])

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_weighted_edges_from(
            (u, v, self.weights[u][v])
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if self.weights[u][v] > 0
        )
        return graph

    @cached_property
    def laplacian(self) -> np.ndarray:
        a = np.array(self.weights, dtype=np.int64).reshape(self.n, self.n)
        return np.diag(a.sum(axis=1)) - a

    def is_tree(self) -> bool:
        return len(self.edges()) == self.n - 1

    def is_saturated(self) -> bool:
        """Every pair of distinct vertices is joined by an edge."""
        return len(self.edges()) == self.n * (self.n - 1) // 2


# ── Parsing ──────────────────────────────────────────────────────────────────

def parse_graph(text: str, sink: int | None = None) -> Multigraph:
    """
    Parse an edge list or a JSON document into a validated Multigraph.

    Edge list: lines "u v w" (1-based, w a positive integer) with an optional
    "n <count>" header; '/' and ';' also separate lines and '#' starts a
    comment. JSON: {"n": int, "edges": [[u, v, w], ...], "sink": int?}.
    `sink` (1-based) overrides any sink declared in the input. The sink is
    relabeled to vertex n; the other vertices keep their relative order.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        n, triples, declared = _parse_json(stripped)
    else:
        n, triples, declared = _parse_edge_list(stripped)

    if sink is None:
        sink = declared if declared is not None else n
    if not 1 <= sink <= n:
        raise GraphError(f"sink {sink} is not a vertex of a graph on {n} vertices")
    if n > cfg.MAX_VERTICES:
        raise GraphError(f"graph has {n} vertices; the limit is {cfg.MAX_VERTICES} (SANDPILE_MAX_VERTICES)")

    seen: set[frozenset[int]] = set()
    edges = []
    for u, v, w in triples:
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        for x in (u, v):
            if not 1 <= x <= n:
                raise GraphError(f"vertex {x} out of range 1..{n}")
        if w <= 0:
            raise GraphError(f"edge {u}-{v} has nonpositive weight {w}")
        pair = frozenset((u, v))
        if pair in seen:
            raise GraphError(f"duplicate edge {u}-{v}")
        seen.add(pair)
        edges.append((u - 1, v - 1, w))

    g = Multigraph.from_edges(n, edges)
    if sink != n:
        order = [v for v in range(n) if v != sink - 1] + [sink - 1]
        logger.info(
            "Relabeled vertices so the sink is %d: %s",
            n, ", ".join(f"{old + 1}->{new + 1}" for new, old in enumerate(order) if old != new),
        )
        g = relabel_sink(g, sink - 1)
    logger.info("Parsed graph with %d vertices and %d edges", g.n, len(g.edges()))
    return g


def _int_token(token, what: str) -> int:
    if isinstance(token, bool):
        raise GraphError(f"{what} must be an integer, got {token!r}")
    if isinstance(token, int):
        return token
    try:
        return int(str(token))
    except ValueError:
        raise GraphError(f"{what} must be an integer, got {token!r}") from None


def _parse_edge_list(text: str) -> tuple[int, list[tuple[int, int, int]], int | None]:
    n = None
    triples = []
    for raw in text.replace("/", "\n").replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2 or n is not None:
                raise GraphError(f"bad header line: {line!r}")
            n = _int_token(tokens[1], "vertex count")
            continue
        if len(tokens) != 3:
            raise GraphError(f"expected 'u v w', got {line!r}")
        u, v, w = (_int_token(t, "edge field") for t in tokens)
        triples.append((u, v, w))
    if n is None:
        if not triples:
            raise GraphError("empty graph description")
        n = max(max(u, v) for u, v, _ in triples)
    return n, triples, None


def _parse_json(text: str) -> tuple[int, list[tuple[int, int, int]], int | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphError("JSON graph must be an object")
    if "n" not in doc:
        raise GraphError("JSON graph needs an 'n' field")
    n = _int_token(doc["n"], "n")
    edges = doc.get("edges", [])
    if not isinstance(edges, list):
        raise GraphError(f"'edges' must be a list, got {edges!r}")
    triples = []
    for edge in edges:
        if not isinstance(edge, (list, tuple)) or len(edge) != 3:
            raise GraphError(f"expected [u, v, w], got {edge!r}")
        triples.append(tuple(_int_token(x, "edge field") for x in edge))
    declared = doc.get("sink")
    return n, triples, None if declared is None else _int_token(declared, "sink")


def relabel_sink(g: Multigraph, v: int) -> Multigraph:
    """Move vertex v (0-based) to the last position, keeping the others in order."""
    order = [u for u in range(g.n) if u != v] + [v]
    rows = tuple(tuple(g.weights[a][b] for b in order) for a in order)
    return Multigraph(g.n, rows)


# ── Laplacian and firing ─────────────────────────────────────────────────────

def laplacian(g: Multigraph) -> np.ndarray:
    return g.laplacian.copy()


def fire(g: Multigraph, d: Divisor, s) -> Divisor:
    """Fire every vertex of s once: d minus the Laplacian rows indexed by s."""
    s = sorted(set(s))
    if not s:
        return tuple(d)
    out = np.asarray(d, dtype=np.int64) - g.laplacian[s].sum(axis=0)
    return tuple(int(x) for x in out)


@lru_cache(maxsize=cfg.CACHE_SIZE)
def reduced_solution(g: Multigraph) -> tuple[Divisor, int]:
    """
    Integral solution of Λλ = m·(1, …, 1, −(n−1)) with λ_n = 0.

    λ' solves the reduced Laplacian system L~λ' = (1, …, 1) exactly; m is the
    least common denominator of λ', which is the least m with an integral
    solution because the kernel of Λ is spanned by (1, …, 1).
    """
    if g.n == 1:
        return (0,), 1
    reduced = Matrix(g.laplacian[:-1, :-1].tolist())
    solution = reduced.LUsolve(Matrix([1] * (g.n - 1)))
    m = 1
    for x in solution:
        m = ilcm(m, x.q)
    lam = tuple(int(x * m) for x in solution) + (0,)
    return lam, int(m)


def _unburnt(g: Multigraph, d: Divisor) -> set[int]:
    """Dhar burning from the sink; returns the vertices that never catch fire."""
    unburnt = set(range(g.n - 1))
    # chips each vertex loses to already-burnt neighbours
    exposure = [g.weights[v][g.sink] for v in range(g.n)]
    changed = True
    while changed:
        changed = False
        for v in sorted(unburnt):
            if d[v] < exposure[v]:
                unburnt.discard(v)
                for u in unburnt:
                    exposure[u] += g.weights[u][v]
                changed = True
    return unburnt


def q_reduce(g: Multigraph, d: Divisor) -> Divisor:
    """The q-reduced divisor linearly equivalent to d, with q the sink."""
    if len(d) != g.n:
        raise GraphError(f"divisor has {len(d)} entries, graph has {g.n} vertices")
    if g.n == 1:
        return tuple(d)

    lam, m = reduced_solution(g)
    deficit = max(0, -min(d[:-1]))
    k = math.ceil(deficit / m)
    current = tuple(
        x + k * m if v < g.sink else x - k * m * (g.n - 1) for v, x in enumerate(d)
    )

    rounds = 0
    while True:
        unburnt = _unburnt(g, current)
        if not unburnt:
            break
        current = fire(g, current, unburnt)
        rounds += 1
    logger.debug("q-reduced %s in %d firing rounds", d, rounds)
    return current


def linearly_equivalent(g: Multigraph, d: Divisor, e: Divisor) -> bool:
    if sum(d) != sum(e):
        return False
    return q_reduce(g, d) == q_reduce(g, e)


def is_superstable(g: Multigraph, d: Divisor) -> bool:
    """True iff the off-sink part of d burns completely from the sink."""
    if any(x < 0 for x in d[:-1]):
        raise GraphError(f"configuration {d} is negative off the sink")
    return not _unburnt(g, d)


# ── Sandpile group ───────────────────────────────────────────────────────────

def sandpile_group(g: Multigraph) -> tuple[int, ...]:
    """Invariant factors > 1 of the reduced Laplacian (Smith normal form)."""
    if g.n == 1:
        return ()
    reduced = Matrix(g.laplacian[:-1, :-1].tolist())
    snf = smith_normal_form(reduced, domain=ZZ)
    factors = sorted(abs(int(snf[i, i])) for i in range(g.n - 1))
    return tuple(f for f in factors if f > 1)
