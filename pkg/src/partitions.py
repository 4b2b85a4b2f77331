"""
Acyclic partitions – connected partitions, oriented quotients, contraction,
chip-firing classes and the sign function.

An AcyclicPartition is a connected partition of the vertices (blocks sorted by
their least vertex) together with an acyclic orientation of its quotient
graph, stored as (tail, head) block-index pairs. It is n-acyclic when its only
sink is the block that holds the graph's sink.

Two acyclic partitions on the same blocks are chip-firing equivalent when one
can be turned into the other by repeatedly reversing every arc at a source or
at a sink; each class holds exactly one n-acyclic member.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

import networkx as nx
from sympy.combinatorics import Permutation

import config.settings as cfg
from src.graph import Divisor, Multigraph

logger = logging.getLogger(__name__)

Block = frozenset[int]


class PartitionError(ValueError):
    """Raised on a k outside 1..n or on an operation that needs a contractible edge."""


class NotContractibleError(PartitionError):
    pass


# ── Value types ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Partition:
    blocks: tuple[Block, ...]

    @classmethod
    def of(cls, blocks) -> "Partition":
        return cls(tuple(sorted((frozenset(b) for b in blocks), key=min)))

    @property
    def k(self) -> int:
        return len(self.blocks)

    def index_of(self, v: int) -> int:
        for i, block in enumerate(self.blocks):
            if v in block:
                return i
        raise KeyError(v)

    def sort_key(self) -> tuple:
        return tuple(tuple(sorted(b)) for b in self.blocks)


@dataclass(frozen=True)
class QuotientEdge:
    tail: Block
    head: Block

    def reversed(self) -> "QuotientEdge":
        return QuotientEdge(self.head, self.tail)


@dataclass(frozen=True)
class AcyclicPartition:
    partition: Partition
    arcs: frozenset[tuple[int, int]]
    graph: Multigraph

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def blocks(self) -> tuple[Block, ...]:
        return self.partition.blocks

    @property
    def sink_block(self) -> int:
        return self.partition.index_of(self.graph.sink)

    @cached_property
    def digraph(self) -> nx.DiGraph:
        dg = nx.DiGraph()
        dg.add_nodes_from(range(self.k))
        dg.add_edges_from(self.arcs)
        return dg

    def sinks(self) -> list[int]:
        return [i for i in range(self.k) if self.digraph.out_degree(i) == 0]

    def sources(self) -> list[int]:
        return [i for i in range(self.k) if self.digraph.in_degree(i) == 0]

    def is_n_acyclic(self) -> bool:
        return self.sinks() == [self.sink_block]

    def edge(self, arc: tuple[int, int]) -> QuotientEdge:
        return QuotientEdge(self.blocks[arc[0]], self.blocks[arc[1]])

    def arc(self, e: QuotientEdge) -> tuple[int, int]:
        return self.blocks.index(e.tail), self.blocks.index(e.head)

    def sort_key(self) -> tuple:
        edges = quotient_edges(self.graph, self.partition)
        return self.partition.sort_key(), tuple(0 if pair in self.arcs else 1 for pair in edges)

    def describe(self) -> str:
        """1-based rendering such as '1->234, 1->3 | ...' used in logs and text output."""
        names = ["".join(str(v + 1) for v in sorted(b)) for b in self.blocks]
        if not self.arcs:
            return names[0]
        return ", ".join(f"{names[a]}->{names[b]}" for a, b in sorted(self.arcs))


# ── Partitions and quotients ─────────────────────────────────────────────────

def _check_k(g: Multigraph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise PartitionError(f"k={k} is outside 1..{g.n}")


def connected_partitions(g: Multigraph, k: int) -> list[Partition]:
    """All partitions into k blocks that each induce a connected subgraph."""
    _check_k(g, k)
    return list(_connected_partitions(g, k))


@lru_cache(maxsize=cfg.CACHE_SIZE)
def _connected_partitions(g: Multigraph, k: int) -> tuple[Partition, ...]:
    graph = g.nx_graph
    found: list[Partition] = []

    def grow(remaining: frozenset[int], blocks: list[Block]) -> None:
        left = k - len(blocks)
        if not remaining:
            if left == 0:
                found.append(Partition.of(blocks))
            return
        if left == 0 or len(remaining) < left:
            return
        # every remaining component needs at least one block of its own
        if nx.number_connected_components(graph.subgraph(remaining)) > left:
            return
        v = min(remaining)
        others = sorted(remaining - {v})
        for size in range(len(remaining) - left + 1):
            for extra in itertools.combinations(others, size):
                block = frozenset((v, *extra))
                if nx.is_connected(graph.subgraph(block)):
                    grow(remaining - block, blocks + [block])

    grow(frozenset(range(g.n)), [])
    found.sort(key=Partition.sort_key)
    return tuple(found)


def quotient_weight(g: Multigraph, a: Block, b: Block) -> int:
    return sum(g.weights[u][v] for u in a for v in b)


@lru_cache(maxsize=cfg.CACHE_SIZE)
def quotient_edges(g: Multigraph, p: Partition) -> tuple[tuple[int, int], ...]:
    """Block-index pairs (i, j), i < j, with positive inter-block weight."""
    return tuple(
        (i, j)
        for i, j in itertools.combinations(range(p.k), 2)
        if quotient_weight(g, p.blocks[i], p.blocks[j]) > 0
    )


def quotient_order(g: Multigraph, p: Partition) -> list[int]:
    """Block indices in quotient-vertex order: partition order, sink block last."""
    s = p.index_of(g.sink)
    return [i for i in range(p.k) if i != s] + [s]


def quotient(g: Multigraph, p: Partition) -> Multigraph:
    """Quotient multigraph on the blocks, vertices in quotient_order."""
    order = quotient_order(g, p)
    rows = tuple(
        tuple(0 if a == b else quotient_weight(g, p.blocks[a], p.blocks[b]) for b in order)
        for a in order
    )
    return Multigraph(p.k, rows)


def project(g: Multigraph, d: Divisor, p: Partition) -> Divisor:
    """Push a divisor onto the quotient graph: chips summed per block."""
    return tuple(sum(d[v] for v in p.blocks[i]) for i in quotient_order(g, p))


# ── Acyclic orientations ─────────────────────────────────────────────────────

def n_acyclic_partitions(g: Multigraph, k: int) -> list[AcyclicPartition]:
    _check_k(g, k)
    return list(_n_acyclic_partitions(g, k))


@lru_cache(maxsize=cfg.CACHE_SIZE)
def _n_acyclic_partitions(g: Multigraph, k: int) -> tuple[AcyclicPartition, ...]:
    found = []
    for p in _connected_partitions(g, k):
        found.extend(_n_acyclic_orientations(g, p))
    found.sort(key=AcyclicPartition.sort_key)
    logger.info("Enumerated %d n-acyclic %d-partitions", len(found), k)
    return tuple(found)


def _n_acyclic_orientations(g: Multigraph, p: Partition) -> list[AcyclicPartition]:
    """Acyclic orientations of the quotient whose unique sink is the sink block."""
    edges = quotient_edges(g, p)
    s = p.index_of(g.sink)
    rest = [i for i in range(p.k) if i != s]
    seen: set[frozenset[tuple[int, int]]] = set()
    out = []
    # every acyclic orientation is induced by a linear order; the sink block comes last
    for order in itertools.permutations(rest):
        position = {b: i for i, b in enumerate(order)}
        position[s] = len(order)
        arcs = frozenset((i, j) if position[i] < position[j] else (j, i) for i, j in edges)
        if arcs in seen:
            continue
        seen.add(arcs)
        c = AcyclicPartition(p, arcs, g)
        if c.is_n_acyclic():
            out.append(c)
    return out


def divisor_of(c: AcyclicPartition) -> Divisor:
    """D(C): each vertex counts its edges into the heads of its block's out-arcs."""
    g = c.graph
    d = [0] * g.n
    for a, b in c.arcs:
        for u in c.blocks[a]:
            d[u] += sum(g.weights[u][v] for v in c.blocks[b])
    return tuple(d)


def edge_divisor(g: Multigraph, e: QuotientEdge) -> Divisor:
    """E = Σ a_uv·u over u in the tail and v in the head; D(C) − D(C/e)."""
    d = [0] * g.n
    for u in e.tail:
        d[u] = sum(g.weights[u][v] for v in e.head)
    return tuple(d)


# ── Contraction ──────────────────────────────────────────────────────────────

def _is_contractible(c: AcyclicPartition, arc: tuple[int, int]) -> bool:
    if arc not in c.arcs:
        return False
    dg = c.digraph.copy()
    dg.remove_edge(*arc)
    return not nx.has_path(dg, *arc)


def contractible_edges(c: AcyclicPartition) -> list[QuotientEdge]:
    """Arcs with no other directed path from tail to head."""
    return [c.edge(arc) for arc in sorted(c.arcs) if _is_contractible(c, arc)]


def contract(c: AcyclicPartition, e: QuotientEdge) -> AcyclicPartition:
    arc = c.arc(e) if e.tail in c.blocks and e.head in c.blocks else None
    if arc is None or not _is_contractible(c, arc):
        raise NotContractibleError(f"edge is not contractible in {c.describe()}")
    merged = e.tail | e.head
    others = [b for b in c.blocks if b not in (e.tail, e.head)]
    p = Partition.of(others + [merged])
    index = {old: p.blocks.index(merged if b in (e.tail, e.head) else b) for old, b in enumerate(c.blocks)}
    arcs = frozenset(
        (index[a], index[b]) for a, b in c.arcs if index[a] != index[b]
    )
    return AcyclicPartition(p, arcs, c.graph)


def mutually_contractible(c: AcyclicPartition, edges: list[QuotientEdge]) -> bool:
    """Every subset of edges can be contracted at once without creating a cycle."""
    arcs = [c.arc(e) for e in edges]
    for size in range(1, len(arcs) + 1):
        for subset in itertools.combinations(arcs, size):
            merge = nx.Graph()
            merge.add_nodes_from(range(c.k))
            merge.add_edges_from(subset)
            component = {}
            for i, comp in enumerate(nx.connected_components(merge)):
                for b in comp:
                    component[b] = i
            dg = nx.DiGraph()
            dg.add_edges_from(
                (component[a], component[b]) for a, b in c.arcs if component[a] != component[b]
            )
            if not nx.is_directed_acyclic_graph(dg):
                return False
    return True


# ── Chip-firing classes ──────────────────────────────────────────────────────

def _reverse_at(c: AcyclicPartition, i: int) -> AcyclicPartition:
    arcs = frozenset((b, a) if i in (a, b) else (a, b) for a, b in c.arcs)
    return AcyclicPartition(c.partition, arcs, c.graph)


@lru_cache(maxsize=cfg.CACHE_SIZE)
def class_members(c: AcyclicPartition) -> frozenset[AcyclicPartition]:
    """Closure of {c} under reversing all arcs at a source or at a sink."""
    seen = {c}
    queue = deque([c])
    while queue:
        current = queue.popleft()
        movable = set(current.sources()) | set(current.sinks())
        for i in sorted(movable):
            # an isolated block (k = 1) has nothing to reverse
            if current.digraph.degree(i) == 0:
                continue
            nxt = _reverse_at(current, i)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def canonical_rep(c: AcyclicPartition) -> AcyclicPartition:
    if c.is_n_acyclic():
        return c
    reps = [m for m in class_members(c) if m.is_n_acyclic()]
    assert len(reps) == 1, f"class of {c.describe()} has {len(reps)} n-acyclic members"
    return reps[0]


@dataclass(frozen=True)
class ChipClass:
    canonical: AcyclicPartition

    @classmethod
    def of(cls, c: AcyclicPartition) -> "ChipClass":
        return cls(canonical_rep(c))

    @cached_property
    def members(self) -> list[AcyclicPartition]:
        """All members, the canonical one first, the rest in canonical order."""
        rest = sorted(
            (m for m in class_members(self.canonical) if m != self.canonical),
            key=AcyclicPartition.sort_key,
        )
        return [self.canonical] + rest


def class_contractible_edges(cl: ChipClass) -> list[tuple[QuotientEdge, AcyclicPartition]]:
    """
    Each directed quotient edge contractible in some member, once, with a
    witness. The canonical member is searched first, so an edge contractible
    there is always witnessed by it.
    """
    seen: set[QuotientEdge] = set()
    out = []
    for member in cl.members:
        for e in contractible_edges(member):
            if e not in seen:
                seen.add(e)
                out.append((e, member))
    return out


# ── Signs ────────────────────────────────────────────────────────────────────

def _order_sign(rho: list[Block], tau: tuple[Block, ...]) -> int:
    return Permutation([tau.index(b) for b in rho]).signature()


def edge_sign(p: Partition, e: QuotientEdge) -> int:
    """
    Sign of contracting e in partition p.

    With τ the blocks sorted by least vertex, ρ lists e⁻, e⁺ and then the other
    blocks in τ order; ρ/e lists e⁻∪e⁺ and then the same blocks. The sign is
    the product of the signatures of ρ → τ and ρ/e → τ(p/e).
    """
    others = [b for b in p.blocks if b not in (e.tail, e.head)]
    merged = e.tail | e.head
    contracted = Partition.of(others + [merged])
    return _order_sign([e.tail, e.head] + others, p.blocks) * _order_sign(
        [merged] + others, contracted.blocks
    )


def sign(cl: ChipClass, e: QuotientEdge) -> int:
    if e not in {edge for edge, _ in class_contractible_edges(cl)}:
        raise NotContractibleError("edge is not contractible in any member of the class")
    return edge_sign(cl.canonical.partition, e)


def maximal_parking_functions(g: Multigraph) -> list[Divisor]:
    """D(C) − (1, …, 1) over the n-acyclic n-partitions C."""
    return [tuple(x - 1 for x in divisor_of(c)) for c in n_acyclic_partitions(g, g.n)]
