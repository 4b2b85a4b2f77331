"""
The labeled cell poset Part(G) that supports F0.

Cells of dimension d are the n-acyclic (d+2)-partitions, labeled by x^D(C).
The facets of a cell are its contractions and the incidence numbers are the
F0 signs, so the cellular chain complex of Part(G) is F0 with every variable
set to 1. The 0-cells are augmented onto the empty cell with the signs of the
first F0 differential.

Topology is checked through homology only: order ideals below a label and
strict order ideals below a cell.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from src.graph import Divisor, Multigraph
from src.multipoly import divides, lcm, rank_exact, scalar_int
from src.partitions import AcyclicPartition, PartitionError
from src.resolution import FreeComplex, build_F0

logger = logging.getLogger(__name__)

Cell = tuple[int, int]          # (dimension, index)


@dataclass(frozen=True)
class CWPoset:
    graph: Multigraph
    cells: tuple[tuple[AcyclicPartition, ...], ...]
    labels: dict[Cell, Divisor] = field(compare=False)
    # incidence[d][(facet index, cell index)] for cells of dimension d; d = 0 is the augmentation
    incidence: tuple[dict[tuple[int, int], int], ...] = field(compare=False)

    def all_cells(self) -> list[Cell]:
        return [(d, i) for d, layer in enumerate(self.cells) for i in range(len(layer))]

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def facets(self, cell: Cell) -> list[Cell]:
        d, i = cell
        if d == 0:
            return []
        return sorted((d - 1, r) for (r, c) in self.incidence[d] if c == i)

    @cached_property
    def _down(self) -> dict[Cell, frozenset[Cell]]:
        down: dict[Cell, frozenset[Cell]] = {}
        for cell in self.all_cells():
            below = {cell}
            for facet in self.facets(cell):
                below |= down[facet]
            down[cell] = frozenset(below)
        return down

    def down(self, cell: Cell) -> frozenset[Cell]:
        """Closed order ideal: the cell and everything below it."""
        return self._down[cell]


def build_part(g: Multigraph, f0: FreeComplex | None = None) -> CWPoset:
    if g.n < 2:
        raise PartitionError("Part(G) needs at least two vertices")
    f0 = f0 or build_F0(g)
    cells = tuple(tuple(b.key for b in basis) for basis in f0.bases[1:])
    labels = {(d, i): f0.bases[d + 1][i].multidegree for d in range(len(cells)) for i in range(len(cells[d]))}
    incidence = tuple(
        {key: scalar_int(sum(c for _, c in p.terms())) for key, p in m.entries.items()}
        for m in f0.differentials
    )
    p = CWPoset(g, cells, labels, incidence)
    logger.info("Part(G) cells per dimension: %s", [len(layer) for layer in cells])
    return p


# ── Chain complexes of subcomplexes ──────────────────────────────────────────

def _reduced_homology(p: CWPoset, chosen: set[Cell]) -> tuple[int, ...]:
    """Reduced homology of the subcomplex on `chosen`, index 0 is degree −1."""
    layers = [[0]] + [sorted(i for (d, i) in chosen if d == dim) for dim in range(p.dimension + 1)]
    dims = [len(layer) for layer in layers]
    ranks = [0]
    for d in range(p.dimension + 1):
        rows, cols = layers[d], layers[d + 1]
        mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
        row_at = {r: a for a, r in enumerate(rows)}
        for b, c in enumerate(cols):
            for (r, cc), s in p.incidence[d].items():
                if cc == c and r in row_at:
                    mat[row_at[r], b] = s
        ranks.append(rank_exact(mat.tolist()) if mat.size else 0)
    ranks.append(0)
    return tuple(dims[k] - ranks[k] - ranks[k + 1] for k in range(len(dims)))


def check_label_lcm(p: CWPoset) -> bool:
    ok = True
    for cell in p.all_cells():
        facets = p.facets(cell)
        if not facets:
            continue
        joined = p.labels[facets[0]]
        for facet in facets[1:]:
            joined = lcm(joined, p.labels[facet])
        if tuple(joined) != tuple(p.labels[cell]):
            logger.warning("cell %s: label %s is not the lcm %s of its facets", cell, p.labels[cell], joined)
            ok = False
    return ok


@dataclass
class CWReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def label_joins(p: CWPoset) -> list[Divisor]:
    joins: set[Divisor] = set()
    for cell in p.all_cells():
        label = tuple(p.labels[cell])
        joins |= {lcm(label, x) for x in joins} | {label}
    return sorted(joins)


def check_cellular_acyclicity(p: CWPoset) -> CWReport:
    """At every label join b, the cells with label dividing x^b form an acyclic complex."""
    report = CWReport()
    for b in label_joins(p):
        chosen = {cell for cell in p.all_cells() if divides(p.labels[cell], b)}
        homology = _reduced_homology(p, chosen)
        report.checked += 1
        if any(homology):
            logger.warning("subcomplex below %s has reduced homology %s", b, homology)
            report.failures.append(b)
    return report


def check_boundary_spheres(p: CWPoset) -> CWReport:
    """The boundary of every cell of dimension k ≥ 1 has the homology of S^(k−1)."""
    report = CWReport()
    for cell in p.all_cells():
        k = cell[0]
        if k == 0:
            continue
        homology = _reduced_homology(p, set(p.down(cell) - {cell}))
        expected = tuple(1 if degree == k - 1 else 0 for degree in range(-1, p.dimension + 1))
        report.checked += 1
        if homology != expected:
            logger.warning("boundary of cell %s has homology %s", cell, homology)
            report.failures.append(cell)
    return report


def meet(p: CWPoset, a: Cell, b: Cell) -> Cell | None:
    """The unique largest cell below both a and b, if any."""
    common = p.down(a) & p.down(b)
    tops = [c for c in common if not any(c != o and c in p.down(o) for o in common)]
    return tops[0] if len(tops) == 1 else None


def check_meets(p: CWPoset) -> bool:
    """Two facets of a cell meet in nothing or in exactly one closed cell."""
    ok = True
    for cell in p.all_cells():
        for a, b in itertools.combinations(p.facets(cell), 2):
            common = p.down(a) & p.down(b)
            if not common:
                continue
            m = meet(p, a, b)
            if m is None or p.down(m) != common:
                logger.warning("facets %s and %s of %s do not meet in a cell", a, b, cell)
                ok = False
    return ok


def to_json(p: CWPoset) -> dict:
    return {
        "cells": [
            {
                "id": [d, i],
                "dimension": d,
                "blocks": [sorted(v + 1 for v in block) for block in c.blocks],
                "label": list(p.labels[(d, i)]),
            }
            for d, layer in enumerate(p.cells)
            for i, c in enumerate(layer)
        ],
        "incidences": [
            {"cell": [d, c], "facet": [d - 1, r], "sign": s}
            for d in range(1, p.dimension + 1)
            for (r, c), s in sorted(p.incidence[d].items())
        ],
    }
