"""
Output formats for complexes and partitions: plain-text matrices, JSON and a
Macaulay2 session that resolves the same ideal independently.
"""

from __future__ import annotations

import logging

import pandas as pd
from sympy import QQ

from src.graph import Multigraph
from src.multipoly import PolyMatrix, poly_ring, render
from src.partitions import AcyclicPartition, Partition
from src.resolution import BasisElement, FreeComplex, WeightVector, minimal_generators_MG

logger = logging.getLogger(__name__)


# ── Partitions ───────────────────────────────────────────────────────────────

def partition_to_dict(c: AcyclicPartition) -> dict:
    return {
        "blocks": [sorted(v + 1 for v in b) for b in c.blocks],
        "orientation": [list(arc) for arc in sorted(c.arcs)],
    }


def partition_from_dict(g: Multigraph, doc: dict) -> AcyclicPartition:
    p = Partition.of(frozenset(v - 1 for v in b) for b in doc["blocks"])
    # block indices refer to the stored order, which is canonical
    stored = [frozenset(v - 1 for v in b) for b in doc["blocks"]]
    remap = {i: p.blocks.index(b) for i, b in enumerate(stored)}
    arcs = frozenset((remap[a], remap[b]) for a, b in doc["orientation"])
    return AcyclicPartition(p, arcs, g)


# ── Complexes: JSON ──────────────────────────────────────────────────────────

def _poly_to_terms(p) -> list:
    return [
        {"exponents": list(monom), "coefficient": [int(c.numerator), int(c.denominator)]}
        for monom, c in p.terms()
    ]


def _poly_from_terms(r, terms: list):
    return r.from_dict({tuple(t["exponents"]): QQ(*t["coefficient"]) for t in terms})


def complex_to_dict(f: FreeComplex) -> dict:
    doc = {
        "variant": f.variant,
        "graph": {"n": f.graph.n, "edges": [[u + 1, v + 1, w] for u, v, w in f.graph.edges()]},
        "ranks": list(f.ranks),
        "bases": [
            [
                {"partition": partition_to_dict(b.key), "multidegree": list(b.multidegree), "weight": b.weight}
                for b in basis
            ]
            for basis in f.bases
        ],
        "differentials": [
            {
                "rows": m.rows,
                "cols": m.cols,
                "entries": [[i, j, _poly_to_terms(p)] for (i, j), p in sorted(m.entries.items())],
            }
            for m in f.differentials
        ],
    }
    if f.weights is not None:
        doc["weights"] = {"lambda": list(f.weights.lam), "y": list(f.weights.y), "t_weight": f.weights.t_weight}
    return doc


def complex_from_dict(doc: dict) -> FreeComplex:
    g = Multigraph.from_edges(doc["graph"]["n"], [(u - 1, v - 1, w) for u, v, w in doc["graph"]["edges"]])
    r = poly_ring(g.n)
    bases = tuple(
        tuple(
            BasisElement(partition_from_dict(g, b["partition"]), tuple(b["multidegree"]), b["weight"])
            for b in basis
        )
        for basis in doc["bases"]
    )
    differentials = tuple(
        PolyMatrix(r, m["rows"], m["cols"], {(i, j): _poly_from_terms(r, terms) for i, j, terms in m["entries"]})
        for m in doc["differentials"]
    )
    weights = None
    if "weights" in doc:
        w = doc["weights"]
        weights = WeightVector(tuple(w["lambda"]), tuple(w["y"]), w["t_weight"])
    return FreeComplex(doc["variant"], g, bases, differentials, weights)


# ── Complexes: text ──────────────────────────────────────────────────────────

def matrix_frame(m: PolyMatrix, rows: list[str], cols: list[str]) -> pd.DataFrame:
    data = [[render(m[i, j]) if (i, j) in m.entries else "0" for j in range(m.cols)] for i in range(m.rows)]
    return pd.DataFrame(data, index=rows, columns=cols)


def _basis_labels(basis) -> list[str]:
    return [e.key.describe() for e in basis]


def complex_to_text(f: FreeComplex) -> str:
    lines = [f"{f.variant} on {f.graph.n} vertices, ranks {' '.join(map(str, f.ranks))}"]
    if f.weights is not None:
        lines.append(
            f"lambda = {','.join(map(str, f.weights.lam))}  y = {','.join(map(str, f.weights.y))}"
            f"  t-weight = {f.weights.t_weight}"
        )
    for k in range(1, len(f.bases)):
        frame = matrix_frame(
            f.differential(k), _basis_labels(f.bases[k - 1]), [str(j + 1) for j in range(len(f.bases[k]))]
        )
        lines.append("")
        lines.append(f"d{k}: degree {k} -> degree {k - 1}")
        lines.append("columns: " + "; ".join(f"{j + 1}={lab}" for j, lab in enumerate(_basis_labels(f.bases[k]))))
        lines.append(frame.to_string())
    return "\n".join(lines)


# ── Complexes: Macaulay2 session ─────────────────────────────────────────────

def cas_script(g: Multigraph, ideal: str) -> str:
    """Macaulay2 input that builds M_G or I_G and prints its Betti numbers."""
    names = ", ".join(f"x_{i}" for i in range(1, g.n + 1))
    lines = [
        f"R = QQ[{names}];",
        "L = matrix {" + ", ".join("{" + ", ".join(str(int(x)) for x in row) + "}" for row in g.laplacian) + "};",
    ]
    if ideal == "mg":
        gens = [render_generator(mono) for mono in minimal_generators_MG(g)] or ["0_R"]
        lines.append("I = monomialIdeal(" + ", ".join(gens) + ");")
    else:
        lines += [
            "-- toppling ideal: lattice ideal of the Laplacian lattice",
            "binom = v -> product(#v, i -> R_i^(max(v_i, 0))) - product(#v, i -> R_i^(max(-v_i, 0)));",
            "J = ideal apply(entries L, v -> binom v);",
            "I = saturate(J, product(gens R));",
        ]
    lines += ["C = res I;", "print betti C;", "print apply(length C + 1, i -> rank C_i);"]
    return "\n".join(lines) + "\n"


def render_generator(mono) -> str:
    factors = [f"x_{i + 1}^{e}" if e > 1 else f"x_{i + 1}" for i, e in enumerate(mono[:-1]) if e]
    return "*".join(factors) or "1"
