"""
Resolution builder – the complexes F0 (resolving the G-parking ideal M_G),
F1 (resolving the toppling ideal I_G) and their homogenization Ft.

Every complex has one basis element per n-acyclic (k+1)-partition in
homological degree k, in canonical order, so the three variants share their
bases. Differential k maps degree k to degree k-1:

  F0: entry at (C/e, C) is sign(e)·x^(D(C) − D(C/e)) over contractible e of C.
  F1: the same over every class-contractible (e, host), landing on the class
      of host/e; a bridge contributes both orientations, giving a binomial.
  Ft: the F1 terms times t^(gap / tWeight), with
      gap = ε_c − λ·(exponent of the term) − ε_target and ε_c = λ·D(c).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

import config.settings as cfg
from src.graph import Divisor, Multigraph, q_reduce, reduced_solution
from src.multipoly import Monomial, PolyMatrix, monomial_of_divisor, poly_ring, term
from src.partitions import (
    AcyclicPartition,
    ChipClass,
    QuotientEdge,
    canonical_rep,
    class_contractible_edges,
    contract,
    contractible_edges,
    divisor_of,
    edge_divisor,
    edge_sign,
    n_acyclic_partitions,
)

logger = logging.getLogger(__name__)

VARIANTS = ("F0", "F1", "Ft")


class WeightVectorError(ValueError):
    pass


@dataclass(frozen=True)
class BasisElement:
    key: AcyclicPartition
    multidegree: Divisor
    weight: int = 0


@dataclass(frozen=True)
class WeightVector:
    lam: tuple[int, ...]
    y: tuple[int, ...]
    t_weight: int = 1


@dataclass(frozen=True)
class FreeComplex:
    variant: str
    graph: Multigraph
    bases: tuple[tuple[BasisElement, ...], ...]
    differentials: tuple[PolyMatrix, ...]
    weights: WeightVector | None = None

    @property
    def ring(self):
        return poly_ring(self.graph.n)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    def differential(self, k: int) -> PolyMatrix:
        """δ_k : F_k → F_(k−1), for 1 ≤ k ≤ len(bases) − 1."""
        return self.differentials[k - 1]

    def with_differentials(self, differentials: Sequence[PolyMatrix]) -> "FreeComplex":
        return FreeComplex(self.variant, self.graph, self.bases, tuple(differentials), self.weights)


# ── Bases ────────────────────────────────────────────────────────────────────

def _bases(g: Multigraph, multidegree, weight=lambda c: 0) -> tuple[tuple[BasisElement, ...], ...]:
    return tuple(
        tuple(BasisElement(c, multidegree(c), weight(c)) for c in n_acyclic_partitions(g, k + 1))
        for k in range(g.n)
    )


def _index(basis: Sequence[BasisElement]) -> dict[AcyclicPartition, int]:
    return {b.key: i for i, b in enumerate(basis)}


def betti(g: Multigraph) -> tuple[int, ...]:
    """β_k = number of n-acyclic (k+1)-partitions, k = 0..n−1."""
    return tuple(len(n_acyclic_partitions(g, k + 1)) for k in range(g.n))


def minimal_generators_MG(g: Multigraph) -> list[Monomial]:
    """x^D(C) over the n-acyclic 2-partitions C, as exponent tuples (t slot last)."""
    if g.n == 1:
        return []
    return [monomial_of_divisor(divisor_of(c)) for c in n_acyclic_partitions(g, 2)]


# ── F0 ───────────────────────────────────────────────────────────────────────

def build_F0(g: Multigraph) -> FreeComplex:
    r = poly_ring(g.n)
    bases = _bases(g, divisor_of)
    differentials = []
    for k in range(1, g.n):
        row_of = _index(bases[k - 1])
        entries = {}
        for j, b in enumerate(bases[k]):
            c = b.key
            for e in contractible_edges(c):
                target = contract(c, e)
                entries[(row_of[target], j)] = term(
                    r, edge_sign(c.partition, e), monomial_of_divisor(edge_divisor(g, e))
                )
        differentials.append(PolyMatrix(r, len(bases[k - 1]), len(bases[k]), entries))
    logger.info("Built F0 with ranks %s", tuple(len(b) for b in bases))
    return FreeComplex("F0", g, bases, tuple(differentials))


# ── F1 ───────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ClassTerm:
    """One term of an F1 column: class edge e witnessed by host, landing on target."""

    edge: QuotientEdge
    host: AcyclicPartition
    target: AcyclicPartition
    sign: int
    exponent: Divisor
    representative: bool


def class_terms(c: AcyclicPartition) -> list[ClassTerm]:
    g = c.graph
    out = []
    for e, host in class_contractible_edges(ChipClass(c)):
        out.append(ClassTerm(
            edge=e,
            host=host,
            target=canonical_rep(contract(host, e)),
            sign=edge_sign(c.partition, e),
            exponent=edge_divisor(g, e),
            representative=host == c,
        ))
    return out


def _build_from_terms(g: Multigraph, bases, t_exponent=lambda c, ct: 0) -> list[PolyMatrix]:
    r = poly_ring(g.n)
    differentials = []
    for k in range(1, g.n):
        row_of = _index(bases[k - 1])
        entries = {}
        for j, b in enumerate(bases[k]):
            for ct in class_terms(b.key):
                key = (row_of[ct.target], j)
                entries[key] = entries.get(key, r.zero) + term(
                    r, ct.sign, monomial_of_divisor(ct.exponent, t_exponent(b.key, ct))
                )
        differentials.append(PolyMatrix(r, len(bases[k - 1]), len(bases[k]), entries))
    return differentials


def build_F1(g: Multigraph) -> FreeComplex:
    bases = _bases(g, lambda c: q_reduce(g, divisor_of(c)))
    differentials = _build_from_terms(g, bases)
    logger.info("Built F1 with ranks %s", tuple(len(b) for b in bases))
    return FreeComplex("F1", g, bases, tuple(differentials))


# ── Weight vector and Ft ─────────────────────────────────────────────────────

def validate_weight_vector(g: Multigraph, lam: Sequence[int], t_weight: int = 1) -> WeightVector:
    if g.n == 1:
        raise WeightVectorError("a weight vector needs at least two vertices")
    lam = tuple(int(x) for x in lam)
    if len(lam) != g.n:
        raise WeightVectorError(f"λ has {len(lam)} entries, graph has {g.n} vertices")
    if min(lam) < 1:
        raise WeightVectorError(f"λ={lam} has an entry below 1")
    if t_weight < 1:
        raise WeightVectorError(f"t-weight must be positive, got {t_weight}")
    y = tuple(int(x) for x in g.laplacian @ np.array(lam, dtype=np.int64))
    if min(y[:-1]) <= 0:
        raise WeightVectorError(f"Λλ={y} is not positive off the sink")
    return WeightVector(lam, y, t_weight)


def weight_vector(g: Multigraph, lam: Sequence[int] | None = None, t_weight: int | None = None) -> WeightVector:
    """
    The deterministic weight vector, or the validated user-supplied λ.

    Default: λ0 solves Λλ0 = m·(1, …, 1, −(n−1)) with λ0_n = 0 and m least;
    λ = λ0 + (1 − min λ0)·(1, …, 1).
    """
    if t_weight is None:
        t_weight = cfg.DEFAULT_T_WEIGHT
    if g.n == 1:
        raise WeightVectorError("a weight vector needs at least two vertices")
    if lam is None:
        lam0, m = reduced_solution(g)
        shift = 1 - min(lam0)
        lam = tuple(x + shift for x in lam0)
        logger.info("Weight vector λ=%s (m=%d)", lam, m)
    return validate_weight_vector(g, lam, t_weight)


def epsilon(w: WeightVector, c: AcyclicPartition) -> int:
    return int(np.dot(w.lam, divisor_of(c)))


@dataclass(frozen=True)
class Gap:
    source: AcyclicPartition
    term: ClassTerm
    gap: int


def degeneration_gaps(g: Multigraph, w: WeightVector) -> list[Gap]:
    """The t-degree gap of every F1 term, degree by degree in basis order."""
    out = []
    for k in range(2, g.n + 1):
        for c in n_acyclic_partitions(g, k):
            eps = epsilon(w, c)
            for ct in class_terms(c):
                gap = eps - int(np.dot(w.lam, ct.exponent)) - epsilon(w, ct.target)
                out.append(Gap(c, ct, gap))
    return out


def build_Ft(g: Multigraph, w: WeightVector) -> FreeComplex:
    gaps = {(gp.source, gp.term.edge): gp.gap for gp in degeneration_gaps(g, w)}
    for (c, e), gap in gaps.items():
        if gap < 0 or gap % w.t_weight:
            raise WeightVectorError(
                f"gap {gap} at {c.describe()} is not a nonnegative multiple of t-weight {w.t_weight}"
            )
    bases = _bases(g, divisor_of, lambda c: epsilon(w, c))
    differentials = _build_from_terms(
        g, bases, lambda c, ct: gaps[(c, ct.edge)] // w.t_weight
    )
    logger.info("Built Ft with λ=%s, t-weight %d", w.lam, w.t_weight)
    return FreeComplex("Ft", g, bases, tuple(differentials), w)


def build(g: Multigraph, variant: str, w: WeightVector | None = None) -> FreeComplex:
    if variant == "F0":
        return build_F0(g)
    if variant == "F1":
        return build_F1(g)
    if variant == "Ft":
        return build_Ft(g, w or weight_vector(g))
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
