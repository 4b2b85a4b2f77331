"""
Verification – independent finite checks that the built complexes are
minimal free resolutions, plus the star decomposition of the specialized F0.

Checks never raise on failure: they return a report with `ok` and log a
warning naming what failed.

  - d∘d = 0 and minimality for every variant
  - F0 strands: for every b up to the join of all multidegrees, the strand
    at b has no higher homology and H_0 = 1 exactly when x^b ∉ M_G
  - generic ranks: at a fixed-seed integer point, rank δ_k + rank δ_(k+1)
    equals rank F_k
  - an upper-Koszul Betti oracle built only from brute-force generators
  - j-star decomposition of F0 with x_j := 1, other variables := 0
  - degeneration fibers of Ft at t = 0, t = 1 and t = t0
  - tree (Koszul) and saturated (Scarf) special cases
  - parking functions and sink independence of the Betti numbers
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

import networkx as nx
import numpy as np
import pandas as pd

import config.settings as cfg
from src.graph import Divisor, Multigraph, is_superstable, q_reduce, relabel_sink, sandpile_group
from src.multipoly import (
    PolyMatrix,
    constant_term,
    divides,
    koszul_bases,
    koszul_complex,
    lcm,
    mat_mul,
    poly_ring,
    rank_exact,
    rescale,
    scalar_int,
    substitute,
    term,
)
from src.partitions import (
    AcyclicPartition,
    PartitionError,
    QuotientEdge,
    contract,
    contractible_edges,
    divisor_of,
    edge_sign,
    maximal_parking_functions,
    mutually_contractible,
    n_acyclic_partitions,
)
from src.resolution import (
    FreeComplex,
    WeightVector,
    betti,
    build_F0,
    build_F1,
    build_Ft,
    degeneration_gaps,
    epsilon,
    weight_vector,
)

logger = logging.getLogger(__name__)


class StarError(ValueError):
    pass


# ── Shared helpers ───────────────────────────────────────────────────────────

def _homology(dims: list[int], ranks: list[int]) -> tuple[int, ...]:
    """ranks[k] is the rank of the map out of degree k (ranks[0] = 0)."""
    ranks = list(ranks) + [0]
    return tuple(dims[k] - ranks[k] - ranks[k + 1] for k in range(len(dims)))


def _sign_matrix(m: PolyMatrix) -> np.ndarray:
    """Entries of m with every variable set to 1, as an integer array."""
    out = np.zeros((m.rows, m.cols), dtype=np.int64)
    for (i, j), p in m.entries.items():
        out[i, j] = scalar_int(sum(c for _, c in p.terms()))
    return out


def _np_rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return rank_exact(a.tolist())


def sign_isomorphic(a: Mapping[tuple, object], b: Mapping[tuple, object]) -> dict | None:
    """
    Basis sign flips φ with a[r, c] = φ(r)·φ(c)·b[r, c] for every entry.

    Keys are (row id, column id) with ids unique across degrees; values are
    anything closed under negation (ints, polynomials). Returns the flips, or
    None when the supports differ or no consistent choice exists.
    """
    if set(a) != set(b):
        return None
    parity: dict = {}
    adjacency: dict = {}
    for key in a:
        if a[key] == b[key]:
            p = 1
        elif a[key] == -b[key]:
            p = -1
        else:
            return None
        r, c = key
        adjacency.setdefault(r, []).append((c, p))
        adjacency.setdefault(c, []).append((r, p))
    for start in adjacency:
        if start in parity:
            continue
        parity[start] = 1
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, p in adjacency[u]:
                want = parity[u] * p
                if v not in parity:
                    parity[v] = want
                    queue.append(v)
                elif parity[v] != want:
                    return None
    return parity


def _entries_by_id(f: FreeComplex, transform: Callable = lambda p: p) -> dict:
    out = {}
    for k in range(1, len(f.bases)):
        for (i, j), p in f.differential(k).entries.items():
            value = transform(p)
            if value:
                out[((k - 1, i), (k, j))] = value
    return out


# ── Complex checks ───────────────────────────────────────────────────────────

def check_dd_zero(f: FreeComplex) -> bool:
    ok = True
    for k in range(1, len(f.differentials)):
        if not mat_mul(f.differential(k), f.differential(k + 1)).is_zero():
            logger.warning("%s: d%d∘d%d is not zero", f.variant, k, k + 1)
            ok = False
    return ok


def check_minimality(f: FreeComplex) -> bool:
    ok = True
    for k, m in enumerate(f.differentials, start=1):
        for (i, j), p in m.entries.items():
            if constant_term(p):
                logger.warning("%s: d%d entry (%d, %d) = %s has a unit term", f.variant, k, i, j, p)
                ok = False
    return ok


def check_multidegrees_F1(g: Multigraph, f: FreeComplex) -> bool:
    """Each term's monomial times the target class equals the source class."""
    ok = True
    for k in range(1, len(f.bases)):
        for (i, j), p in f.differential(k).entries.items():
            target = f.bases[k - 1][i].multidegree
            source = f.bases[k][j].multidegree
            for monom, _ in p.terms():
                shifted = tuple(a + b for a, b in zip(monom[: g.n], target))
                if q_reduce(g, shifted) != source:
                    logger.warning("F1: d%d entry (%d, %d) breaks the class grading", k, i, j)
                    ok = False
    return ok


# ── Generators and membership ────────────────────────────────────────────────

def parking_ideal_generators(g: Multigraph) -> list[Divisor]:
    """Minimalization of x^(S→S̄) over nonempty S ⊆ non-sink vertices (brute force)."""
    candidates = set()
    for size in range(1, g.n):
        for s in itertools.combinations(range(g.n - 1), size):
            inside = set(s)
            candidates.add(tuple(
                sum(g.weights[u][v] for v in range(g.n) if v not in inside) if u in inside else 0
                for u in range(g.n)
            ))
    minimal = [a for a in candidates if not any(b != a and divides(b, a) for b in candidates)]
    return sorted(minimal)


def in_ideal(b: Divisor, gens: list[Divisor]) -> bool:
    return any(divides(gen, b) for gen in gens)


# ── F0 strands ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class StrandReport:
    multidegree: Divisor
    ranks: tuple[int, ...]
    homology: tuple[int, ...]
    ok: bool


def strand_exactness_F0(g: Multigraph, f: FreeComplex | None = None) -> list[StrandReport]:
    f = f or build_F0(g)
    gens = parking_ideal_generators(g)
    signs = [_sign_matrix(m) for m in f.differentials]
    degrees = [[np.array(b.multidegree[:-1]) for b in basis] for basis in f.bases]
    join = np.max(np.array([d for basis in degrees for d in basis]), axis=0) if g.n > 1 else np.array([])

    @lru_cache(maxsize=None)
    def homology_of(mask: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        dims = [len(m) for m in mask]
        ranks = [0] + [
            _np_rank(signs[k - 1][np.ix_(mask[k - 1], mask[k])]) for k in range(1, len(mask))
        ]
        return tuple(dims), _homology(dims, ranks)

    reports = []
    for b in itertools.product(*(range(int(x) + 1) for x in join)):
        bv = np.array(b, dtype=np.int64)
        mask = tuple(
            tuple(i for i, d in enumerate(basis) if np.all(d <= bv)) for basis in degrees
        )
        dims, hom = homology_of(mask)
        full = tuple(b) + (0,)
        expected_h0 = 0 if in_ideal(full, gens) else 1
        ok = hom[0] == expected_h0 and all(h == 0 for h in hom[1:])
        if not ok:
            logger.warning("F0 strand at %s has homology %s", full, hom)
        reports.append(StrandReport(full, dims, hom, ok))
    logger.info("Checked %d F0 strands (%d distinct)", len(reports), homology_of.cache_info().currsize)
    return reports


# ── Generic point ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GenericReport:
    variant: str
    point: tuple[int, ...]
    delta_ranks: tuple[int, ...]
    ok: bool


def generic_point(n: int, seed: int | None = None) -> tuple[int, ...]:
    rng = np.random.default_rng(cfg.SEED if seed is None else seed)
    return tuple(int(x) for x in rng.integers(cfg.GENERIC_LOW, cfg.GENERIC_HIGH + 1, size=n))


def generic_exactness(f: FreeComplex, seed: int | None = None) -> GenericReport:
    point = generic_point(f.graph.n, seed) + (1,)
    delta_ranks = [rank_exact(m.to_rows(point)) for m in f.differentials]
    padded = [0] + delta_ranks + [0]
    ok = True
    for k in range(1, len(f.bases)):
        if padded[k] + padded[k + 1] != f.ranks[k]:
            logger.warning(
                "%s: rank d%d + rank d%d = %d, F_%d has rank %d",
                f.variant, k, k + 1, padded[k] + padded[k + 1], k, f.ranks[k],
            )
            ok = False
    return GenericReport(f.variant, point, tuple(delta_ranks), ok)


# ── Betti oracle ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class OracleReport:
    totals: tuple[int, ...]
    table: pd.DataFrame = field(compare=False)


def _reduced_homology(faces: list[frozenset[int]]) -> list[int]:
    """Reduced rational homology of a complex given by all its faces, ∅ included."""
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for face in faces:
        by_dim.setdefault(len(face) - 1, []).append(tuple(sorted(face)))
    top = max(by_dim)
    dims = [len(by_dim.get(d, [])) for d in range(-1, top + 1)]
    ranks = [0]
    for d in range(0, top + 1):
        rows = {f: i for i, f in enumerate(sorted(by_dim.get(d - 1, [])))}
        cols = sorted(by_dim.get(d, []))
        mat = [[0] * len(cols) for _ in rows]
        for j, face in enumerate(cols):
            for pos in range(len(face)):
                mat[rows[face[:pos] + face[pos + 1:]]][j] = -1 if pos % 2 else 1
        ranks.append(rank_exact(mat))
    return list(_homology(dims, ranks))


def lcm_lattice(gens: list[Divisor]) -> list[Divisor]:
    lattice: set[Divisor] = set()
    for gen in gens:
        lattice |= {lcm(gen, x) for x in lattice} | {tuple(gen)}
    return sorted(lattice)


def betti_oracle(g: Multigraph) -> OracleReport:
    """
    Betti numbers of R/M_G from upper Koszul complexes over the lcm lattice:
    β_(i,b) = dim H~_(i−2)(K^b), K^b = {squarefree σ : x^(b−σ) ∈ M_G}.
    """
    gens = parking_ideal_generators(g)
    totals = [0] * g.n
    totals[0] = 1
    rows = [{"multidegree": (0,) * g.n, "i": 0, "beta": 1}]
    for b in lcm_lattice(gens):
        support = [v for v in range(g.n) if b[v] > 0]
        faces = []
        for size in range(len(support) + 1):
            for sigma in itertools.combinations(support, size):
                reduced = tuple(x - (1 if v in sigma else 0) for v, x in enumerate(b))
                if in_ideal(reduced, gens):
                    faces.append(frozenset(sigma))
        if not faces:
            continue
        for shift, h in enumerate(_reduced_homology(faces)):
            i = shift + 1
            if h:
                if i >= len(totals):
                    totals.extend([0] * (i + 1 - len(totals)))
                totals[i] += h
                rows.append({"multidegree": b, "i": i, "beta": h})
    logger.info("Oracle Betti numbers %s from %d lattice points", tuple(totals), len(rows))
    return OracleReport(tuple(totals), pd.DataFrame(rows, columns=["multidegree", "i", "beta"]))


# ── j-stars ──────────────────────────────────────────────────────────────────

def j_edges(c: AcyclicPartition, j: int) -> list[QuotientEdge]:
    """Contractible edges whose tail holds j and whose crossing edges all leave from j."""
    g = c.graph
    out = []
    for e in contractible_edges(c):
        if j not in e.tail:
            continue
        if all(u == j for u in e.tail for v in e.head if g.weights[u][v] > 0):
            out.append(e)
    return out


def contract_many(c: AcyclicPartition, edges: list[QuotientEdge]) -> AcyclicPartition:
    """Contract edges one after another, following their endpoints through the merges."""
    anchors = [(min(e.tail), min(e.head)) for e in edges]
    for a, b in anchors:
        tail = c.blocks[c.partition.index_of(a)]
        head = c.blocks[c.partition.index_of(b)]
        c = contract(c, QuotientEdge(tail, head))
    return c


@dataclass(frozen=True)
class Summand:
    top: AcyclicPartition
    degree: int
    size: int
    members: tuple[tuple[AcyclicPartition, frozenset[int]], ...]


@dataclass
class JStarReport:
    j: int
    summands: list[Summand]
    census: Counter
    dimensions: tuple[int, ...]
    ok: bool = True
    problems: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        logger.warning("j-star decomposition (j=%d): %s", self.j + 1, message)
        self.problems.append(message)
        self.ok = False

    def census_frame(self) -> pd.DataFrame:
        rows = [{"r": r, "s": s, "q": q} for (r, s), q in sorted(self.census.items(), reverse=True)]
        return pd.DataFrame(rows, columns=["r", "s", "q"])


def star_graph(s: int) -> Multigraph:
    """Star on s vertices with the center as sink (vertex s)."""
    return Multigraph.from_edges(s, [(leaf, s - 1, 1) for leaf in range(s - 1)])


@lru_cache(maxsize=None)
def _star_complex(s: int) -> tuple[dict, dict]:
    """Specialized (x := 1) star F0 entries, and basis ids keyed by separated leaves."""
    f = build_F0(star_graph(s))
    ids = {}
    for k, basis in enumerate(f.bases):
        for i, b in enumerate(basis):
            leaves = frozenset(v for block in b.key.blocks if s - 1 not in block for v in block)
            ids[(k, i)] = leaves
    entries = {
        (ids[r], ids[c]): scalar_int(sum(coeff for _, coeff in p.terms()))
        for (r, c), p in _entries_by_id(f).items()
    }
    return entries, ids


@lru_cache(maxsize=None)
def _check_star_exact(s: int) -> bool:
    f = build_F0(star_graph(s))
    ranks = [0] + [_np_rank(_sign_matrix(m)) for m in f.differentials]
    return all(h == 0 for h in _homology(list(f.ranks), ranks))


def _check_j(g: Multigraph, j: int) -> None:
    if not 0 <= j < g.n:
        raise StarError(f"vertex {j + 1} is not in 1..{g.n}")
    if j == g.sink:
        raise StarError("j must not be the sink")


def jstar_decompose(g: Multigraph, j: int, f: FreeComplex | None = None) -> JStarReport:
    """Decompose F0 specialized at x_j := 1 (other variables := 0) into star complexes. j is 0-based."""
    _check_j(g, j)
    f = f or build_F0(g)
    assignment = {v: (1 if v == j else 0) for v in range(g.n + 1)}
    special = [m.map(lambda p: substitute(p, assignment)) for m in f.differentials]
    index = [{b.key: i for i, b in enumerate(basis)} for basis in f.bases]
    report = JStarReport(j, [], Counter(), ())

    # nonzero specialized entries are exactly the j-edge contractions, with the F0 sign
    jedges = {}
    for k, basis in enumerate(f.bases):
        for col, b in enumerate(basis):
            jedges[b.key] = j_edges(b.key, j)
            if k == 0:
                continue
            expected = {
                (index[k - 1][contract(b.key, e)], col): edge_sign(b.key.partition, e) for e in jedges[b.key]
            }
            found = {key: scalar_int(constant_term(p)) for key, p in special[k - 1].entries.items() if key[1] == col}
            if found != expected:
                report.fail(f"specialized column of {b.key.describe()} is not its j-edge contractions")

    # maximal elements: nothing contracts onto them along a j-edge
    owner: dict[tuple[int, int], int] = {}
    for k, basis in enumerate(f.bases):
        for row, b in enumerate(basis):
            hit = k + 1 < len(f.bases) and any(key[0] == row for key in special[k].entries)
            if hit:
                continue
            edges = jedges[b.key]
            members = []
            for size in range(len(edges) + 1):
                for subset in itertools.combinations(range(len(edges)), size):
                    try:
                        member = contract_many(b.key, [edges[i] for i in subset])
                    except PartitionError:
                        report.fail(f"j-edges of {b.key.describe()} are not mutually contractible")
                        continue
                    members.append((member, frozenset(range(len(edges))) - frozenset(subset)))
            summand = Summand(b.key, k, len(edges) + 1, tuple(members))
            report.summands.append(summand)
            report.census[(k, summand.size)] += 1
            for member, _ in members:
                position = (member.k - 1, index[member.k - 1][member])
                if position in owner:
                    report.fail(f"{member.describe()} lies in two summands")
                owner[position] = len(report.summands) - 1

    total = sum(len(basis) for basis in f.bases)
    if len(owner) != total:
        report.fail(f"summands cover {len(owner)} of {total} basis elements")

    dims = [0] * len(f.bases)
    for (r, s), q in report.census.items():
        if s < 2:
            report.fail(f"summand with a single element at degree {r}")
        for k in range(len(dims)):
            if 0 <= r - k <= s - 1:
                dims[k] += q * math.comb(s - 1, r - k)
    report.dimensions = tuple(dims)
    if report.dimensions != f.ranks:
        report.fail(f"summand dimensions {report.dimensions} differ from ranks {f.ranks}")

    # block diagonal, and each block sign-isomorphic to its star complex
    blocks: dict[int, dict] = {}
    for k, m in enumerate(special, start=1):
        for (r, c), p in m.entries.items():
            rid, cid = owner.get((k - 1, r)), owner.get((k, c))
            if rid != cid:
                report.fail(f"entry ({r}, {c}) of d{k} couples two summands")
                continue
            blocks.setdefault(rid, {})[((k - 1, r), (k, c))] = scalar_int(constant_term(p))
    for sid, summand in enumerate(report.summands):
        star_entries, _ = _star_complex(summand.size)
        leaves_of = {
            (member.k - 1, index[member.k - 1][member]): leaves for member, leaves in summand.members
        }
        mine = {(leaves_of[r], leaves_of[c]): v for (r, c), v in blocks.get(sid, {}).items()}
        if sign_isomorphic(mine, star_entries) is None:
            report.fail(f"summand at {summand.top.describe()} is not a star complex")
        if summand.size >= 2 and not _check_star_exact(summand.size):
            report.fail(f"star complex on {summand.size} vertices is not exact")

    logger.info("j=%d: %d summands, census %s", j + 1, len(report.summands), dict(report.census))
    return report


def _star_formula(census: Counter, n: int, coefficient) -> tuple[int, ...]:
    return tuple(
        sum(q * coefficient(s, r, k) for (r, s), q in census.items()) for k in range(n)
    )


def _binomial(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


def star_betti_formula(g: Multigraph, j: int) -> tuple[int, ...]:
    """β_k = Σ q_(r,s)·C(s−1, r−k) over the maximal j-star census."""
    report = jstar_decompose(g, j)
    return _star_formula(report.census, g.n, lambda s, r, k: _binomial(s - 1, r - k))


def printed_star_formula(g: Multigraph, j: int) -> tuple[int, ...]:
    """The variant Σ q_(r,s)·C(s−1, k); kept to report where it disagrees with betti."""
    report = jstar_decompose(g, j)
    return _star_formula(report.census, g.n, lambda s, r, k: _binomial(s - 1, k))


# ── Degeneration ─────────────────────────────────────────────────────────────

@dataclass
class DegenerationReport:
    ok: bool = True
    rescaling_skipped: bool = False
    problems: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        logger.warning("degeneration: %s", message)
        self.problems.append(message)
        self.ok = False


def degeneration_fibers(g: Multigraph, w: WeightVector | None = None) -> DegenerationReport:
    report = DegenerationReport()
    if g.n == 1:
        return report
    w = w or weight_vector(g)
    ft, f0, f1 = build_Ft(g, w), build_F0(g), build_F1(g)
    t = g.n
    for k in range(1, g.n):
        at0 = ft.differential(k).map(lambda p: substitute(p, {t: 0}))
        at1 = ft.differential(k).map(lambda p: substitute(p, {t: 1}))
        if at0 != f0.differential(k):
            report.fail(f"d{k} at t=0 differs from F0")
        if at1 != f1.differential(k):
            report.fail(f"d{k} at t=1 differs from F1")
    for gap in degeneration_gaps(g, w):
        if gap.term.representative and gap.gap != 0:
            report.fail(f"representative edge of {gap.source.describe()} has gap {gap.gap}")
        if not gap.term.representative and gap.gap <= 0:
            report.fail(f"non-representative edge of {gap.source.describe()} has gap {gap.gap}")
    if not check_dd_zero(ft):
        report.fail("Ft is not a complex")
    if not check_fiber_rescaling(g, w, cfg.FIBER_T0, ft, f1):
        if _rescaling_integral(g, w):
            report.fail(f"fiber at t={cfg.FIBER_T0} is not a rescaled F1")
        else:
            report.rescaling_skipped = True
    return report


def _rescaling_integral(g: Multigraph, w: WeightVector) -> bool:
    if any(x % w.t_weight for x in w.lam):
        return False
    return all(
        epsilon(w, c) % w.t_weight == 0 for k in range(1, g.n + 1) for c in n_acyclic_partitions(g, k)
    )


def check_fiber_rescaling(
    g: Multigraph,
    w: WeightVector,
    t0: int,
    ft: FreeComplex | None = None,
    f1: FreeComplex | None = None,
) -> bool:
    """
    Ft at t = t0 equals F1 after x_i -> t0^(λ_i/tw)·x_i and e_c -> t0^(ε_c/tw)·e_c.
    False when the exponents are not integral.
    """
    if t0 == 0 or not _rescaling_integral(g, w):
        return False
    ft = ft or build_Ft(g, w)
    f1 = f1 or build_F1(g)
    tw = w.t_weight
    factors = [t0 ** (x // tw) for x in w.lam]
    ok = True
    for k in range(1, g.n):
        fiber = ft.differential(k).map(lambda p: rescale(substitute(p, {g.n: t0}), factors))
        keys = set(fiber.entries) | set(f1.differential(k).entries)
        for i, j in keys:
            lhs = fiber[i, j] * t0 ** (ft.bases[k - 1][i].weight // tw)
            rhs = f1.differential(k)[i, j] * t0 ** (ft.bases[k][j].weight // tw)
            if lhs != rhs:
                logger.warning("fiber at t=%d: d%d entry (%d, %d) does not rescale to F1", t0, k, i, j)
                ok = False
    return ok


# ── Special cases ────────────────────────────────────────────────────────────

@dataclass
class SpecialReport:
    tree: bool | None = None
    saturated: bool | None = None
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.tree is not False and self.saturated is not False


def _tree_is_koszul(g: Multigraph, f: FreeComplex) -> bool:
    r = poly_ring(g.n)
    parent = dict(nx.bfs_predecessors(g.nx_graph, g.sink))
    gens = [
        term(r, 1, tuple(g.weights[v][parent[v]] if u == v else 0 for u in range(g.n)) + (0,))
        for v in range(g.n - 1)
    ]
    if f.ranks != tuple(math.comb(g.n - 1, k) for k in range(g.n)):
        return False

    def delta(c: AcyclicPartition) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(divisor_of(c)) if x > 0)

    ids = {(k, i): (k, delta(b.key)) for k, basis in enumerate(f.bases) for i, b in enumerate(basis)}
    mine = {(ids[a], ids[b]): p for (a, b), p in _entries_by_id(f).items()}
    bases = koszul_bases(len(gens))
    koszul = {
        ((k - 1, bases[k - 1][i]), (k, bases[k][j])): p
        for k, m in enumerate(koszul_complex(gens, r), start=1)
        for (i, j), p in m.entries.items()
    }
    return sign_isomorphic(mine, koszul) is not None


def special_case_checks(g: Multigraph) -> SpecialReport:
    report = SpecialReport()
    if g.is_tree():
        report.tree = _tree_is_koszul(g, build_F0(g))
        if not report.tree:
            report.problems.append("tree: F0 is not sign-isomorphic to the Koszul complex")
    if g.is_saturated():
        report.saturated = True
        for k in range(1, g.n + 1):
            for c in n_acyclic_partitions(g, k):
                edges = contractible_edges(c)
                if len(edges) != k - 1 or not mutually_contractible(c, edges):
                    report.saturated = False
                    report.problems.append(f"saturated: {c.describe()} has {len(edges)} contractible edges")
    for problem in report.problems:
        logger.warning(problem)
    return report


# ── Parking functions and sink choice ────────────────────────────────────────

def check_parking_functions(g: Multigraph) -> bool:
    """
    Maximal parking functions are superstable and maximal, and the superstables
    (the configurations below some maximal one) number the sandpile-group order.
    """
    if g.n == 1:
        return True
    maximal = [tuple(x[:-1]) for x in maximal_parking_functions(g)]
    ok = True
    for c in maximal:
        full = c + (0,)
        if min(c) < 0 or not is_superstable(g, full):
            logger.warning("maximal parking function %s is not superstable", c)
            ok = False
            continue
        for v in range(g.n - 1):
            bumped = tuple(x + (1 if u == v else 0) for u, x in enumerate(full))
            if is_superstable(g, bumped):
                logger.warning("parking function %s is not maximal at vertex %d", c, v + 1)
                ok = False
    if not ok:
        return False
    box = np.max(np.array(maximal), axis=0)
    superstables = 0
    for c in itertools.product(*(range(int(x) + 1) for x in box)):
        below = any(divides(c, m) for m in maximal)
        if is_superstable(g, tuple(c) + (0,)) != below:
            logger.warning("configuration %s: superstability disagrees with the maximal ones", c)
            return False
        superstables += below
    order = math.prod(sandpile_group(g))
    if superstables != order:
        logger.warning("%d superstables, sandpile group has order %d", superstables, order)
        return False
    return True


def sink_independence(g: Multigraph) -> bool:
    reference = betti(g)
    for v in range(g.n - 1):
        other = betti(relabel_sink(g, v))
        if other != reference:
            logger.warning("Betti numbers with sink %d are %s, expected %s", v + 1, other, reference)
            return False
    return True


# ── Suite ────────────────────────────────────────────────────────────────────

CHECKS = ("complex", "strands", "generic", "oracle", "stars", "degeneration", "special", "parking")


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def run_checks(
    g: Multigraph,
    names=CHECKS,
    seed: int | None = None,
    w: WeightVector | None = None,
) -> list[CheckResult]:
    """Run the named checks in CHECKS order; each yields one or more results."""
    results: list[CheckResult] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        results.append(CheckResult(name, bool(ok), detail))

    f0, f1 = build_F0(g), build_F1(g)
    ft = build_Ft(g, w or weight_vector(g)) if g.n > 1 else None
    complexes = [f for f in (f0, f1, ft) if f is not None]

    if "complex" in names:
        for f in complexes:
            add(f"{f.variant} d∘d=0", check_dd_zero(f))
            add(f"{f.variant} minimal", check_minimality(f))
        add("F1 multidegrees", check_multidegrees_F1(g, f1))
        add("F0/F1 ranks", f0.ranks == f1.ranks, " ".join(map(str, f0.ranks)))
    if "strands" in names:
        strands = strand_exactness_F0(g, f0)
        add("F0 strands", all(s.ok for s in strands), f"{len(strands)} multidegrees")
    if "generic" in names:
        for f in complexes:
            rep = generic_exactness(f, seed)
            add(f"{f.variant} generic ranks", rep.ok, " ".join(map(str, rep.delta_ranks)))
    if "oracle" in names:
        oracle = betti_oracle(g)
        add("Betti oracle", oracle.totals == betti(g), " ".join(map(str, oracle.totals)))
    if "stars" in names:
        expected = betti(g)
        for j in range(g.n - 1):
            rep = jstar_decompose(g, j, f0)
            add(f"j-star decomposition j={j + 1}", rep.ok, "; ".join(rep.problems))
            formula = star_betti_formula(g, j)
            add(f"star Betti formula j={j + 1}", formula == expected, " ".join(map(str, formula)))
            printed = printed_star_formula(g, j)
            if printed != expected:
                logger.info("j=%d: the C(s-1, k) variant gives %s, not %s", j + 1, printed, expected)
    if "degeneration" in names and g.n > 1:
        rep = degeneration_fibers(g, w)
        detail = "rescaled fiber skipped" if rep.rescaling_skipped else "; ".join(rep.problems)
        add("degeneration fibers", rep.ok, detail)
    if "special" in names:
        rep = special_case_checks(g)
        add("special cases", rep.ok, f"tree={rep.tree} saturated={rep.saturated}")
    if "parking" in names:
        add("parking functions", check_parking_functions(g))
        add("sink independence", sink_independence(g))
    return results
