"""
Exact polynomial arithmetic over the rationals.

Polynomials are sympy sparse ring elements of QQ[x_1, …, x_n, t] under the
graded-lex order; one ring is cached per n. A Monomial is an exponent tuple of
length n + 1 whose last slot is the exponent of t. PolyMatrix is a sparse
matrix of such polynomials.
"""

from __future__ import annotations

import itertools
import logging
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing, ring

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Polynomial = PolyElement


class MultipolyError(ValueError):
    pass


class ShapeError(MultipolyError):
    pass


@lru_cache(maxsize=None)
def poly_ring(n: int) -> PolyRing:
    names = ",".join([f"x_{i}" for i in range(1, n + 1)] + ["t"])
    return ring(names, QQ, grlex)[0]


def _qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, numbers.Integral):
        return QQ(int(value))
    return QQ.convert(value)


def scalar_int(value) -> int:
    """An integral rational coefficient as a Python int."""
    return int(QQ.to_sympy(value))


# ── Monomials ────────────────────────────────────────────────────────────────

def monomial_of_divisor(d: Sequence[int], t_exp: int = 0) -> Monomial:
    if any(x < 0 for x in d) or t_exp < 0:
        raise MultipolyError(f"divisor {tuple(d)} has a negative entry")
    return tuple(int(x) for x in d) + (int(t_exp),)


def term(r: PolyRing, coeff, monomial: Monomial) -> Polynomial:
    if len(monomial) != r.ngens:
        raise ShapeError(f"monomial {monomial} does not fit a ring with {r.ngens} generators")
    if not coeff:
        return r.zero
    return r.from_dict({tuple(monomial): _qq(coeff)})


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


# ── Polynomials ──────────────────────────────────────────────────────────────

def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def substitute(p: Polynomial, assignment: Mapping[int, object]) -> Polynomial:
    """
    Evaluate the generators listed in `assignment` (generator index -> value)
    and keep the others symbolic. Index n is t.
    """
    r = p.ring
    values = {i: _qq(v) for i, v in assignment.items()}
    out: dict[Monomial, object] = {}
    for monom, coeff in p.terms():
        exps = list(monom)
        c = coeff
        for i, value in values.items():
            if exps[i]:
                c *= value ** exps[i]
                exps[i] = 0
        if c:
            key = tuple(exps)
            out[key] = out.get(key, QQ.zero) + c
    return r.from_dict({k: v for k, v in out.items() if v})


def rescale(p: Polynomial, factors: Sequence) -> Polynomial:
    """Apply the ring map x_i -> factors[i]·x_i (generators past the end are kept)."""
    r = p.ring
    scale = [_qq(f) for f in factors]
    out = {}
    for monom, coeff in p.terms():
        c = coeff
        for f, e in zip(scale, monom):
            c *= f ** e
        out[monom] = c
    return r.from_dict(out)


def evaluate(p: Polynomial, point: Sequence) -> object:
    """Value of p at a full point (one value per generator, t included)."""
    q = substitute(p, dict(enumerate(point)))
    return q.coeff(1) if q else QQ.zero


def constant_term(p: Polynomial):
    return p.coeff(1)


def render(p: Polynomial) -> str:
    return str(p).replace("**", "^")


def render_monomial(n: int, monomial: Monomial) -> str:
    return render(term(poly_ring(n), 1, monomial))


# ── Matrices ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PolyMatrix:
    ring: PolyRing
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), p in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ShapeError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            if p:
                clean[(i, j)] = p
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, index: tuple[int, int]) -> Polynomial:
        return self.entries.get(index, self.ring.zero)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> dict[int, Polynomial]:
        return {i: p for (i, c), p in self.entries.items() if c == j}

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.rows, self.cols, {k: fn(p) for k, p in self.entries.items()})

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.cols, self.rows, {(j, i): p for (i, j), p in self.entries.items()})

    def to_rows(self, point: Sequence) -> list[list]:
        """Dense rational matrix after evaluating every entry at point."""
        rows = [[QQ.zero] * self.cols for _ in range(self.rows)]
        for (i, j), p in self.entries.items():
            rows[i][j] = evaluate(p, point)
        return rows


def identity(r: PolyRing, k: int) -> PolyMatrix:
    return PolyMatrix(r, k, k, {(i, i): r.one for i in range(k)})


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    by_row: dict[int, list[tuple[int, Polynomial]]] = {}
    for (i, j), p in b.entries.items():
        by_row.setdefault(i, []).append((j, p))
    out: dict[tuple[int, int], Polynomial] = {}
    for (i, k), p in a.entries.items():
        for j, q in by_row.get(k, ()):
            out[(i, j)] = out.get((i, j), a.ring.zero) + p * q
    return PolyMatrix(a.ring, a.rows, b.cols, out)


def rank_exact(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals; empty matrices have rank 0."""
    if not rows or not rows[0]:
        return 0
    data = [[_qq(x) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), len(data[0])), QQ).rank()


# ── Koszul complex ───────────────────────────────────────────────────────────

def koszul_bases(m: int) -> list[list[tuple[int, ...]]]:
    """Subsets of 0..m-1 by size, each size in lexicographic order."""
    return [list(itertools.combinations(range(m), k)) for k in range(m + 1)]


def koszul_complex(gens: Sequence[Polynomial], r: PolyRing) -> list[PolyMatrix]:
    """Differentials of the Koszul complex on gens; entry k-1 maps size k to size k-1."""
    bases = koszul_bases(len(gens))
    out = []
    for k in range(1, len(gens) + 1):
        row_of = {s: i for i, s in enumerate(bases[k - 1])}
        entries = {}
        for j, subset in enumerate(bases[k]):
            for pos, v in enumerate(subset):
                face = subset[:pos] + subset[pos + 1:]
                entries[(row_of[face], j)] = gens[v] if pos % 2 == 0 else -gens[v]
        out.append(PolyMatrix(r, len(bases[k - 1]), len(bases[k]), entries))
    return out
