"""Kirchhoff and spanning-forest polynomials, the matrix M, Dodgson values.

Symbolic polynomials are sets of monomials stored as bitmasks over edge ids
(bit ``e - 1`` for variable ``alpha_e``), all coefficients 1.  Dodgson
polynomials are never expanded: they are evaluated pointwise as determinants
of row/column-deleted numeric instances of M.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf import Field, FieldElement, batch_determinant
from .graph import Graph, GraphError, VertexPartition, compatible_forests, spanning_trees, vertex_key

ZERO_DEGREE = -math.inf

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _mask(vars_: Iterable[int]) -> int:
    m = 0
    for e in vars_:
        m |= 1 << (e - 1)
    return m


def _bits(mask: int) -> tuple[int, ...]:
    out, e = [], 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True)
class MultilinearPoly:
    """Sum of distinct square-free monomials in variables 1..num_vars."""

    num_vars: int
    monomials: frozenset[int]

    @classmethod
    def from_sets(cls, num_vars: int, monomials: Iterable[Iterable[int]]) -> MultilinearPoly:
        masks = [_mask(m) for m in monomials]
        if len(set(masks)) != len(masks):
            raise ValueError("repeated monomial: coefficients must be 0 or 1")
        poly = cls(num_vars, frozenset(masks))
        if any(m >> num_vars for m in masks):
            raise ValueError(f"monomial uses a variable beyond {num_vars}")
        return poly

    def terms(self) -> list[tuple[int, ...]]:
        return sorted(_bits(m) for m in self.monomials)

    def variables(self) -> set[int]:
        return set(_bits(self._union()))

    def _union(self) -> int:
        u = 0
        for m in self.monomials:
            u |= m
        return u

    def is_zero(self) -> bool:
        return not self.monomials

    def is_homogeneous(self) -> bool:
        return len({m.bit_count() for m in self.monomials}) <= 1

    def __len__(self):
        return len(self.monomials)

    def __str__(self):
        return self.pretty()

    def pretty(self, ascii: bool = False) -> str:
        if not self.monomials:
            return "0"
        out = []
        for t in self.terms():
            if not t:
                out.append("1")
            elif ascii:
                out.append("*".join(f"a{e}" for e in t))
            else:
                out.append("".join(f"α{str(e).translate(_SUBSCRIPTS)}" for e in t))
        return " + ".join(out)

    def evaluate_codes(self, F: Field, points: np.ndarray) -> np.ndarray:
        """Values at a (B, num_vars) array of field codes."""
        points = np.asarray(points, dtype=np.int64)
        total = np.zeros(points.shape[0], dtype=np.int64)
        for m in self.monomials:
            term = np.ones(points.shape[0], dtype=np.int64)
            for e in _bits(m):
                term = F.v_mul(term, points[:, e - 1])
            total = F.v_add(total, term)
        return total

    def evaluate(self, F: Field, point: Mapping[int, FieldElement] | Sequence[FieldElement]) -> FieldElement:
        codes = _point_codes(F, point, self.num_vars)
        return F.from_code(int(self.evaluate_codes(F, codes[None])[0]))


def degree(poly: MultilinearPoly) -> float:
    """Largest monomial size; -inf for the zero polynomial."""
    if poly.is_zero():
        return ZERO_DEGREE
    return max(m.bit_count() for m in poly.monomials)


def _complements(G: Graph, edge_sets: Iterable[frozenset]) -> MultilinearPoly:
    full = (1 << G.num_edges) - 1
    return MultilinearPoly(G.num_edges, frozenset(full & ~_mask(s) for s in edge_sets))


def kirchhoff(G: Graph) -> MultilinearPoly:
    """Sum over spanning trees of the product of the variables not in the tree."""
    if not G.is_connected():
        warnings.warn("Kirchhoff polynomial of a disconnected graph is zero", stacklevel=2)
        return MultilinearPoly(G.num_edges, frozenset())
    return _complements(G, spanning_trees(G))


def forest_poly(G: Graph, P: VertexPartition) -> MultilinearPoly:
    """Spanning forest polynomial for the partition P."""
    return _complements(G, compatible_forests(G, P))


@dataclass(frozen=True)
class IncidenceSystem:
    """Orientation and reduced signed incidence matrix of a graph."""

    graph: Graph
    orientation: tuple[tuple[str, str], ...]
    removed_row: str
    rows: tuple[str, ...]
    E: np.ndarray  # (|V| - 1, N) with entries in {-1, 0, 1}

    @property
    def size(self) -> int:
        """Side length of M."""
        return self.graph.num_edges + len(self.rows)

    def template(self, F: Field) -> np.ndarray:
        """M over F with every alpha slot set to zero, as a code matrix."""
        N = self.graph.num_edges
        n = self.size
        M = np.zeros((n, n), dtype=np.int64)
        Et = self.E.T
        M[:N, N:] = Et % F.p
        M[N:, :N] = (-self.E) % F.p
        return M


def build_incidence(G: Graph, orientation: Sequence[tuple[str, str]] | None = None,
                    removed_row: str | None = None) -> IncidenceSystem:
    """Default convention: edges point from the smaller to the larger endpoint
    and the row of the largest vertex is removed."""
    if not G.is_connected():
        raise GraphError("incidence system needs a connected graph")
    if orientation is None:
        orientation = tuple(tuple(sorted(e, key=vertex_key)) for e in G.edges)
    else:
        orientation = tuple(tuple(o) for o in orientation)
        for e, (o, edge) in enumerate(zip(orientation, G.edges), 1):
            if sorted(o) != sorted(edge):
                raise GraphError(f"orientation {o} does not match edge {e} = {edge}")
    if removed_row is None:
        removed_row = G.vertices[-1]
    if removed_row not in G.vertices:
        raise GraphError(f"unknown vertex {removed_row!r}")
    rows = tuple(v for v in G.vertices if v != removed_row)
    ridx = {v: i for i, v in enumerate(rows)}
    E = np.zeros((len(rows), G.num_edges), dtype=np.int64)
    for j, (tail, head) in enumerate(orientation):
        if tail in ridx:
            E[ridx[tail], j] += 1
        if head in ridx:
            E[ridx[head], j] -= 1
    return IncidenceSystem(G, orientation, removed_row, rows, E)


def _point_codes(F: Field, point, n: int) -> np.ndarray:
    if isinstance(point, Mapping):
        missing = set(range(1, n + 1)) - set(point)
        if missing:
            raise ValueError(f"point does not assign edges {sorted(missing)}")
        vals = [point[e] for e in range(1, n + 1)]
    else:
        vals = list(point)
        if len(vals) != n:
            raise ValueError(f"point has {len(vals)} coordinates, expected {n}")
    return np.array([F.element(v).code for v in vals], dtype=np.int64)


class DodgsonEvaluator:
    """Batched numeric Dodgson values det M(I,J)|_{alpha_K = 0}.

    ``free`` lists the edge ids whose values come from the point array, in
    column order; every other alpha slot is zero.
    """

    def __init__(self, system: IncidenceSystem, F: Field, I=(), J=(), K=(), free: Sequence[int] | None = None):
        I, J, K = sorted(set(I)), sorted(set(J)), set(K)
        if len(I) != len(J):
            raise ValueError(f"|I| = {len(I)} differs from |J| = {len(J)}")
        N = system.graph.num_edges
        for e in (*I, *J, *K):
            if not 1 <= e <= N:
                raise GraphError(f"no edge with id {e}")
        self.F = F
        self.free = tuple(range(1, N + 1)) if free is None else tuple(free)
        self.keep_rows = [r for r in range(system.size) if r + 1 not in I or r >= N]
        self.keep_cols = [c for c in range(system.size) if c + 1 not in J or c >= N]
        base = system.template(F)
        self.base = base[np.ix_(self.keep_rows, self.keep_cols)]
        rpos = {r: i for i, r in enumerate(self.keep_rows)}
        cpos = {c: i for i, c in enumerate(self.keep_cols)}
        # diagonal alpha slots that survive deletion and are not zeroed
        self.slots = []
        for col, e in enumerate(self.free):
            if e in K or (e - 1) not in rpos or (e - 1) not in cpos:
                continue
            self.slots.append((col, rpos[e - 1], cpos[e - 1]))
        self.absent = sorted(e for e in range(1, N + 1) if e in K or e in I or e in J)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        B = points.shape[0]
        mats = np.broadcast_to(self.base, (B,) + self.base.shape).copy()
        for col, r, c in self.slots:
            mats[:, r, c] = points[:, col]
        return batch_determinant(self.F, mats)


def psi_eval(G: Graph, point, F: Field, system: IncidenceSystem | None = None) -> FieldElement:
    """Kirchhoff polynomial at a point, as det M."""
    return dodgson_eval(G, (), (), (), point, F, system)


def dodgson_eval(G: Graph, I, J, K, point, F: Field, system: IncidenceSystem | None = None) -> FieldElement:
    """One sign choice of the Dodgson polynomial value at a point."""
    system = system or build_incidence(G)
    codes = _point_codes(F, point, G.num_edges)
    ev = DodgsonEvaluator(system, F, I, J, K)
    return F.from_code(int(ev(codes[None])[0]))
