"""Exhaustive point counting over F_q^n and the point-count routes to c2."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .gf import Field, FieldElement, PrimePower
from .graph import (
    Graph,
    GraphError,
    ThreeValentCorner,
    VertexPartition,
    decompletion,
    find_three_valent,
)
from .polys import DodgsonEvaluator, MultilinearPoly, build_incidence, forest_poly, kirchhoff

DEFAULT_BUDGET = 10**9
BATCH = 1 << 14


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, required: int, budget: int):
        super().__init__(f"{what} requires {required}, budget is {budget}")
        self.required = required
        self.budget = budget


class WellDefinednessError(RuntimeError):
    """q^2 does not divide the point count: an implementation bug, never data."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PointCount:
    polynomial_id: str
    field: PrimePower
    num_vars: int
    zeros: int

    def __post_init__(self):
        assert 0 <= self.zeros <= self.field.q**self.num_vars


@dataclass(frozen=True)
class ResidueReport:
    value: int
    modulus: int
    method: str
    graph_id: str
    field: PrimePower
    count: int | None = None
    runtime_ms: float = 0.0

    def __post_init__(self):
        assert 0 <= self.value < self.modulus

    def record(self) -> dict:
        return {
            "graph": self.graph_id,
            "p": self.field.p,
            "s": self.field.s,
            "q": self.field.q,
            "method": self.method,
            "count": self.count,
            "residue": self.value,
            "modulus": self.modulus,
            "runtime_ms": round(self.runtime_ms, 3),
        }


# -- evaluators ---------------------------------------------------------------
#
# A batched evaluator maps a (B, n) array of field codes to B value codes.
# They are plain classes so they pickle into worker processes.


class PolyEvaluator:
    def __init__(self, poly, F: Field):
        self.poly = poly
        self.F = F

    def __call__(self, points):
        return self.poly.evaluate_codes(self.F, points)


class ProductEvaluator:
    def __init__(self, factors: Sequence[Callable], F: Field):
        self.factors = list(factors)
        self.F = F

    def __call__(self, points):
        out = None
        for f in self.factors:
            v = f(points)
            out = v if out is None else self.F.v_mul(out, v)
        return out


class ScalarOracle:
    """Adapts a ``point -> FieldElement`` function (point: tuple of elements)."""

    def __init__(self, fn: Callable[[tuple], FieldElement], F: Field):
        self.fn = fn
        self.F = F

    def __call__(self, points):
        return np.array(
            [self.F.element(self.fn(tuple(self.F.from_code(int(c)) for c in row))).code for row in points],
            dtype=np.int64,
        )


def _batched(evaluator, F: Field):
    if isinstance(evaluator, (PolyEvaluator, ProductEvaluator, ScalarOracle, DodgsonEvaluator)):
        return evaluator
    if isinstance(evaluator, MultilinearPoly) or hasattr(evaluator, "evaluate_codes"):
        return PolyEvaluator(evaluator, F)
    if getattr(evaluator, "batched", False):
        return evaluator
    return ScalarOracle(evaluator, F)


def _decode_points(lo: int, hi: int, n: int, q: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.int64)
    powers = q ** np.arange(n, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def _count_range(args) -> int:
    evaluator, n, q, lo, hi, batch = args
    zeros = 0
    for start in range(lo, hi, batch):
        pts = _decode_points(start, min(hi, start + batch), n, q)
        zeros += int(np.count_nonzero(evaluator(pts) == 0))
    return zeros


def point_count(evaluator, n: int, F: Field, *, budget: int = DEFAULT_BUDGET, workers: int = 1,
                batch: int = BATCH, polynomial_id: str = "") -> PointCount:
    """Number of zeros over all q^n points.

    ``evaluator`` is a batched evaluator, a polynomial with ``evaluate_codes``,
    or a scalar function taking a tuple of FieldElements (serial only).
    The domain is split into contiguous index ranges, one per worker.
    """
    q = F.q
    total = q**n
    if total > budget:
        raise BudgetExceeded(f"point count over F_{q}^{n} ({total} evaluations)", total, budget)
    ev = _batched(evaluator, F)
    if workers <= 1 or total < 2 * batch or isinstance(ev, ScalarOracle):
        zeros = _count_range((ev, n, q, 0, total, batch))
    else:
        bounds = np.linspace(0, total, workers + 1, dtype=np.int64)
        jobs = [(ev, n, q, int(lo), int(hi), batch) for lo, hi in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            zeros = sum(pool.map(_count_range, jobs))
    return PointCount(polynomial_id, F.prime_power, n, zeros)


# -- c2 by point counting -----------------------------------------------------


def _check_graph(G: Graph):
    if not G.is_connected():
        raise PreconditionError("c2 needs a connected graph")
    if G.num_vertices < 3:
        raise PreconditionError("c2 needs at least 3 vertices")


def c2_via_definition(G: Graph, F: Field, *, budget: int = DEFAULT_BUDGET, workers: int = 1,
                      graph_id: str = "") -> ResidueReport:
    """([Psi_G]_q / q^2) mod q, counting zeros of det M over F_q^N."""
    _check_graph(G)
    t0 = time.perf_counter()
    ev = DodgsonEvaluator(build_incidence(G), F)
    pc = point_count(ev, G.num_edges, F, budget=budget, workers=workers, polynomial_id="Psi")
    q = F.q
    if pc.zeros % (q * q):
        raise WellDefinednessError(f"[Psi]_{q} = {pc.zeros} is not divisible by {q}^2")
    return ResidueReport((pc.zeros // (q * q)) % q, q, "definition", graph_id, F.prime_power, pc.zeros,
                         (time.perf_counter() - t0) * 1e3)


def _corner_evaluators(G: Graph, F: Field, corner: ThreeValentCorner, system=None):
    """The two Dodgson factors over the non-corner edges, in id order."""
    e1, e2, e3 = corner.edges
    free = [e for e in G.edge_ids if e not in corner.edges]
    system = system or build_incidence(G)
    d13_2 = DodgsonEvaluator(system, F, I=[e1], J=[e3], K=[e2], free=free)
    d12_23 = DodgsonEvaluator(system, F, I=[e1, e2], J=[e2, e3], free=free)
    for ev in (d13_2, d12_23):
        # each corner variable has its row or column removed, or is zeroed
        assert set(corner.edges) <= set(ev.absent), "corner variable present in a Dodgson factor"
    return d13_2, d12_23, free


def _resolve_corner(G: Graph, corner: ThreeValentCorner | None) -> ThreeValentCorner:
    if corner is None:
        return find_three_valent(G)
    if G.degree(corner.v) != 3 or set(G.incident(corner.v)) != set(corner.edges):
        raise PreconditionError(f"{corner} is not a 3-valent corner of the graph")
    return corner


def c2_via_dodgson(G: Graph, F: Field, corner: ThreeValentCorner | None = None, *,
                   budget: int = DEFAULT_BUDGET, workers: int = 1, graph_id: str = "",
                   system=None) -> ResidueReport:
    """-[Psi^{1,3}_2 Psi^{12,23}]_q mod q for the edges of a 3-valent corner."""
    _check_graph(G)
    if 2 + G.num_edges > 2 * G.num_vertices:
        raise PreconditionError("three-edge formula needs 2 + |E| <= 2|V|")
    try:
        corner = _resolve_corner(G, corner)
    except GraphError as exc:
        raise PreconditionError(str(exc)) from exc
    t0 = time.perf_counter()
    d13_2, d12_23, free = _corner_evaluators(G, F, corner, system)
    pc = point_count(ProductEvaluator([d13_2, d12_23], F), len(free), F, budget=budget, workers=workers,
                     polynomial_id="Psi^{1,3}_2 Psi^{12,23}")
    q = F.q
    return ResidueReport((-pc.zeros) % q, q, "dodgson", graph_id, F.prime_power, pc.zeros,
                         (time.perf_counter() - t0) * 1e3)


def corner_polynomials(G: Graph, corner: ThreeValentCorner) -> tuple[Graph, MultilinearPoly, MultilinearPoly]:
    """H = G - v with Psi_H and Phi_H^{b,ac}; H's edge ids follow G's non-corner edges."""
    H = decompletion(G, corner.v)
    P = VertexPartition([[corner.b], [corner.a, corner.c]])
    return H, kirchhoff(H), forest_poly(H, P)


def three_valent_counts(G: Graph, F: Field, corner: ThreeValentCorner | None = None, *,
                  budget: int = DEFAULT_BUDGET, workers: int = 1) -> tuple[int, int]:
    """(numeric Dodgson side, symbolic forest side) zero counts."""
    corner = _resolve_corner(G, corner)
    d13_2, d12_23, free = _corner_evaluators(G, F, corner)
    left = point_count(ProductEvaluator([d13_2, d12_23], F), len(free), F, budget=budget, workers=workers)
    H, psi, phi = corner_polynomials(G, corner)
    right = point_count(ProductEvaluator([PolyEvaluator(phi, F), PolyEvaluator(psi, F)], F),
                        H.num_edges, F, budget=budget, workers=workers)
    return left.zeros, right.zeros


def check_3valent_identity(G: Graph, F: Field, corner: ThreeValentCorner | None = None, **kw) -> bool:
    left, right = three_valent_counts(G, F, corner, **kw)
    return left == right
