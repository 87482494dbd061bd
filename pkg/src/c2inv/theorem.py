"""Method dispatch for c2 and the prime-power relation check."""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import DEFAULT_STATE_BUDGET, c2_via_coefficient, c2_via_partition, PARTITION_MAX_Q
from .counting import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    PreconditionError,
    ResidueReport,
    c2_via_definition,
    c2_via_dodgson,
)
from .gf import PrimePower, make_field
from .graph import Graph, three_valent_corners

METHODS = ("definition", "dodgson", "coefficient", "partition", "auto")


def _dodgson_applicable(G: Graph) -> bool:
    return bool(three_valent_corners(G)) and 2 + G.num_edges <= 2 * G.num_vertices


def choose_method(G: Graph, pp: PrimePower, budget: int = DEFAULT_BUDGET,
                  budget_states: int = DEFAULT_STATE_BUDGET) -> str:
    """Cheapest in-budget route, preferring those that give c2 modulo q."""
    q, N = pp.q, G.num_edges
    if _dodgson_applicable(G) and q ** (N - 3) <= budget:
        return "dodgson"
    if q**N <= budget:
        return "definition"
    if _dodgson_applicable(G) and q ** (N - 3) <= budget_states:
        return "coefficient"
    need = q ** (N - 3) if _dodgson_applicable(G) else q**N
    raise BudgetExceeded(f"every c2 route for q = {q} ({need} evaluations at best)", need, budget)


def compute_c2(G: Graph, pp: PrimePower, method: str = "auto", *, budget: int = DEFAULT_BUDGET,
               budget_states: int = DEFAULT_STATE_BUDGET, workers: int = 1, graph_id: str = "") -> ResidueReport:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if method == "auto":
        method = choose_method(G, pp, budget, budget_states)
    if method == "definition":
        return c2_via_definition(G, make_field(pp.p, pp.s), budget=budget, workers=workers, graph_id=graph_id)
    if method == "dodgson":
        return c2_via_dodgson(G, make_field(pp.p, pp.s), budget=budget, workers=workers, graph_id=graph_id)
    if method == "coefficient":
        return c2_via_coefficient(G, pp, budget_states=budget_states, graph_id=graph_id)
    if pp.q > PARTITION_MAX_Q:
        raise PreconditionError(f"edge-partition enumeration is limited to q <= {PARTITION_MAX_Q}")
    return c2_via_partition(G, pp, graph_id=graph_id)


@dataclass(frozen=True)
class RelationRow:
    graph_id: str
    p: int
    s: int
    method: str = ""
    c2_q: int | None = None  # residue mod q (mod p for the coefficient route)
    lhs: int | None = None  # c2^(q) mod p
    rhs: int | None = None  # (-1)^(s+1) (c2^(p))^s mod p
    corollary: bool | None = None  # c2^(q) = c2^(p) mod p, checked when p = 2 or s = p
    skipped: str | None = None

    @property
    def q(self) -> int:
        return self.p**self.s

    @property
    def passed(self) -> bool:
        return self.skipped is None and self.lhs == self.rhs and self.corollary is not False

    def record(self) -> dict:
        return {
            "graph": self.graph_id, "p": self.p, "s": self.s, "q": self.q, "method": self.method,
            "c2_q": self.c2_q, "lhs": self.lhs, "rhs": self.rhs, "corollary": self.corollary,
            "status": "SKIPPED" if self.skipped else ("PASS" if self.passed else "FAIL"),
            "note": self.skipped,
        }


def theorem1_verify(G: Graph, p: int, s_values, *, budget: int = DEFAULT_BUDGET,
                    budget_states: int = DEFAULT_STATE_BUDGET, workers: int = 1, graph_id: str = "",
                    base_method: str = "definition", method: str = "auto") -> list[RelationRow]:
    """Compare c2^(p^s) mod p with (-1)^(s+1) (c2^(p))^s for each s.

    c2^(p) comes from ``base_method`` (falling back to auto when out of
    budget), each c2^(q) from ``method``.  Budget rejections become skipped
    rows.
    """
    base = PrimePower(p, 1)
    try:
        c2_p = compute_c2(G, base, base_method, budget=budget, budget_states=budget_states,
                          workers=workers, graph_id=graph_id)
    except BudgetExceeded:
        try:
            c2_p = compute_c2(G, base, "auto", budget=budget, budget_states=budget_states,
                              workers=workers, graph_id=graph_id)
        except BudgetExceeded as exc:
            return [RelationRow(graph_id, p, s, skipped=f"c2 at p: {exc}") for s in s_values]
    rows = []
    for s in s_values:
        pp = PrimePower(p, s)
        try:
            rep = compute_c2(G, pp, method, budget=budget, budget_states=budget_states,
                             workers=workers, graph_id=graph_id)
        except BudgetExceeded as exc:
            rows.append(RelationRow(graph_id, p, s, skipped=str(exc)))
            continue
        lhs = rep.value % p
        rhs = ((-1) ** (s + 1) * c2_p.value**s) % p
        corollary = lhs == c2_p.value % p if (p == 2 or s == p) else None
        rows.append(RelationRow(graph_id, p, s, rep.method, rep.value, lhs, rhs, corollary))
    return rows
