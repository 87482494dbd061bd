"""Coefficient extraction modulo p and the combinatorial c2 routes.

The workhorse is :class:`CappedPolynomial`: a dense residue array indexed by
exponent vectors bounded coordinate-wise by a target.  Multiplying by factors
one at a time and dropping anything above the target loses nothing for the
target coefficient, since exponents never decrease.  :class:`IntPoly` is a
small exact-integer engine for polynomials that are not 0/1 multilinear.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .counting import (
    BudgetExceeded,
    PolyEvaluator,
    PreconditionError,
    ProductEvaluator,
    ResidueReport,
    corner_polynomials,
    point_count,
)
from .gf import Field, PrimePower, is_prime, make_field
from .graph import Graph, GraphError, ThreeValentCorner, VertexPartition, compatible_forests, find_three_valent, spanning_trees
from .polys import MultilinearPoly, degree

DEFAULT_STATE_BUDGET = 10**7


# -- base-p digits and Lucas --------------------------------------------------


@dataclass(frozen=True)
class DigitVector:
    digits: tuple[int, ...]  # least significant first, no trailing zeros
    base: int

    @property
    def value(self) -> int:
        return sum(d * self.base**i for i, d in enumerate(self.digits))

    def digit(self, i: int) -> int:
        return self.digits[i] if i < len(self.digits) else 0

    def padded(self, length: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(length))


def base_p_digits(n: int, p: int) -> DigitVector:
    if n < 0:
        raise ValueError("digits of a negative number")
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return DigitVector(tuple(digits), p)


def lucas_binom(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p as the product of digit-wise binomials."""
    if k < 0 or k > n:
        return 0
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    dn, dk = base_p_digits(n, p), base_p_digits(k, p)
    out = 1
    for i in range(len(dn.digits)):
        a, b = dn.digit(i), dk.digit(i)
        if b > a:
            return 0
        out = out * math.comb(a, b) % p
    return out


# -- capped dense engine ------------------------------------------------------


class CappedPolynomial:
    """Residues mod p on exponent vectors e with e_i <= cap_i."""

    def __init__(self, caps: Sequence[int], p: int, array: np.ndarray | None = None):
        self.caps = tuple(int(c) for c in caps)
        self.p = p
        shape = tuple(c + 1 for c in self.caps)
        if array is None:
            array = np.zeros(shape, dtype=np.int64)
            array[(0,) * len(shape)] = 1
        self.array = array

    @property
    def states(self) -> int:
        return self.array.size

    def multiply(self, poly: MultilinearPoly) -> CappedPolynomial:
        if poly.num_vars != len(self.caps):
            raise ValueError(f"factor has {poly.num_vars} variables, engine has {len(self.caps)}")
        out = np.zeros_like(self.array)
        for mono in poly.monomials:
            src, dst = [], []
            for i, cap in enumerate(self.caps):
                if mono >> i & 1:
                    if cap == 0:
                        break
                    src.append(slice(0, cap))
                    dst.append(slice(1, cap + 1))
                else:
                    src.append(slice(None))
                    dst.append(slice(None))
            else:
                out[tuple(dst)] += self.array[tuple(src)]
        out %= self.p
        return CappedPolynomial(self.caps, self.p, out)

    def coeff(self, exponents: Sequence[int]) -> int:
        if any(e > c for e, c in zip(exponents, self.caps)):
            raise ValueError("exponent beyond the cap was pruned")
        return int(self.array[tuple(exponents)])

    def terms(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(i) for i in idx): int(self.array[tuple(idx)]) for idx in np.argwhere(self.array)}


def capped_coeff(factors: Sequence[tuple[MultilinearPoly, int]], target: Sequence[int], p: int, *,
                 budget_states: int = DEFAULT_STATE_BUDGET, max_factors: int = 10_000) -> int:
    """[target] of prod poly^mult, modulo p, factors multiplied in the given order."""
    states = math.prod(t + 1 for t in target)
    if states > budget_states:
        raise BudgetExceeded(f"capped expansion ({states} states)", states, budget_states)
    if sum(m for _, m in factors) > max_factors:
        raise BudgetExceeded("capped expansion factor count", sum(m for _, m in factors), max_factors)
    engine = CappedPolynomial(target, p)
    for poly, mult in factors:
        for _ in range(mult):
            engine = engine.multiply(poly)
    return engine.coeff(target)


# -- exact integer engine ------------------------------------------------------


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial as {exponent tuple: coefficient}."""

    num_vars: int
    coeffs: Mapping[tuple[int, ...], int]

    @classmethod
    def from_multilinear(cls, poly: MultilinearPoly) -> IntPoly:
        return cls(poly.num_vars, {tuple(m >> i & 1 for i in range(poly.num_vars)): 1 for m in poly.monomials})

    def mul(self, other: IntPoly, caps: Sequence[int] | None = None, modulus: int | None = None) -> IntPoly:
        out: dict[tuple[int, ...], int] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if caps is not None and any(x > c for x, c in zip(e, caps)):
                    continue
                out[e] = out.get(e, 0) + ca * cb
        if modulus is not None:
            out = {e: c % modulus for e, c in out.items()}
        return IntPoly(self.num_vars, {e: c for e, c in out.items() if c})

    def pow(self, k: int, caps: Sequence[int] | None = None, modulus: int | None = None) -> IntPoly:
        result = IntPoly(self.num_vars, {(0,) * self.num_vars: 1})
        for _ in range(k):
            result = result.mul(self, caps, modulus)
        return result

    def coeff(self, exponents: Sequence[int]) -> int:
        return self.coeffs.get(tuple(exponents), 0)

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def is_multilinear_01(self) -> bool:
        return all(c == 1 for c in self.coeffs.values()) and all(x <= 1 for e in self.coeffs for x in e)

    def evaluate_codes(self, F: Field, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        total = np.zeros(points.shape[0], dtype=np.int64)
        for e, c in self.coeffs.items():
            term = np.full(points.shape[0], F.v_from_int(c), dtype=np.int64)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = F.v_mul(term, points[:, i])
            total = F.v_add(total, term)
        return total


def int_coeff(factors: Sequence[tuple[IntPoly, int]], target: Sequence[int]) -> int:
    """Exact integer [target] of prod poly^mult, pruning above the target."""
    if not factors:
        return int(all(t == 0 for t in target))
    result = IntPoly(factors[0][0].num_vars, {(0,) * factors[0][0].num_vars: 1})
    for poly, mult in factors:
        result = result.mul(poly.pow(mult, caps=target), caps=target)
    return result.coeff(target)


# -- the Chevalley-Warning coefficient identity -------------------------------


def chevalley_sides(F: MultilinearPoly | IntPoly, pp: PrimePower, *, budget: int = 10**9,
                    budget_states: int = DEFAULT_STATE_BUDGET) -> tuple[int, int]:
    """(coefficient of (x_1..x_n)^(q-1) in F^(q-1) mod p, zero count of F over F_q^n)."""
    q, n = pp.q, F.num_vars
    target = [q - 1] * n
    if isinstance(F, MultilinearPoly):
        coeff = capped_coeff([(F, q - 1)], target, pp.p, budget_states=budget_states)
    else:
        coeff = int_coeff([(F, q - 1)], target) % pp.p
    field = make_field(pp.p, pp.s)
    zeros = point_count(PolyEvaluator(F, field), n, field, budget=budget).zeros
    return coeff, zeros


def chevalley_coeff_check(F: MultilinearPoly, pp: PrimePower, **kw) -> bool:
    """coefficient == (-1)^(n+1) [F]_q mod p, for F of degree n in n variables."""
    n = F.num_vars
    if degree(F) != n:
        raise PreconditionError(f"polynomial has degree {degree(F)} but {n} variables")
    coeff, zeros = chevalley_sides(F, pp, **kw)
    return coeff == ((-1) ** (n + 1) * zeros) % pp.p


@dataclass(frozen=True)
class ChevalleySharpness:
    zeros: int
    coefficient: int
    coefficient_mod_p: int
    coefficient_mod_q: int
    predicted_mod_p: int
    predicted_mod_q: int

    @property
    def holds_mod_p(self) -> bool:
        return self.coefficient_mod_p == self.predicted_mod_p

    @property
    def holds_mod_q(self) -> bool:
        return self.coefficient_mod_q == self.predicted_mod_q


def chevalley_sharpness_example(p: int = 3, s: int = 2) -> ChevalleySharpness:
    """F = 2x over GF(p^s): the identity holds mod p but fails mod q."""
    pp = PrimePower(p, s)
    q = pp.q
    F = IntPoly(1, {(1,): 2})
    coefficient = int_coeff([(F, q - 1)], [q - 1])
    field = make_field(p, s)
    zeros = point_count(PolyEvaluator(F, field), 1, field).zeros
    predicted = (-1) ** 2 * zeros
    return ChevalleySharpness(zeros, coefficient, coefficient % p, coefficient % q, predicted % p, predicted % q)


# -- c2 by coefficient extraction and by edge partitions ----------------------


def _corner_setup(G: Graph, corner: ThreeValentCorner | None):
    try:
        corner = corner or find_three_valent(G)
    except GraphError as exc:
        raise PreconditionError(str(exc)) from exc
    H, psi, phi = corner_polynomials(G, corner)
    n = H.num_edges
    if psi.is_zero() or phi.is_zero() or degree(psi) + degree(phi) != n:
        raise PreconditionError(
            f"deg Psi_H + deg Phi_H = {degree(psi) + degree(phi)} differs from the {n} variables"
        )
    return corner, H, psi, phi


def c2_via_coefficient(G: Graph, pp: PrimePower, corner: ThreeValentCorner | None = None, *,
                       budget_states: int = DEFAULT_STATE_BUDGET, graph_id: str = "") -> ResidueReport:
    """c2 mod p from [(a_4..a_N)^(q-1)](Psi_H Phi_H^{b,ac})^(q-1); modulus is p even when s > 1."""
    t0 = time.perf_counter()
    corner, H, psi, phi = _corner_setup(G, corner)
    q, n = pp.q, H.num_edges
    coeff = capped_coeff([(psi, q - 1), (phi, q - 1)], [q - 1] * n, pp.p, budget_states=budget_states)
    # point count = (-1)^(n+1) coeff and c2 = -count, so c2 = (-1)^n coeff
    value = ((-1) ** n * coeff) % pp.p
    return ResidueReport(value, pp.p, "coefficient", graph_id, pp, coeff, (time.perf_counter() - t0) * 1e3)


PARTITION_MAX_Q = 3


def edge_partition_count(H: Graph, P: VertexPartition, q: int) -> int:
    """Ordered choices of q-1 spanning trees and q-1 P-compatible forests of H
    using every edge exactly q-1 times."""
    trees = [tuple(sorted(t)) for t in spanning_trees(H)]
    forests = [tuple(sorted(f)) for f in compatible_forests(H, P)]
    k = q - 1
    pools = [trees] * k + [forests] * k

    @lru_cache(maxsize=None)
    def rec(slot: int, remaining: tuple[int, ...]) -> int:
        if slot == len(pools):
            return int(not any(remaining))
        total = 0
        for edges in pools[slot]:
            if all(remaining[e - 1] for e in edges):
                nxt = list(remaining)
                for e in edges:
                    nxt[e - 1] -= 1
                total += rec(slot + 1, tuple(nxt))
        return total

    return rec(0, (k,) * H.num_edges)


def count_edge_partitions(G: Graph, pp: PrimePower, corner: ThreeValentCorner | None = None) -> int:
    """Edge-partition count for H = G - v, reduced mod p."""
    return _partition_count(G, pp, corner)[0] % pp.p


def _partition_count(G: Graph, pp: PrimePower, corner):
    if pp.q > PARTITION_MAX_Q:
        raise PreconditionError(f"edge-partition enumeration is limited to q <= {PARTITION_MAX_Q}")
    corner, H, _, _ = _corner_setup(G, corner)
    P = VertexPartition([[corner.b], [corner.a, corner.c]])
    return edge_partition_count(H, P, pp.q), H.num_edges


def c2_via_partition(G: Graph, pp: PrimePower, corner: ThreeValentCorner | None = None, *,
                     graph_id: str = "") -> ResidueReport:
    t0 = time.perf_counter()
    count, n = _partition_count(G, pp, corner)
    value = ((-1) ** n * count) % pp.p
    return ResidueReport(value, pp.p, "partition", graph_id, pp, count, (time.perf_counter() - t0) * 1e3)


# -- the Proposition and its lemmas -------------------------------------------


def prop_both_sides(P: MultilinearPoly, Q: MultilinearPoly, p: int, s: int, *,
                    budget_states: int = DEFAULT_STATE_BUDGET) -> tuple[int, int]:
    """([(x)^(q-1)](PQ)^(q-1) mod p, ([(x)^(p-1)](PQ)^(p-1))^s mod p)."""
    if P.num_vars != Q.num_vars:
        raise ValueError("P and Q must share the variable set")
    N, q = P.num_vars, p**s
    lhs = capped_coeff([(P, q - 1), (Q, q - 1)], [q - 1] * N, p, budget_states=budget_states)
    base = capped_coeff([(P, p - 1), (Q, p - 1)], [p - 1] * N, p, budget_states=budget_states)
    return lhs, pow(base, s, p)


def prop_hypothesis_violation(F: IntPoly) -> str | None:
    if not all(x <= 1 for e in F.coeffs for x in e):
        return "not linear in each variable"
    if any(c != 1 for c in F.coeffs.values()):
        return "has a coefficient other than 0 or 1"
    return None


@dataclass(frozen=True)
class NonMultilinearReport:
    lhs: int
    rhs: int
    p: int
    s: int
    violation: str | None

    @property
    def lhs_mod_p(self) -> int:
        return self.lhs % self.p

    @property
    def rhs_mod_p(self) -> int:
        return self.rhs % self.p

    @property
    def identity_fails(self) -> bool:
        return self.lhs_mod_p != self.rhs_mod_p


def prop_counterexample_nonmultilinear(p: int = 3, s: int = 2) -> NonMultilinearReport:
    """F = (1 + x^8)(1 + y^8): [x^8y^8]F^8 against ([x^2y^2]F^2)^2, exact integers."""
    q = p**s
    F = IntPoly(2, {(0, 0): 1, (8, 0): 1, (0, 8): 1, (8, 8): 1})
    lhs = int_coeff([(F, q - 1)], [q - 1, q - 1])
    rhs = int_coeff([(F, p - 1)], [p - 1, p - 1]) ** s
    return NonMultilinearReport(lhs, rhs, p, s, prop_hypothesis_violation(F))


def block_coefficient(P: MultilinearPoly, p: int, i: int, exponents: Sequence[int]) -> int:
    """[m] P^(p^i) mod p."""
    return capped_coeff([(P, p**i)], exponents, p)


def digit_factorization_sides(P: MultilinearPoly, p: int, s: int, exponents: Sequence[int]) -> tuple[int, int]:
    """([m]P^(q-1), prod_i [m_i](P^(p^i))^(p-1)) mod p, with m_i from base-p digits.

    The i-th factor is extracted in the variables of the block: exponent
    ``p^i * digit_i`` in (P^(p^i))^(p-1).
    """
    q = p**s
    lhs = capped_coeff([(P, q - 1)], exponents, p)
    digits = [base_p_digits(k, p).padded(s) for k in exponents]
    rhs = 1
    for i in range(s):
        m_i = [p**i * d[i] for d in digits]
        rhs = rhs * capped_coeff([(P, p**i * (p - 1))], m_i, p) % p
    return lhs, rhs


def no_carry(q: int, p: int) -> bool:
    """Digits of k and q-1-k add to p-1 in every place, for all 0 <= k < q."""
    s = round(math.log(q, p))
    for k in range(q):
        a, b = base_p_digits(k, p).padded(s), base_p_digits(q - 1 - k, p).padded(s)
        if any(x + y != p - 1 for x, y in zip(a, b)):
            return False
    return True


# -- random instances ---------------------------------------------------------


def random_multilinear(rng: np.random.Generator, n: int, *, degree: int | None = None,
                       homogeneous: bool = False, density: float = 0.5) -> MultilinearPoly:
    """Random 0/1 multilinear polynomial in n variables.

    With ``degree`` set, one monomial of that size is always present and no
    larger ones are drawn; ``homogeneous`` restricts to that size.
    """
    if degree is None:
        degree = int(rng.integers(0, n + 1))
    sizes = [degree] if homogeneous else range(degree + 1)
    candidates = [c for k in sizes for c in itertools.combinations(range(1, n + 1), k)]
    chosen = {c for c in candidates if rng.random() < density}
    top = [c for c in candidates if len(c) == degree]
    if not any(len(c) == degree for c in chosen):
        chosen.add(top[int(rng.integers(len(top)))])
    return MultilinearPoly.from_sets(n, sorted(chosen))


def random_prop_pair(rng: np.random.Generator, max_vars: int = 5) -> tuple[MultilinearPoly, MultilinearPoly]:
    """Mostly pairs with deg P + deg Q = N (where the coefficients can be nonzero)."""
    N = int(rng.integers(1, max_vars + 1))
    if rng.random() < 0.8:
        d = int(rng.integers(0, N + 1))
        P = random_multilinear(rng, N, degree=d, homogeneous=bool(rng.random() < 0.7))
        Q = random_multilinear(rng, N, degree=N - d, homogeneous=bool(rng.random() < 0.7))
    else:
        P = random_multilinear(rng, N)
        Q = random_multilinear(rng, N)
    return P, Q


def random_power_monomial(rng: np.random.Generator, P: MultilinearPoly, k: int) -> list[int]:
    """Exponent vector of a product of k monomials of P drawn with replacement,
    i.e. a monomial occurring in the expansion of P^k."""
    masks = sorted(P.monomials)
    return monomial_exponents([masks[int(i)] for i in rng.integers(0, len(masks), size=k)], P.num_vars)


def monomial_exponents(poly_masks: Iterable[int], n: int) -> list[int]:
    """Exponent vector of a product of monomials given as bitmasks."""
    exps = [0] * n
    for m in poly_masks:
        for i in range(n):
            exps[i] += m >> i & 1
    return exps
