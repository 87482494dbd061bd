import itertools

import numpy as np
import pytest

from c2inv.counting import (
    BudgetExceeded,
    PolyEvaluator,
    PreconditionError,
    ResidueReport,
    c2_via_definition,
    c2_via_dodgson,
    check_3valent_identity,
    three_valent_counts,
    point_count,
)
from c2inv.gf import PrimePower, make_field
from c2inv.graph import three_valent_corners
from c2inv.polys import MultilinearPoly, kirchhoff

K4_PSI_COUNTS = {2: 36, 3: 261, 4: 1072, 5: 3225}
OCT_PSI_COUNTS = {2: 156, 3: 2529}


def field(q):
    pp = PrimePower.from_q(q)
    return make_field(pp.p, pp.s)


def naive_zero_count(poly, F):
    """Zeros over F^n, one FieldElement point at a time."""
    elements = [F.from_code(c) for c in range(F.q)]
    return sum(poly.evaluate(F, pt) == F.zero for pt in itertools.product(elements, repeat=poly.num_vars))


# -- point counting ----------------------------------------------------------------


def test_triangle_over_f2(triangle):
    F = make_field(2, 1)
    assert point_count(kirchhoff(triangle), 3, F).zeros == 4
    assert naive_zero_count(kirchhoff(triangle), F) == 4


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_hyperplane_has_q_to_n_minus_1_zeros(q, n):
    hyperplane = MultilinearPoly.from_sets(n, [[i] for i in range(1, n + 1)])
    assert point_count(hyperplane, n, field(q)).zeros == q ** (n - 1)


def test_monomial_zero_count():
    # x1 x2 vanishes unless both coordinates are nonzero
    xy = MultilinearPoly.from_sets(2, [[1, 2]])
    for q in (2, 3, 4, 7):
        assert point_count(xy, 2, field(q)).zeros == q * q - (q - 1) ** 2


def test_scalar_oracle_path():
    F = make_field(3, 1)
    count = point_count(lambda pt: pt[0] * pt[1] - F.one, 2, F)
    assert count.zeros == 2


@pytest.mark.parametrize("q", [2, 3, 4])
def test_symbolic_and_naive_counts_agree(k4, q):
    F = field(q)
    psi = kirchhoff(k4)
    assert point_count(psi, 6, F).zeros == naive_zero_count(psi, F) == K4_PSI_COUNTS[q]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_k4_definition_counts(k4, q):
    rep = c2_via_definition(k4, field(q))
    assert rep.count == K4_PSI_COUNTS[q] == q**5 + q**3 - q**2
    assert rep.value == q - 1


@pytest.mark.parametrize("q", [2, 3])
def test_oct_definition_counts(oct_g, q):
    F = field(q)
    rep = c2_via_definition(oct_g, F)
    assert rep.count == OCT_PSI_COUNTS[q] == point_count(kirchhoff(oct_g), 8, F).zeros
    assert rep.count % (q * q) == 0


def test_parallel_equals_serial(oct_g):
    F = make_field(3, 1)
    ev = PolyEvaluator(kirchhoff(oct_g), F)
    serial = point_count(ev, 8, F, batch=256)
    parallel = point_count(ev, 8, F, workers=2, batch=256)
    assert serial.zeros == parallel.zeros == OCT_PSI_COUNTS[3]


def test_budget_rejection(k4):
    with pytest.raises(BudgetExceeded) as info:
        c2_via_definition(k4, make_field(5, 1), budget=1000)
    assert info.value.required == 5**6
    assert "15625" in str(info.value)


# -- corner routes -------------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_k4_dodgson_route(k4, q):
    F = field(q)
    assert c2_via_dodgson(k4, F).value == q - 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_oct_methods_agree(oct_g, q):
    F = field(q)
    assert c2_via_definition(oct_g, F).value == c2_via_dodgson(oct_g, F).value


def test_oct_corner_choice_does_not_matter(oct_g):
    F = make_field(3, 1)
    values = {c2_via_dodgson(oct_g, F, c).value for c in three_valent_corners(oct_g)}
    assert len(values) == 1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_k4_three_valent_identity(k4, q):
    left, right = three_valent_counts(k4, field(q))
    assert left == right
    assert check_3valent_identity(k4, field(q))


def test_oct_three_valent_identity_small(oct_g):
    assert three_valent_counts(oct_g, make_field(2, 1)) == (29, 29)
    assert three_valent_counts(oct_g, make_field(3, 1)) == (175, 175)


def test_k5_is_rejected(k5):
    with pytest.raises(PreconditionError):
        c2_via_dodgson(k5, make_field(2, 1))


def test_foreign_corner_is_rejected(k4, oct_g):
    corner = three_valent_corners(oct_g)[0]
    with pytest.raises(PreconditionError):
        c2_via_dodgson(k4, make_field(2, 1), corner)


def test_tiny_graphs_rejected():
    from c2inv.graph import parse_edge_list

    with pytest.raises(PreconditionError):
        c2_via_definition(parse_edge_list("a b\n"), make_field(2, 1))
    with pytest.raises(PreconditionError):
        c2_via_definition(parse_edge_list("a b\nc d\n"), make_field(2, 1))


def test_report_record_schema(k4):
    rec = c2_via_dodgson(k4, make_field(2, 2), graph_id="k4").record()
    assert set(rec) == {"graph", "p", "s", "q", "method", "count", "residue", "modulus", "runtime_ms"}
    assert (rec["graph"], rec["p"], rec["s"], rec["q"], rec["method"]) == ("k4", 2, 2, 4, "dodgson")
    assert rec["residue"] == 3 and rec["modulus"] == 4


def test_report_rejects_out_of_range_residue():
    with pytest.raises(AssertionError):
        ResidueReport(5, 3, "definition", "x", PrimePower(3))
